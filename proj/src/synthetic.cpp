#include "recourse/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "recourse/error.hpp"

namespace recourse {

Dataset synthetic_dataset(const FeatureSchema& schema, const std::vector<FeatureProfile>& profiles, std::size_t n,
                          std::uint64_t seed, double noise) {
  if (profiles.size() != schema.size())
    throw Error(ErrorCode::SchemaMismatch, "one profile per feature is required",
                std::to_string(profiles.size()) + " vs " + std::to_string(schema.size()));
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "a synthetic dataset needs at least two rows");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  Dataset data{schema, {}, {}};
  std::vector<double> risk;
  for (std::size_t r = 0; r < n; ++r) {
    Instance x{std::vector<double>(schema.size())};
    double score = 0.0;
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const auto& spec = schema[j];
      const auto& prof = profiles[j];
      double unit;
      if (spec.is_discrete()) {
        const auto k = spec.levels.size();
        x[j] = static_cast<double>(std::uniform_int_distribution<std::size_t>(0, k - 1)(rng));
        unit = x[j] / static_cast<double>(k - 1);
      } else {
        double v = std::uniform_real_distribution<double>(prof.lo, prof.hi)(rng);
        if (prof.integer) v = std::round(v);
        x[j] = v;
        unit = prof.hi > prof.lo ? (v - prof.lo) / (prof.hi - prof.lo) : 0.5;
      }
      score += prof.weight * (unit - 0.5);
    }
    risk.push_back(score + gauss(rng));
    data.rows.push_back(std::move(x));
  }
  std::vector<double> sorted = risk;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n / 2), sorted.end());
  const double cut = sorted[n / 2];
  for (double v : risk) data.labels.push_back(v >= cut ? 1 : 0);
  return data;
}

std::vector<FeatureProfile> domain_profiles(Domain domain) {
  if (domain == Domain::Credit)
    return {
        {1000, 35000, true, 0.6},   // loan amount
        {12, 60, true, 0.4},        // term
        {5, 25, false, 0.8},        // interest rate
        {0, 0, false, 1.5},         // credit rating A..F
        {20000, 90000, true, -1.5}, // salary
        {0, 20, true, -0.5},        // experience
        {0, 80, false, 1.0},        // utilisation
        {0, 40, false, 1.0},        // debt to income
        {0, 4, true, 0.8},          // delinquencies
    };
  return {
      {18, 60, true, -0.6},    // age
      {0, 0, false, 0.8},      // business travel
      {0, 20, true, -0.6},     // tenure
      {0, 35, true, -0.3},     // lifetime employment
      {0, 60, true, 0.8},      // months since promotion
      {1500, 12000, true, -1.0},  // income
      {0, 0, false, -1.2},     // overtime Yes, No
      {0, 0, false, -1.0},     // co-worker satisfaction
      {0, 0, false, -1.2},     // job involvement
      {0, 0, false, -1.2},     // work environment
  };
}

Dataset domain_dataset(const ScenarioCorpus& corpus, Domain domain, std::size_t n, std::uint64_t seed) {
  return synthetic_dataset(corpus.domain(domain).schema, domain_profiles(domain), n, seed);
}

}  // namespace recourse
