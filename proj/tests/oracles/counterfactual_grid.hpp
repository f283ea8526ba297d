#pragma once

// Exhaustive counterfactual search over every combination of levels of an
// all-discrete schema. Distances follow the textbook definition directly:
// ordinal |a/(k-1) - b/(k-1)|, categorical 0/1 mismatch, weighted and summed
// in feature order.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "recourse/logistic.hpp"
#include "recourse/mad.hpp"

namespace oracle {

struct GridOptimum {
  double distance = std::numeric_limits<double>::infinity();
  std::vector<recourse::Instance> minimizers;
};

inline double discrete_distance(const recourse::FeatureSchema& schema, const recourse::Instance& a,
                                const recourse::Instance& b, const recourse::MadWeights& w) {
  double total = 0.0;
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const double span = static_cast<double>(schema[j].levels.size() - 1);
    const double d = schema[j].kind == recourse::FeatureKind::Categorical
                         ? (a[j] == b[j] ? 0.0 : 1.0)
                         : std::abs(a[j] / span - b[j] / span);
    total += w[j] * d;
  }
  return total;
}

inline GridOptimum brute_force_counterfactual(const recourse::LinearClassifier& f, const recourse::Instance& x,
                                              const recourse::MadWeights& w) {
  const auto& schema = f.schema();
  const int target = 1 - f.label(x);
  GridOptimum best;
  recourse::Instance c{std::vector<double>(schema.size(), 0.0)};
  while (true) {
    if (f.label(c) == target) {
      const double d = discrete_distance(schema, x, c, w);
      if (d < best.distance) {
        best.distance = d;
        best.minimizers = {c};
      } else if (d == best.distance) {
        best.minimizers.push_back(c);
      }
    }
    std::size_t j = 0;
    while (j < schema.size()) {
      c[j] += 1;
      if (c[j] < static_cast<double>(schema[j].levels.size())) break;
      c[j] = 0;
      ++j;
    }
    if (j == schema.size()) break;
  }
  return best;
}

}  // namespace oracle
