#pragma once

#include <cstdint>
#include <vector>

#include "recourse/scenarios.hpp"
#include "recourse/schema.hpp"

namespace recourse {

/// How one feature is sampled and how it pushes towards the unfavourable
/// label. Numeric values are uniform on [lo, hi] (rounded when `integer`);
/// discrete levels are uniform. `weight` multiplies the value rescaled to
/// [-0.5, 0.5]; positive weights raise the risk of label 1.
struct FeatureProfile {
  double lo = 0.0, hi = 1.0;
  bool integer = false;
  double weight = 0.0;
};

/// `n` rows from independent per-feature draws. The label is 1 when the
/// weighted risk plus Gaussian noise exceeds its sample median, so both
/// classes are present whenever n >= 2. Deterministic for a fixed seed.
Dataset synthetic_dataset(const FeatureSchema& schema, const std::vector<FeatureProfile>& profiles, std::size_t n,
                          std::uint64_t seed, double noise = 0.25);

/// Plausible ranges and directions for the bundled credit and employee schemas.
std::vector<FeatureProfile> domain_profiles(Domain domain);

Dataset domain_dataset(const ScenarioCorpus& corpus, Domain domain, std::size_t n, std::uint64_t seed);

}  // namespace recourse
