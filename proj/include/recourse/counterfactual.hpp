#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "recourse/logistic.hpp"
#include "recourse/mad.hpp"
#include "recourse/schema.hpp"

namespace recourse {

struct CounterfactualConfig {
  /// Grid points per numeric feature, spread evenly over the scaler range.
  int grid_steps = 6;
  std::map<std::string, int> steps;
  /// Explicit candidate values for a numeric feature; overrides the grid.
  std::map<std::string, std::vector<double>> numeric_grid;
  /// Strictly increasing, positive.
  std::vector<double> tau_schedule{0.1, 1.0, 10.0, 100.0, 1000.0};
  std::size_t max_candidates = 2'000'000;
  /// Features that must keep their factual value.
  std::set<std::string> frozen_features;

  void validate(const FeatureSchema& schema) const;
};

struct CounterfactualResult {
  Instance c;
  double distance = 0.0;
  int target_label = 0;
  std::vector<std::string> changed_features;
  /// First tau of the schedule at which `c` minimizes distance + tau * penalty
  /// over every candidate, flipped or not; the last tau if none does.
  double tau = 0.0;
  bool tau_sufficient = false;
  std::size_t candidates_evaluated = 0;
};

/// sum_j w_j |enc_j(x) - enc_j(c)| over per-feature encoded values; a changed
/// categorical feature contributes w_j.
double distance_l1_mad(const Encoder& encoder, const Instance& x, const Instance& c, const MadWeights& w);

/// How far `c` is from receiving `target_label`, in score units; exactly 0 once
/// it does.
double flip_penalty(const LinearClassifier& f, const Instance& c, int target_label);

/// The inner objective of the min-max search: distance + tau * penalty.
inline double penalized_objective(double distance, double penalty, double tau) {
  return distance + tau * penalty;
}

/// Candidate values per feature in ascending order. Frozen features keep only
/// their factual value; every other list includes it.
std::vector<std::vector<double>> candidate_grid(const LinearClassifier& f, const Instance& x,
                                                const CounterfactualConfig& config);

/// Nearest instance of the candidate grid whose predicted label differs from
/// f(x). Candidates that keep the label carry a positive penalty, which the
/// tau schedule drives to dominate, so they are never returned.
///
/// Ties in distance go to the candidate that changes earlier features (schema
/// order), then to the smaller change of the first differing feature, then to
/// the lower value.
CounterfactualResult find_counterfactual(const LinearClassifier& f, const Instance& x, const MadWeights& w,
                                         const CounterfactualConfig& config = {});

}  // namespace recourse
