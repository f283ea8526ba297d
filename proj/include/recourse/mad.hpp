#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "recourse/encoding.hpp"
#include "recourse/schema.hpp"

namespace recourse {

/// Per-feature weights of the counterfactual distance; one strictly positive
/// finite value per schema feature.
struct MadWeights {
  Eigen::VectorXd values;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
  double operator[](std::size_t j) const { return values(static_cast<Eigen::Index>(j)); }

  static MadWeights uniform(std::size_t features);
  /// Throws InvalidArgument unless every weight is finite and > 0.
  void validate() const;
};

/// Median; the mean of the two middle values for even lengths.
double median(std::vector<double> values);

/// median(|v - median(v)|).
double median_absolute_deviation(std::span<const double> values);

/// 1 / MAD of each feature's encoded values. Categorical features use the
/// indicator "differs from the most frequent level" as their scalar value.
/// Features with MAD = 0 get weight 1.
MadWeights mad_weights(const Dataset& data, const Encoder& encoder);
MadWeights mad_weights(const Dataset& data);

}  // namespace recourse
