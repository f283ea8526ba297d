#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "recourse/encoding.hpp"
#include "recourse/schema.hpp"

namespace recourse {

/// RBF Gram matrix of the rows of `points`:
///   K(i,j) = exp(-|p_i - p_j|^2 / (2 bandwidth^2)), unit diagonal.
template <typename Derived>
Matrix<typename Derived::Scalar> rbf_kernel(const Eigen::MatrixBase<Derived>& points,
                                            typename Derived::Scalar bandwidth) {
  using Scalar = typename Derived::Scalar;
  if (!(bandwidth > Scalar(0))) throw Error(ErrorCode::InvalidArgument, "bandwidth must be positive");
  const Eigen::Index n = points.rows();
  const Scalar denom = Scalar(2) * bandwidth * bandwidth;
  Matrix<Scalar> K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    K(i, i) = Scalar(1);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Scalar v = std::exp(-(points.row(i) - points.row(j)).squaredNorm() / denom);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

/// Median of the non-zero pairwise Euclidean distances between rows; 1 when
/// every row coincides.
double median_heuristic_bandwidth(const Eigen::MatrixXd& points);

/// Kernel over the dataset's encoded rows (encoder fit on the dataset).
Eigen::MatrixXd kernel_matrix(const Dataset& data, double bandwidth);

struct PrototypeSet {
  std::vector<std::size_t> indices;  // dataset row indices
  std::vector<double> weights;       // one non-negative weight per index
  int class_label = 0;
  std::vector<double> objective_trace;  // objective after each greedy step
  double bandwidth = 1.0;
};

/// Greedy prototype selection maximizing l(w) = w'mu - w'Kw/2 over the rows of
/// one class, where mu_i is the mean kernel similarity of row i to the class.
///
/// Each step adds the row with the largest gradient mu_i - (Kw)_i and refits
/// the weights of the selected rows by projected coordinate ascent (tolerance
/// 1e-8, at most 10 m^2 sweeps). Selection stops early once no gradient is
/// positive. The bandwidth defaults to the median heuristic over the whole
/// dataset.
PrototypeSet protodash_select(const Dataset& data, int class_label, std::size_t m,
                              std::optional<double> bandwidth = std::nullopt);

/// w'mu - w'Kw/2 restricted to the given coordinates.
double protodash_objective(const Eigen::MatrixXd& K, const Eigen::VectorXd& mu,
                           const std::vector<std::size_t>& support, const std::vector<double>& weights);

/// Dataset row index with the largest weight; ties go to the lowest row index.
std::size_t top_prototype_index(const PrototypeSet& prototypes);
Instance top_prototype(const PrototypeSet& prototypes, const Dataset& data);

}  // namespace recourse
