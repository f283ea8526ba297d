#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "recourse/encoding.hpp"
#include "recourse/error.hpp"

namespace recourse {

struct GofResult {
  double stat = 0.0;
  int df = 0;
  double p = 1.0;
  std::int64_t n = 0;
};

/// Chi-square goodness of fit against the uniform distribution. Throws
/// ZeroTotal when every count is zero.
GofResult chi_square_gof(std::span<const std::int64_t> counts);

/// Within-row ranks, 1-based; tied values share their mean rank.
template <typename Derived>
Matrix<typename Derived::Scalar> midranks(const Eigen::MatrixBase<Derived>& m);

struct FriedmanResult {
  double chi2 = 0.0;
  int df = 0;
  double p = 1.0;
  double kendall_w = 0.0;
  int n = 0;  // blocks
  int k = 0;  // treatments
  Eigen::VectorXd mean_ranks;
};

/// Friedman test on an N x k matrix (rows are blocks). Ranks are midranks and
/// the tie correction is always applied; a matrix in which every block is
/// fully tied gives chi2 = 0, p = 1. kendall_w = chi2 / (N (k - 1)).
///
/// Throws IncompleteMatrix on a NaN cell and DegenerateBlocks when N < 2 or
/// k < 2.
FriedmanResult friedman(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// Nemenyi all-pairs comparison of mean ranks. For treatments i and j,
///   q = sqrt(2) |R_i - R_j| / sqrt(k (k + 1) / (6 N))
/// and p is the upper tail of the studentized range with k groups and infinite
/// degrees of freedom. Symmetric with unit diagonal.
Eigen::MatrixXd nemenyi(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// Median of each column.
Eigen::VectorXd column_medians(const Eigen::Ref<const Eigen::MatrixXd>& m);

// ---------------------------------------------------------------------------

template <typename Derived>
Matrix<typename Derived::Scalar> midranks(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> ranks(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      Scalar below = 0, equal = 0;
      for (Eigen::Index l = 0; l < m.cols(); ++l) {
        if (m(i, l) < m(i, j)) below += 1;
        if (m(i, l) == m(i, j)) equal += 1;
      }
      ranks(i, j) = below + (equal + 1) / Scalar(2);
    }
  return ranks;
}

}  // namespace recourse
