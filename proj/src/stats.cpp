#include "recourse/stats.hpp"

#include "recourse/distributions.hpp"
#include "recourse/mad.hpp"

namespace recourse {

GofResult chi_square_gof(std::span<const std::int64_t> counts) {
  if (counts.size() < 2) throw Error(ErrorCode::InvalidArgument, "goodness of fit needs at least two categories");
  GofResult r;
  for (auto c : counts) {
    if (c < 0) throw Error(ErrorCode::InvalidArgument, "counts must be non-negative");
    r.n += c;
  }
  if (r.n == 0) throw Error(ErrorCode::ZeroTotal, "all counts are zero");
  const double expected = static_cast<double>(r.n) / static_cast<double>(counts.size());
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    r.stat += d * d / expected;
  }
  r.df = static_cast<int>(counts.size()) - 1;
  r.p = chi_square_sf(r.stat, r.df);
  return r;
}

namespace {

void check_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (m.rows() < 2 || m.cols() < 2)
    throw Error(ErrorCode::DegenerateBlocks, "need at least two blocks and two treatments",
                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  if (m.hasNaN()) throw Error(ErrorCode::IncompleteMatrix, "ratings matrix has missing cells");
}

}  // namespace

FriedmanResult friedman(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  check_matrix(m);
  const double n = static_cast<double>(m.rows()), k = static_cast<double>(m.cols());
  const Eigen::MatrixXd ranks = midranks(m);
  const Eigen::VectorXd sums = ranks.colwise().sum().transpose();

  // sum over blocks and tie groups of t^3 - t
  double ties = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      bool first = true;
      double t = 0;
      for (Eigen::Index l = 0; l < m.cols(); ++l) {
        if (m(i, l) == m(i, j)) {
          ++t;
          if (l < j) first = false;
        }
      }
      if (first) ties += t * t * t - t;
    }

  FriedmanResult r;
  r.n = static_cast<int>(m.rows());
  r.k = static_cast<int>(m.cols());
  r.df = r.k - 1;
  r.mean_ranks = sums / n;
  const double raw = 12.0 / (n * k * (k + 1.0)) * sums.squaredNorm() - 3.0 * n * (k + 1.0);
  const double correction = 1.0 - ties / (n * (k * k * k - k));
  if (correction <= 0.0) {
    r.chi2 = 0.0;
    r.p = 1.0;
  } else {
    r.chi2 = std::max(0.0, raw / correction);
    r.p = chi_square_sf(r.chi2, r.df);
  }
  r.kendall_w = r.chi2 / (n * (k - 1.0));
  return r;
}

Eigen::MatrixXd nemenyi(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  check_matrix(m);
  const double n = static_cast<double>(m.rows());
  const int k = static_cast<int>(m.cols());
  const Eigen::VectorXd mean = midranks(m).colwise().mean().transpose();
  const double se = std::sqrt(k * (k + 1.0) / (6.0 * n));
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double q = std::sqrt(2.0) * std::abs(mean(i) - mean(j)) / se;
      p(i, j) = p(j, i) = studentized_range_sf(q, k);
    }
  return p;
}

Eigen::VectorXd column_medians(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  Eigen::VectorXd out(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m.rows() == 0) {
      out(j) = std::nan("");
      continue;
    }
    std::vector<double> col(m.col(j).data(), m.col(j).data() + m.rows());
    out(j) = median(std::move(col));
  }
  return out;
}

}  // namespace recourse
