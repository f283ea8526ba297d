#include "recourse/protodash.hpp"

#include <algorithm>

#include "recourse/error.hpp"
#include "recourse/mad.hpp"

namespace recourse {

double median_heuristic_bandwidth(const Eigen::MatrixXd& points) {
  std::vector<double> dists;
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index j = i + 1; j < points.rows(); ++j) {
      const double d = (points.row(i) - points.row(j)).norm();
      if (d > 0) dists.push_back(d);
    }
  if (dists.empty()) return 1.0;
  return median(std::move(dists));
}

Eigen::MatrixXd kernel_matrix(const Dataset& data, double bandwidth) {
  const Encoder enc = Encoder::fit(data);
  return rbf_kernel(enc.encode_rows(data.rows), bandwidth);
}

double protodash_objective(const Eigen::MatrixXd& K, const Eigen::VectorXd& mu,
                           const std::vector<std::size_t>& support, const std::vector<double>& weights) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t a = 0; a < support.size(); ++a) {
    const auto i = static_cast<Eigen::Index>(support[a]);
    linear += weights[a] * mu(i);
    for (std::size_t b = 0; b < support.size(); ++b)
      quad += weights[a] * weights[b] * K(i, static_cast<Eigen::Index>(support[b]));
  }
  return linear - 0.5 * quad;
}

PrototypeSet protodash_select(const Dataset& data, int class_label, std::size_t m,
                              std::optional<double> bandwidth) {
  data.validate();
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "sparsity level m must be at least 1");
  const auto members = data.rows_of_class(class_label);
  if (members.empty())
    throw Error(ErrorCode::ClassAbsent, "class has no rows", std::to_string(class_label));
  if (m > members.size())
    throw Error(ErrorCode::MTooLarge, "m exceeds class size",
                std::to_string(m) + " > " + std::to_string(members.size()));

  const Encoder enc = Encoder::fit(data);
  const Eigen::MatrixXd all = enc.encode_rows(data.rows);
  const double h = bandwidth ? *bandwidth : median_heuristic_bandwidth(all);

  Eigen::MatrixXd points(static_cast<Eigen::Index>(members.size()), all.cols());
  for (std::size_t i = 0; i < members.size(); ++i)
    points.row(static_cast<Eigen::Index>(i)) = all.row(static_cast<Eigen::Index>(members[i]));
  const Eigen::MatrixXd K = rbf_kernel(points, h);
  const Eigen::VectorXd mu = K.rowwise().mean();
  const auto n = static_cast<Eigen::Index>(members.size());

  PrototypeSet out;
  out.class_label = class_label;
  out.bandwidth = h;

  std::vector<std::size_t> support;
  std::vector<double> w;
  std::vector<bool> chosen(members.size(), false);
  const std::size_t max_sweeps = 10 * m * m;
  constexpr double kTolerance = 1e-8;

  while (support.size() < m) {
    // gradient of l at the current weights
    Eigen::VectorXd grad = mu;
    for (std::size_t a = 0; a < support.size(); ++a)
      grad -= w[a] * K.col(static_cast<Eigen::Index>(support[a]));

    Eigen::Index pick = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!chosen[static_cast<std::size_t>(i)] && (pick < 0 || grad(i) > grad(pick))) pick = i;
    if (pick < 0 || grad(pick) <= 0) break;

    chosen[static_cast<std::size_t>(pick)] = true;
    support.push_back(static_cast<std::size_t>(pick));
    w.push_back(0.0);

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
      double max_change = 0.0;
      for (std::size_t a = 0; a < support.size(); ++a) {
        const auto i = static_cast<Eigen::Index>(support[a]);
        double r = mu(i);
        for (std::size_t b = 0; b < support.size(); ++b)
          if (b != a) r -= K(i, static_cast<Eigen::Index>(support[b])) * w[b];
        const double updated = std::max(0.0, r / K(i, i));
        max_change = std::max(max_change, std::abs(updated - w[a]));
        w[a] = updated;
      }
      if (max_change < kTolerance) break;
    }
    out.objective_trace.push_back(protodash_objective(K, mu, support, w));
  }

  for (std::size_t a = 0; a < support.size(); ++a) {
    out.indices.push_back(members[support[a]]);
    out.weights.push_back(w[a]);
  }
  return out;
}

std::size_t top_prototype_index(const PrototypeSet& prototypes) {
  if (prototypes.indices.empty()) throw Error(ErrorCode::EmptyPrototypeSet, "prototype set is empty");
  std::size_t best = 0;
  for (std::size_t a = 1; a < prototypes.indices.size(); ++a) {
    const double wa = prototypes.weights[a], wb = prototypes.weights[best];
    if (wa > wb || (wa == wb && prototypes.indices[a] < prototypes.indices[best])) best = a;
  }
  return prototypes.indices[best];
}

Instance top_prototype(const PrototypeSet& prototypes, const Dataset& data) {
  const std::size_t row = top_prototype_index(prototypes);
  if (row >= data.rows.size())
    throw Error(ErrorCode::SchemaMismatch, "prototype index outside the dataset", std::to_string(row));
  return data.rows[row];
}

}  // namespace recourse
