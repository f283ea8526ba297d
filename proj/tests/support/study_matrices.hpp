#pragma once

// Per-participant selection counts (columns c, d, p) used by the Friedman
// checks, expanded from (row, multiplicity) pairs, with reference values
// computed independently in double precision.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "recourse/response_store.hpp"

namespace fixtures {

struct CountMatrix {
  Eigen::MatrixXd m;
  double chi2, kendall_w, p;
  double c_vs_d, c_vs_p, d_vs_p;
};

inline Eigen::MatrixXd expand(const std::vector<std::pair<std::array<int, 3>, int>>& groups) {
  int n = 0;
  for (const auto& g : groups) n += g.second;
  Eigen::MatrixXd m(n, 3);
  int r = 0;
  for (const auto& [row, times] : groups)
    for (int t = 0; t < times; ++t, ++r) m.row(r) << row[0], row[1], row[2];
  return m;
}

inline CountMatrix credit_counts() {
  return {expand({{{1, 0, 2}, 2}, {{0, 1, 2}, 2}, {{2, 1, 0}, 2}, {{0, 2, 1}, 15}, {{1, 2, 0}, 11}, {{0, 3, 0}, 8}}),
          40.89473684210529, 0.5111842105263161, 1.3177126807159696e-09,
          3.550231530979886e-08, 0.7804665633060448, 1.4586428294105502e-06};
}

inline CountMatrix employee_counts() {
  return {expand({{{0, 1, 2}, 3}, {{0, 2, 1}, 11}, {{0, 3, 0}, 8}, {{1, 1, 1}, 11}, {{1, 2, 0}, 6}, {{2, 1, 0}, 4}}),
          31.40000000000003, 0.3651162790697678, 1.5190659675689382e-07,
          7.728587728617065e-05, 0.9439477480110932, 0.00030511916167852426};
}

// Pairwise export rows whose per-session selection counts equal `m`. The
// analysis only counts choices, so each row names some pair holding its
// choice; rows such as (0, 3, 0) cannot come out of a balanced plan.
inline std::vector<recourse::ResponseRow> pairwise_rows(const Eigen::MatrixXd& m, recourse::Domain domain) {
  using namespace recourse;
  static const char* pair_of[3] = {"c-d", "d-p", "c-p"};
  std::vector<ResponseRow> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    int task = 0;
    for (int kind = 0; kind < 3; ++kind)
      for (int t = 0; t < int(m(i, kind)); ++t, ++task) {
        ResponseRow r;
        r.session = "s" + std::to_string(i);
        r.participant = "p" + std::to_string(i);
        r.domain = domain;
        r.study = Study::Pairwise;
        r.scenario = std::string(to_string(domain)) + "-" + std::to_string(task + 1);
        r.kind_or_pair = pair_of[kind];
        r.choice = std::string(1, "cdp"[kind]);
        rows.push_back(r);
      }
  }
  return rows;
}

}  // namespace fixtures
