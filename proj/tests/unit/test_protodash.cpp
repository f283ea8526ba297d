#include <gtest/gtest.h>

#include <random>

#include "oracles/protodash_single.hpp"
#include "recourse/error.hpp"
#include "recourse/protodash.hpp"
#include "support/fixtures.hpp"

using namespace recourse;

namespace {

Dataset random_dataset(std::uint64_t seed, std::size_t rows) {
  std::mt19937_64 rng(seed);
  FeatureSchema schema({fixtures::numeric("x"), fixtures::numeric("y"), fixtures::ordinal("o", 4),
                        fixtures::categorical("c", 3)});
  Dataset data{schema, {}, {}};
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (std::size_t i = 0; i < rows; ++i) {
    data.rows.push_back(Instance{{u(rng), u(rng), double(rng() % 4), double(rng() % 3)}});
    data.labels.push_back(static_cast<int>(rng() % 2));
  }
  data.labels[0] = 0;
  data.labels[1] = 1;
  return data;
}

}  // namespace

TEST(Kernel, ClosedFormValues) {
  Eigen::MatrixXd p(3, 2);
  p << 0, 0, 0, 0, 1, 1;  // rows 0 and 1 coincide; row 2 is sqrt(2) away
  const auto K = rbf_kernel(p, 1.0);
  EXPECT_EQ(K(0, 0), 1.0);
  EXPECT_EQ(K(0, 1), 1.0);
  EXPECT_NEAR(K(0, 2), std::exp(-1.0), 1e-15);
}

TEST(ProtoDash, IdenticalRowsGiveUnitWeight) {
  FeatureSchema schema({fixtures::numeric("x")});
  Dataset data{schema, {Instance{{1}}, Instance{{1}}, Instance{{1}}, Instance{{5}}}, {0, 0, 0, 1}};
  const auto p = protodash_select(data, 0, 1);
  ASSERT_EQ(p.indices.size(), 1u);
  EXPECT_NEAR(p.weights[0], 1.0, 1e-12);
  EXPECT_NEAR(p.objective_trace.back(), 0.5, 1e-12);
}

TEST(ProtoDash, CentralMedoidWins) {
  FeatureSchema schema({fixtures::numeric("x"), fixtures::numeric("y")});
  Dataset data{schema, {Instance{{0, 0}}, Instance{{2, 0}}, Instance{{-2, 0}}, Instance{{0, 2}}, Instance{{0, -2}}},
               {1, 1, 1, 1, 1}};
  const auto p = protodash_select(data, 1, 1);
  EXPECT_EQ(p.indices, std::vector<std::size_t>{0});
}

TEST(ProtoDash, SingleSelectionMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = random_dataset(seed, 5 + seed * 2);
    for (int label : {0, 1}) {
      const auto best = oracle::best_single_prototype(data, label);
      const auto p = protodash_select(data, label, 1);
      if (best.objective - best.runner_up > 1e-12) {
        EXPECT_EQ(p.indices[0], best.row) << "seed " << seed;
      }
    }
  }
}

TEST(ProtoDash, WeightsNonNegativeAndObjectiveMonotone) {
  const auto data = random_dataset(99, 50);
  const auto p = protodash_select(data, 1, 10);
  for (double w : p.weights) EXPECT_GE(w, 0.0);
  for (std::size_t i = 1; i < p.objective_trace.size(); ++i)
    EXPECT_GE(p.objective_trace[i], p.objective_trace[i - 1] - 1e-12);
}

TEST(ProtoDash, Errors) {
  const auto data = random_dataset(1, 10);
  auto code = [&](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  EXPECT_EQ(code([&] { protodash_select(data, 1, 100); }), ErrorCode::MTooLarge);
  Dataset one = data;
  for (auto& l : one.labels) l = 0;
  EXPECT_EQ(code([&] { protodash_select(one, 1, 1); }), ErrorCode::ClassAbsent);
  EXPECT_EQ(code([] { top_prototype_index(PrototypeSet{}); }), ErrorCode::EmptyPrototypeSet);
}

TEST(TopPrototype, ArgmaxWithLowerIndexOnTies) {
  PrototypeSet p;
  p.indices = {4, 7, 2};
  p.weights = {0.2, 0.9, 0.1};
  EXPECT_EQ(top_prototype_index(p), 7u);
  p.indices = {5, 3};
  p.weights = {0.5, 0.5};
  EXPECT_EQ(top_prototype_index(p), 3u);
  p.indices = {6};
  p.weights = {0.4};
  EXPECT_EQ(top_prototype_index(p), 6u);
}
