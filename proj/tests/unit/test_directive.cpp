#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "oracles/plan_enumeration.hpp"
#include "recourse/directive.hpp"
#include "recourse/error.hpp"
#include "recourse/scenarios.hpp"
#include "support/fixtures.hpp"

using namespace recourse;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvalidArgument;
}

const Scenario& tanya() { return bundled_scenarios().find("employee-1"); }
const FeatureSchema& employee_schema() { return bundled_scenarios().domain(Domain::Employee).schema; }

const Action& action(const Scenario& sc, const std::string& id) {
  return *std::find_if(sc.actions.begin(), sc.actions.end(), [&](const Action& a) { return a.id == id; });
}

// Flips Tanya's prediction only when overtime, co-worker satisfaction and job
// involvement all take their target levels.
LinearClassifier three_change_model() {
  const auto& schema = employee_schema();
  std::vector<double> lo(schema.size(), 0.0), hi(schema.size(), 1e5);
  Encoder enc(schema, lo, hi);
  const auto& sc = tanya();
  std::vector<Eigen::VectorXd> parts;
  Eigen::VectorXd total = Eigen::VectorXd::Zero(enc.dimension());
  for (const char* id : {"hire-casual-staff", "retreat-coworkers", "retreat-involvement"}) {
    const Eigen::VectorXd d = enc.encode(apply_action(schema, sc.profile, action(sc, id))) - enc.encode(sc.profile);
    parts.push_back(d);
    total += d;
  }
  double smallest = 1e9;
  for (const auto& d : parts) smallest = std::min(smallest, d.squaredNorm());
  LinearClassifier f{enc, -total, 0.0, 0.5};
  f.bias = total.squaredNorm() - smallest / 2 - f.weights.dot(enc.encode(sc.profile));
  return f;
}

// Tree with the toy benchmark at the root.
SearchTree toy_tree() {
  const auto t = fixtures::toy_benchmark();
  static const auto f = t.f;
  return SearchTree(f, t.actions, t.x, t.counterfactual);
}

}  // namespace

TEST(ApplyAction, SetsOneFeatureOnly) {
  const auto& sc = tanya();
  const auto& schema = employee_schema();
  const auto j = schema.index_of("Overtime status");
  const Instance before = sc.profile;
  const Instance after = apply_action(schema, sc.profile, action(sc, "hire-casual-staff"));
  EXPECT_EQ(format_value(schema[j], after[j]), "No");
  for (std::size_t k = 0; k < schema.size(); ++k)
    if (k != j) {
      EXPECT_EQ(after[k], before[k]);
    }
  EXPECT_EQ(sc.profile, before);
}

TEST(ApplyAction, DeltaClampsAtTheTopLevel) {
  FeatureSchema schema({fixtures::ordinal("o", 3)});
  const Action up{"up", "o", ActionEffect::Delta, 1, 1.0, ""};
  EXPECT_EQ(apply_action(schema, Instance{{2}}, up), (Instance{{2}}));
  EXPECT_EQ(apply_action(schema, Instance{{1}}, up), (Instance{{2}}));
}

TEST(ApplyAction, NonActionableFeatureIsRejected) {
  const auto& schema = employee_schema();
  const Action age{"older", "Age", ActionEffect::Delta, 1, 1.0, ""};
  EXPECT_EQ(code_of([&] { apply_action(schema, tanya().profile, age); }), ErrorCode::NotActionableFeature);
}

TEST(Uct, PureExploitationPicksTheHigherMean) {
  auto tree = toy_tree();
  tree.expand(SearchTree::root());
  auto& root = tree.node(0);
  root.n = 4;
  for (auto c : root.children) tree.node(c).n = 1;  // keep every child visited
  tree.node(root.children[0]).q = 1;
  tree.node(root.children[0]).n = 2;
  tree.node(root.children[1]).q = 0;
  tree.node(root.children[1]).n = 2;
  for (std::size_t i = 2; i < root.children.size(); ++i) tree.node(root.children[i]).q = -10;
  Rng rng(1);
  EXPECT_EQ(tree.uct_select(0, 0.0, rng), root.children[0]);
}

TEST(Uct, UnvisitedChildComesFirst) {
  auto tree = toy_tree();
  tree.expand(SearchTree::root());
  auto& root = tree.node(0);
  root.n = 10;
  for (auto c : root.children) {
    tree.node(c).n = 3;
    tree.node(c).q = 3;
  }
  tree.node(root.children[2]).n = 0;
  tree.node(root.children[2]).q = 0;
  Rng rng(7);
  EXPECT_EQ(tree.uct_select(0, 1.4, rng), root.children[2]);
}

TEST(Uct, ExplorationBonusFavoursTheRarelyVisitedChild) {
  auto tree = toy_tree();
  tree.expand(SearchTree::root());
  auto& root = tree.node(0);
  root.n = 5;
  tree.node(root.children[0]).q = 3;
  tree.node(root.children[0]).n = 4;
  tree.node(root.children[1]).q = 1;
  tree.node(root.children[1]).n = 1;
  for (std::size_t i = 2; i < root.children.size(); ++i) {
    tree.node(root.children[i]).q = -100;
    tree.node(root.children[i]).n = 1;
  }
  const double s1 = 0.75 + std::sqrt(2.0) * std::sqrt(std::log(5.0) / 4);
  const double s2 = 1.0 + std::sqrt(2.0) * std::sqrt(std::log(5.0) / 1);
  EXPECT_LT(s1, s2);
  Rng rng(3);
  EXPECT_EQ(tree.uct_select(0, std::sqrt(2.0), rng), root.children[1]);
}

TEST(Uct, NoChildren) {
  auto tree = toy_tree();
  Rng rng(0);
  EXPECT_EQ(code_of([&] { tree.uct_select(0, 1.0, rng); }), ErrorCode::NoChildren);
}

TEST(Expand, OneChildPerActionAndClampedNoOps) {
  auto tree = toy_tree();
  tree.expand(0);
  EXPECT_EQ(tree.node(0).children.size(), 4u);
  for (auto c : tree.node(0).children) {
    EXPECT_EQ(tree.node(c).n, 0u);
    EXPECT_EQ(tree.node(c).q, 0.0);
    EXPECT_EQ(tree.node(c).depth, 1u);
  }
  EXPECT_EQ(code_of([&] { tree.expand(0); }), ErrorCode::AlreadyExpanded);

  // at a = 3 both a-actions leave the state unchanged; children are kept unless pruned
  const auto t = fixtures::toy_benchmark();
  SearchTree top(t.f, {t.actions[0], t.actions[3]}, Instance{{3, 0, 0}}, t.counterfactual);
  top.expand(0);
  EXPECT_EQ(top.node(0).children.size(), 2u);
  SearchTree pruned(t.f, {t.actions[0], t.actions[3]}, Instance{{3, 0, 0}}, t.counterfactual);
  pruned.expand(0, true);
  EXPECT_TRUE(pruned.node(0).children.empty());
}

TEST(Expand, TerminalNodeIsRejected) {
  const auto t = fixtures::toy_benchmark();
  SearchTree tree(t.f, t.actions, t.counterfactual, t.counterfactual);
  EXPECT_TRUE(tree.node(0).terminal);
  EXPECT_EQ(code_of([&] { tree.expand(0); }), ErrorCode::TerminalNode);
}

TEST(Simulate, RewardAtTheCounterfactual) {
  const auto t = fixtures::toy_benchmark();
  SearchTree tree(t.f, t.actions, t.counterfactual, t.counterfactual);
  MctsConfig cfg;
  Rng rng(0);
  EXPECT_DOUBLE_EQ(tree.simulate(0, cfg, rng), 0.8);
  cfg.delta = -1;
  EXPECT_EQ(tree.simulate(0, cfg, rng), 0.0);
}

TEST(Simulate, TerminalOutsideTheGate) {
  const auto t = fixtures::toy_benchmark();
  SearchTree tree(t.f, t.actions, Instance{{3, 3, 3}}, t.counterfactual);
  MctsConfig cfg;
  cfg.delta = 1e-3;
  Rng rng(0);
  ASSERT_TRUE(tree.node(0).terminal);
  EXPECT_GT(tree.distance_to_counterfactual(tree.node(0).state), cfg.delta);
  EXPECT_EQ(tree.simulate(0, cfg, rng), 0.0);
}

TEST(Simulate, NoActionsGivesZero) {
  const auto t = fixtures::toy_benchmark();
  SearchTree tree(t.f, {}, t.x, t.counterfactual);
  Rng rng(0);
  EXPECT_EQ(tree.simulate(0, MctsConfig{}, rng), 0.0);
}

TEST(Simulate, RewardsAreZeroOrMaximal) {
  auto tree = toy_tree();
  MctsConfig cfg;
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const double r = tree.simulate(0, cfg, rng);
    EXPECT_TRUE(r == 0.0 || r == cfg.max_reward());
  }
}

TEST(Backpropagate, UpdatesThePathToTheRoot) {
  auto tree = toy_tree();
  tree.expand(0);
  const auto child = tree.node(0).children[0];
  tree.expand(child);
  const auto grandchild = tree.node(child).children[1];
  tree.backpropagate(grandchild, 0.8);
  for (auto i : {std::size_t{0}, child, grandchild}) {
    EXPECT_EQ(tree.node(i).n, 1u);
    EXPECT_DOUBLE_EQ(tree.node(i).q, 0.8);
  }
  tree.backpropagate(grandchild, 0.0);
  EXPECT_EQ(tree.node(grandchild).n, 2u);
  EXPECT_DOUBLE_EQ(tree.node(grandchild).q, 0.8);
  tree.backpropagate(tree.node(0).children[1], 0.0);
  EXPECT_EQ(tree.node(0).n, 3u);
}

TEST(Search, BookkeepingInvariants) {
  const auto t = fixtures::toy_benchmark();
  MctsConfig cfg;
  cfg.num_rollouts = 500;
  cfg.seed = 4;
  const auto run = run_directive_search(t.x, t.f, t.actions, t.counterfactual, cfg);
  const auto& tree = run.tree;
  EXPECT_EQ(tree.node(0).n, run.rollouts);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& node = tree.node(i);
    EXPECT_GE(node.q, 0.0);
    EXPECT_LE(node.q, node.n * cfg.max_reward() + 1e-9);
    EXPECT_EQ(node.terminal, t.f.label(node.state) == t.f.label(t.counterfactual));
    EXPECT_EQ(replay(t.f.schema(), t.x, [&] {
                std::vector<Action> a;
                for (auto k : tree.action_path(i)) a.push_back(t.actions[k]);
                return a;
              }()),
              node.state);
    if (!node.children.empty()) {
      std::uint64_t through = node.simulations;
      for (auto c : node.children) through += tree.node(c).n;
      EXPECT_EQ(node.n, through) << "node " << i;
    }
  }
}

TEST(Search, PlansReplayAndAreSorted) {
  const auto t = fixtures::toy_benchmark();
  MctsConfig cfg;
  cfg.num_rollouts = 2000;
  cfg.seed = 9;
  const auto plans = generate_directives(t.x, t.f, t.actions, t.counterfactual, cfg);
  ASSERT_FALSE(plans.empty());
  EXPECT_LE(plans.size(), static_cast<std::size_t>(cfg.horizon));
  for (std::size_t i = 0; i < plans.size(); ++i) {
    EXPECT_EQ(replay(t.f.schema(), t.x, plans[i].actions), plans[i].final_state);
    EXPECT_TRUE(plans[i].flipped);
    if (i > 0) {
      EXPECT_LE(plans[i - 1].total_cost, plans[i].total_cost);
    }
  }
}

TEST(Search, SameSeedSamePlans) {
  const auto t = fixtures::toy_benchmark();
  MctsConfig cfg;
  cfg.num_rollouts = 1000;
  cfg.seed = 42;
  const auto a = generate_directives(t.x, t.f, t.actions, t.counterfactual, cfg);
  const auto b = generate_directives(t.x, t.f, t.actions, t.counterfactual, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].actions, b[i].actions);
    EXPECT_EQ(a[i].final_state, b[i].final_state);
  }
}

TEST(Search, ToyCheapestPlanMatchesEnumeration) {
  const auto t = fixtures::toy_benchmark();
  const auto best = oracle::cheapest_plans(t.f, t.actions, t.x, 4);
  ASSERT_EQ(best.cost, 2.0);
  ASSERT_EQ(best.multisets, std::vector<std::vector<std::size_t>>{t.cheapest});
  MctsConfig cfg;
  cfg.num_rollouts = 2000;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const auto plans = generate_directives(t.x, t.f, t.actions, t.counterfactual, cfg);
    EXPECT_EQ(plans.front().total_cost, 2.0) << "seed " << seed;
  }
}

TEST(Search, TanyaNeedsAllThreeChanges) {
  const auto& sc = tanya();
  const auto f = three_change_model();
  ASSERT_EQ(f.label(sc.profile), 1);
  const auto c = replay(employee_schema(), sc.profile,
                        {action(sc, "hire-casual-staff"), action(sc, "retreat-coworkers"),
                         action(sc, "retreat-involvement")});
  ASSERT_EQ(f.label(c), 0);
  MctsConfig cfg;
  cfg.num_rollouts = 2000;
  cfg.seed = 5;
  const auto plans = generate_directives(sc.profile, f, sc.actions, c, cfg);
  std::multiset<std::string> ids;
  for (const auto& a : plans.front().actions) ids.insert(a.id);
  EXPECT_TRUE(plans.front().flipped);
  EXPECT_EQ(ids, (std::multiset<std::string>{"hire-casual-staff", "retreat-coworkers", "retreat-involvement"}));
}

TEST(Search, EmptyActionSet) {
  const auto t = fixtures::toy_benchmark();
  EXPECT_EQ(code_of([&] { generate_directives(t.x, t.f, {}, t.counterfactual, MctsConfig{}); }),
            ErrorCode::NoDirectiveFound);
}
