#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "recourse/counterfactual.hpp"
#include "recourse/logistic.hpp"
#include "recourse/schema.hpp"

namespace recourse {

using Rng = std::mt19937_64;

enum class ActionEffect { SetLevel, Delta };

/// A concrete step a person can take. It changes exactly one actionable
/// feature: `SetLevel` assigns `amount` (a level index for discrete features,
/// a value for numeric ones), `Delta` adds `amount`, clamped to the level
/// range for discrete features.
struct Action {
  std::string id;
  std::string feature;
  ActionEffect effect = ActionEffect::SetLevel;
  double amount = 0.0;
  double cost = 1.0;
  std::string description;

  bool operator==(const Action&) const = default;
};

/// Throws NotActionableFeature, SchemaMismatch (unknown feature) or
/// InvalidAction (level outside the range, fractional delta, cost <= 0).
void validate_action(const FeatureSchema& schema, const Action& a);

Instance apply_action(const FeatureSchema& schema, const Instance& x, const Action& a);

struct MctsConfig {
  double alpha = 0.5;
  double beta = 0.5;
  double delta = 5.0;   // max Euclidean distance (encoded space) to the counterfactual
  double gamma = 0.8;
  int horizon = 3;      // number of directives; also the number of commit steps
  int num_rollouts = 10'000;
  double uct_c = 1.4142135623730951;
  int max_depth = 10;   // depth cap for simulations, counted from the root
  std::uint64_t seed = 0;
  /// Discount by gamma^depth of the reached state instead of a single gamma.
  bool discount_per_step = false;
  /// Skip children whose action leaves the state unchanged.
  bool prune_noop_children = false;

  void validate() const;
  /// Largest reward simulate() can return: (alpha + beta) * gamma.
  double max_reward() const { return (alpha + beta) * gamma; }
};

struct SearchNode {
  std::optional<std::size_t> action;  // index into SearchTree::actions(); none for the root
  Instance state;
  double q = 0.0;
  std::uint64_t n = 0;
  std::uint64_t simulations = 0;  // rollouts that started at this node
  std::vector<std::size_t> children;
  std::optional<std::size_t> parent;
  std::size_t depth = 0;
  double path_cost = 0.0;
  bool terminal = false;
  bool expanded = false;
};

/// Search tree over action sequences starting at the factual state. Nodes live
/// in an arena and refer to each other by index; node 0 is the action-less
/// root. A node is terminal iff its state has the counterfactual's label.
class SearchTree {
 public:
  SearchTree(const LinearClassifier& f, std::vector<Action> actions, Instance factual, Instance counterfactual);

  static constexpr std::size_t root() noexcept { return 0; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const SearchNode& node(std::size_t i) const { return nodes_.at(i); }
  SearchNode& node(std::size_t i) { return nodes_.at(i); }

  const LinearClassifier& classifier() const noexcept { return *f_; }
  const std::vector<Action>& actions() const noexcept { return actions_; }
  const Instance& factual() const noexcept { return nodes_.front().state; }
  const Instance& counterfactual() const noexcept { return counterfactual_; }
  int target_label() const noexcept { return target_label_; }
  bool is_terminal(const Instance& state) const;
  double distance_to_counterfactual(const Instance& state) const;

  /// Descends from `from` choosing the child maximizing Q/N + c sqrt(ln N_parent / N_child);
  /// unvisited children come first (uniformly at random among them). Returns
  /// the leaf reached. Throws NoChildren if `from` has no children.
  std::size_t uct_select(std::size_t from, double c, Rng& rng) const;

  /// One child per action. Throws TerminalNode or AlreadyExpanded.
  void expand(std::size_t node, bool prune_noop = false);

  /// Random rollout from `leaf` until a terminal state, a state with no
  /// applicable action, or the depth cap. Pure: the tree is not modified.
  double simulate(std::size_t leaf, const MctsConfig& config, Rng& rng) const;

  /// N += 1 and Q += reward for `node` and each ancestor.
  void backpropagate(std::size_t node, double reward);

  /// Select, expand, simulate and backpropagate once below `from`.
  void do_rollout(std::size_t from, const MctsConfig& config, Rng& rng);

  /// Visited child of `node` with the best mean reward Q/N (first on ties);
  /// `node` itself when no child has been visited.
  std::size_t choose(std::size_t node) const;

  /// Action indices from the root to `node`.
  std::vector<std::size_t> action_path(std::size_t node) const;

 private:
  const LinearClassifier* f_;
  std::vector<Action> actions_;
  Instance counterfactual_;
  Eigen::VectorXd counterfactual_encoded_;
  int target_label_;
  std::vector<SearchNode> nodes_;
};

struct DirectivePlan {
  std::vector<Action> actions;
  Instance final_state;
  double total_cost = 0.0;
  double cf_distance = 0.0;  // Euclidean, encoded space
  bool flipped = false;
};

struct DirectiveSearch {
  SearchTree tree;
  std::vector<DirectivePlan> plans;
  std::size_t rollouts = 0;
};

/// Runs `horizon` rounds of `num_rollouts` rollouts, committing to the best
/// child after each round, then extracts every root-to-terminal path whose
/// final state lies within `delta` of the counterfactual. Plans with the same
/// multiset of actions are merged; the rest are sorted by total cost with ties
/// ordered by the seeded generator, and the first `horizon` are returned.
DirectiveSearch run_directive_search(const Instance& x, const LinearClassifier& f, std::vector<Action> actions,
                                     const Instance& counterfactual, const MctsConfig& config);

/// Throws NoDirectiveFound when the action set is empty or no plan was found.
std::vector<DirectivePlan> generate_directives(const Instance& x, const LinearClassifier& f,
                                               const std::vector<Action>& actions, const Instance& counterfactual,
                                               const MctsConfig& config);

/// Same, with the goal state taken from the counterfactual engine.
std::vector<DirectivePlan> generate_directives(const Instance& x, const LinearClassifier& f,
                                               const std::vector<Action>& actions, const MadWeights& weights,
                                               const CounterfactualConfig& cf_config, const MctsConfig& config);

/// Replays `plan.actions` from `x`.
Instance replay(const FeatureSchema& schema, const Instance& x, const std::vector<Action>& actions);

}  // namespace recourse
