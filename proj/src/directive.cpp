#include "recourse/directive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "recourse/error.hpp"

namespace recourse {

void validate_action(const FeatureSchema& schema, const Action& a) {
  const auto& spec = schema[schema.index_of(a.feature)];
  if (!spec.actionable) throw Error(ErrorCode::NotActionableFeature, "feature is not actionable", a.feature);
  if (!(a.cost > 0) || !std::isfinite(a.cost))
    throw Error(ErrorCode::InvalidAction, "action cost must be positive and finite", a.id);
  if (!std::isfinite(a.amount)) throw Error(ErrorCode::InvalidAction, "non-finite action amount", a.id);
  if (!spec.is_discrete()) return;
  if (a.amount != std::floor(a.amount))
    throw Error(ErrorCode::InvalidAction, "discrete features move by whole levels", a.id);
  if (a.effect == ActionEffect::SetLevel && (a.amount < 0 || a.amount >= static_cast<double>(spec.levels.size())))
    throw Error(ErrorCode::InvalidAction, "level outside the feature's range", a.id);
  if (a.effect == ActionEffect::Delta && a.amount == 0)
    throw Error(ErrorCode::InvalidAction, "zero delta", a.id);
}

Instance apply_action(const FeatureSchema& schema, const Instance& x, const Action& a) {
  validate_action(schema, a);
  schema.validate(x);
  const std::size_t j = schema.index_of(a.feature);
  const auto& spec = schema[j];
  Instance out = x;
  if (a.effect == ActionEffect::SetLevel) {
    out[j] = a.amount;
  } else if (spec.is_discrete()) {
    const double top = static_cast<double>(spec.levels.size() - 1);
    out[j] = std::clamp(x[j] + a.amount, 0.0, top);
  } else {
    out[j] = x[j] + a.amount;
  }
  return out;
}

Instance replay(const FeatureSchema& schema, const Instance& x, const std::vector<Action>& actions) {
  Instance s = x;
  for (const auto& a : actions) s = apply_action(schema, s, a);
  return s;
}

void MctsConfig::validate() const {
  auto bad = [](const char* what) { throw Error(ErrorCode::InvalidArgument, what); };
  if (!(alpha >= 0) || !(beta >= 0) || !std::isfinite(alpha + beta)) bad("alpha and beta must be non-negative");
  if (!(gamma > 0) || !(gamma <= 1)) bad("gamma must lie in (0, 1]");
  if (!(delta >= 0)) bad("delta must be non-negative");
  if (horizon < 1) bad("horizon must be at least 1");
  if (num_rollouts < 1) bad("num_rollouts must be at least 1");
  if (!(uct_c >= 0) || !std::isfinite(uct_c)) bad("uct_c must be non-negative");
  if (max_depth < 1) bad("max_depth must be at least 1");
}

SearchTree::SearchTree(const LinearClassifier& f, std::vector<Action> actions, Instance factual,
                       Instance counterfactual)
    : f_(&f), actions_(std::move(actions)), counterfactual_(std::move(counterfactual)) {
  f.validate();
  const auto& schema = f.schema();
  schema.validate(factual);
  schema.validate(counterfactual_);
  for (const auto& a : actions_) validate_action(schema, a);
  counterfactual_encoded_ = f.encoder.encode(counterfactual_);
  target_label_ = f.label(counterfactual_);

  SearchNode root;
  root.state = std::move(factual);
  root.terminal = is_terminal(root.state);
  nodes_.push_back(std::move(root));
}

bool SearchTree::is_terminal(const Instance& state) const { return f_->label(state) == target_label_; }

double SearchTree::distance_to_counterfactual(const Instance& state) const {
  return euclidean_distance(f_->encoder.encode(state), counterfactual_encoded_);
}

std::size_t SearchTree::uct_select(std::size_t from, double c, Rng& rng) const {
  if (node(from).children.empty()) throw Error(ErrorCode::NoChildren, "node has no children", std::to_string(from));
  std::size_t current = from;
  std::vector<std::size_t> unvisited;
  while (!nodes_[current].children.empty()) {
    const auto& parent = nodes_[current];
    unvisited.clear();
    for (std::size_t ch : parent.children)
      if (nodes_[ch].n == 0) unvisited.push_back(ch);
    if (!unvisited.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, unvisited.size() - 1);
      return unvisited[pick(rng)];
    }
    const double log_n = std::log(static_cast<double>(parent.n));
    std::size_t best = parent.children.front();
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t ch : parent.children) {
      const auto& child = nodes_[ch];
      const double nc = static_cast<double>(child.n);
      const double value = child.q / nc + c * std::sqrt(log_n / nc);
      if (value > best_value) {
        best_value = value;
        best = ch;
      }
    }
    current = best;
  }
  return current;
}

void SearchTree::expand(std::size_t index, bool prune_noop) {
  if (node(index).terminal) throw Error(ErrorCode::TerminalNode, "terminal nodes are not expanded", std::to_string(index));
  if (nodes_[index].expanded) throw Error(ErrorCode::AlreadyExpanded, "node already expanded", std::to_string(index));
  nodes_[index].expanded = true;
  const auto& schema = f_->schema();
  for (std::size_t a = 0; a < actions_.size(); ++a) {
    Instance next = apply_action(schema, nodes_[index].state, actions_[a]);
    if (prune_noop && next == nodes_[index].state) continue;
    SearchNode child;
    child.action = a;
    child.terminal = is_terminal(next);
    child.state = std::move(next);
    child.parent = index;
    child.depth = nodes_[index].depth + 1;
    child.path_cost = nodes_[index].path_cost + actions_[a].cost;
    nodes_.push_back(std::move(child));  // may reallocate; index-based access only below
    nodes_[index].children.push_back(nodes_.size() - 1);
  }
}

double SearchTree::simulate(std::size_t leaf, const MctsConfig& config, Rng& rng) const {
  Instance state = node(leaf).state;
  std::size_t depth = nodes_[leaf].depth;
  const auto cap = static_cast<std::size_t>(config.max_depth);
  const auto& schema = f_->schema();
  while (true) {
    if (is_terminal(state)) {
      if (distance_to_counterfactual(state) > config.delta) return 0.0;
      const double discount =
          config.discount_per_step ? std::pow(config.gamma, static_cast<double>(depth)) : config.gamma;
      return (config.alpha + config.beta) * discount;
    }
    if (actions_.empty() || depth >= cap) return 0.0;
    std::uniform_int_distribution<std::size_t> pick(0, actions_.size() - 1);
    state = apply_action(schema, state, actions_[pick(rng)]);
    ++depth;
  }
}

void SearchTree::backpropagate(std::size_t index, double reward) {
  std::optional<std::size_t> current = index;
  while (current) {
    auto& n = node(*current);
    n.n += 1;
    n.q += reward;
    current = n.parent;
  }
}

void SearchTree::do_rollout(std::size_t from, const MctsConfig& config, Rng& rng) {
  const std::size_t leaf = nodes_[from].children.empty() ? from : uct_select(from, config.uct_c, rng);
  if (!nodes_[leaf].terminal && !nodes_[leaf].expanded) expand(leaf, config.prune_noop_children);
  const double reward = simulate(leaf, config, rng);
  nodes_[leaf].simulations += 1;
  backpropagate(leaf, reward);
}

std::size_t SearchTree::choose(std::size_t index) const {
  std::size_t best = index;
  double best_mean = -std::numeric_limits<double>::infinity();
  for (std::size_t ch : node(index).children) {
    const auto& child = nodes_[ch];
    if (child.n == 0) continue;
    const double mean = child.q / static_cast<double>(child.n);
    if (mean > best_mean) {
      best_mean = mean;
      best = ch;
    }
  }
  return best;
}

std::vector<std::size_t> SearchTree::action_path(std::size_t index) const {
  std::vector<std::size_t> path;
  for (std::optional<std::size_t> cur = index; cur && node(*cur).action; cur = nodes_[*cur].parent)
    path.push_back(*nodes_[*cur].action);
  std::reverse(path.begin(), path.end());
  return path;
}

DirectiveSearch run_directive_search(const Instance& x, const LinearClassifier& f, std::vector<Action> actions,
                                     const Instance& counterfactual, const MctsConfig& config) {
  config.validate();
  DirectiveSearch out{SearchTree(f, std::move(actions), x, counterfactual), {}, 0};
  auto& tree = out.tree;
  Rng rng(config.seed);

  std::size_t search = SearchTree::root();
  for (int step = 0; step < config.horizon; ++step) {
    if (tree.node(search).terminal) break;
    for (int r = 0; r < config.num_rollouts; ++r) {
      tree.do_rollout(search, config, rng);
      ++out.rollouts;
    }
    const std::size_t next = tree.choose(search);
    if (next == search) break;
    search = next;
  }

  struct Found {
    std::vector<std::size_t> path;
    double cost;
    std::size_t node;
  };
  std::vector<Found> found;
  for (std::size_t i = 1; i < tree.size(); ++i) {
    const auto& nd = tree.node(i);
    if (!nd.terminal || tree.distance_to_counterfactual(nd.state) > config.delta) continue;
    found.push_back({tree.action_path(i), nd.path_cost, i});
  }
  std::shuffle(found.begin(), found.end(), rng);
  std::stable_sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.cost < b.cost; });

  std::vector<std::vector<std::size_t>> seen;
  for (const auto& fd : found) {
    if (out.plans.size() >= static_cast<std::size_t>(config.horizon)) break;
    auto key = fd.path;
    std::sort(key.begin(), key.end());
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
    seen.push_back(std::move(key));

    const auto& nd = tree.node(fd.node);
    DirectivePlan plan;
    for (std::size_t a : fd.path) plan.actions.push_back(tree.actions()[a]);
    plan.final_state = nd.state;
    plan.total_cost = fd.cost;
    plan.cf_distance = tree.distance_to_counterfactual(nd.state);
    plan.flipped = true;
    out.plans.push_back(std::move(plan));
  }
  return out;
}

std::vector<DirectivePlan> generate_directives(const Instance& x, const LinearClassifier& f,
                                               const std::vector<Action>& actions, const Instance& counterfactual,
                                               const MctsConfig& config) {
  if (actions.empty()) throw Error(ErrorCode::NoDirectiveFound, "no actions available");
  auto search = run_directive_search(x, f, actions, counterfactual, config);
  if (search.plans.empty())
    throw Error(ErrorCode::NoDirectiveFound, "no action sequence reaches the counterfactual label",
                std::to_string(search.rollouts) + " rollouts");
  return std::move(search.plans);
}

std::vector<DirectivePlan> generate_directives(const Instance& x, const LinearClassifier& f,
                                               const std::vector<Action>& actions, const MadWeights& weights,
                                               const CounterfactualConfig& cf_config, const MctsConfig& config) {
  const auto cf = find_counterfactual(f, x, weights, cf_config);
  return generate_directives(x, f, actions, cf.c, config);
}

}  // namespace recourse
