#pragma once

// Shared fixtures for the unit tests and the acceptance binary.

#include <algorithm>
#include <array>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "recourse/assessment.hpp"
#include "recourse/counterfactual.hpp"
#include "recourse/directive.hpp"
#include "recourse/logistic.hpp"
#include "recourse/mad.hpp"
#include "recourse/scenarios.hpp"

namespace fixtures {

using namespace recourse;

inline FeatureSpec numeric(std::string name, bool actionable = false) {
  return {std::move(name), FeatureKind::Numeric, {}, "", actionable};
}

inline FeatureSpec ordinal(std::string name, std::size_t k, bool actionable = true) {
  FeatureSpec s{std::move(name), FeatureKind::Ordinal, {}, "", actionable};
  for (std::size_t i = 0; i < k; ++i) s.levels.push_back("L" + std::to_string(i));
  return s;
}

inline FeatureSpec categorical(std::string name, std::size_t k, bool actionable = true) {
  FeatureSpec s = ordinal(std::move(name), k, actionable);
  s.kind = FeatureKind::Categorical;
  return s;
}

// Three four-level ordinal features starting at (0, 0, 0). The label flips once
// the encoded coordinates sum above 1.2; the unique cheapest plan is
// {raise-a, set-b} at cost 2.
struct ToyBenchmark {
  LinearClassifier f;
  Instance x;
  std::vector<Action> actions;
  Instance counterfactual;
  std::vector<std::size_t> cheapest;  // sorted action indices
};

inline ToyBenchmark toy_benchmark() {
  FeatureSchema schema({ordinal("a", 4), ordinal("b", 4), ordinal("c", 4)});
  ToyBenchmark t;
  t.f.encoder = Encoder(schema);
  t.f.weights = Eigen::Vector3d(-3.0, -3.0, -3.0);
  t.f.bias = 3.6;
  t.x = Instance{{0, 0, 0}};
  t.actions = {
      {"raise-a", "a", ActionEffect::Delta, 1, 1.0, "raise a by one level"},
      {"set-b", "b", ActionEffect::SetLevel, 3, 1.0, "set b to its top level"},
      {"set-c", "c", ActionEffect::Delta, 3, 3.0, "raise c by three levels"},
      {"set-a", "a", ActionEffect::SetLevel, 3, 2.5, "set a to its top level"},
  };
  t.counterfactual = find_counterfactual(t.f, t.x, MadWeights::uniform(3)).c;
  t.cheapest = {0, 1};
  return t;
}

// A seeded model over 2 to 4 discrete features with 2 to 6 levels each,
// trained on 40 random rows, plus a factual instance that admits at least one
// counterfactual.
struct DeskModel {
  Dataset data;
  LinearClassifier f;
  MadWeights w;
  Instance x;
};

inline DeskModel desk_model(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  while (true) {
    std::vector<FeatureSpec> specs;
    const std::size_t n_features = uniform(2, 4);
    for (std::size_t j = 0; j < n_features; ++j) {
      const std::size_t k = uniform(2, 6);
      const std::string name = "f" + std::to_string(j);
      specs.push_back(uniform(0, 2) == 0 ? categorical(name, k) : ordinal(name, k));
    }
    FeatureSchema schema(specs);
    std::vector<double> coef(n_features);
    for (auto& c : coef) c = std::normal_distribution<double>(0.0, 2.0)(rng);
    Dataset data{schema, {}, {}};
    for (int r = 0; r < 40; ++r) {
      Instance x{std::vector<double>(n_features)};
      double s = std::normal_distribution<double>(0.0, 0.3)(rng);
      for (std::size_t j = 0; j < n_features; ++j) {
        const auto k = schema[j].levels.size();
        x[j] = static_cast<double>(uniform(0, k - 1));
        s += coef[j] * (x[j] / static_cast<double>(k - 1) - 0.5);
      }
      data.rows.push_back(x);
      data.labels.push_back(s > 0 ? 1 : 0);
    }
    if (!data.has_class(0) || !data.has_class(1)) continue;
    LinearClassifier f = train_logistic(data, {1.0, 300, 1e-3, seed, 0.5});
    const Instance x = data.rows[uniform(0, data.rows.size() - 1)];
    // at least one grid point with the other label
    bool flips = false;
    for (const auto& r : data.rows) flips = flips || f.label(r) != f.label(x);
    if (!flips) continue;
    return {data, f, mad_weights(data), x};
  }
}

// Actions that realise the transcribed directive of each bundled scenario.
inline const std::map<std::string, std::vector<std::string>>& golden_action_ids() {
  static const std::map<std::string, std::vector<std::string>> ids{
      {"employee-1", {"hire-casual-staff", "retreat-coworkers", "retreat-involvement"}},
      {"employee-2", {"business-class-travel"}},
      {"employee-3", {"in-person-meetings", "stop-career-meetings-env", "stop-career-meetings-involvement"}},
      {"employee-4", {"skip-meetings-overtime", "skip-meetings-coworkers", "skip-meetings-involvement"}},
      {"credit-1", {"automatic-deductions"}},
      {"credit-2", {"raise-income"}},
      {"credit-3", {"miss-payments"}},
      {"credit-4", {"keep-spending"}},
  };
  return ids;
}

inline DirectivePlan golden_plan(const ScenarioCorpus& corpus, const Scenario& sc) {
  const auto& schema = corpus.domain(sc.domain).schema;
  DirectivePlan plan;
  for (const auto& id : golden_action_ids().at(sc.id)) {
    auto it = std::find_if(sc.actions.begin(), sc.actions.end(), [&](const Action& a) { return a.id == id; });
    plan.actions.push_back(*it);
    plan.total_cost += it->cost;
  }
  plan.final_state = replay(schema, sc.profile, plan.actions);
  plan.flipped = true;
  return plan;
}

inline CounterfactualResult golden_counterfactual(const ScenarioCorpus& corpus, const Scenario& sc) {
  CounterfactualResult r;
  r.c = golden_plan(corpus, sc).final_state;
  r.target_label = sc.target_label();
  return r;
}

// The scenario's factual profile (its own decision) and the transcribed
// prototype (the opposite class).
inline Dataset golden_prototype_data(const ScenarioCorpus& corpus, const Scenario& sc) {
  return {corpus.domain(sc.domain).schema,
          {sc.profile, *sc.explanations.at(ExplanationKind::Prototypical).prototype_profile},
          {sc.decision, sc.target_label()}};
}

// Ratings of a participant who on average prefers directive over
// counterfactual over prototypical explanations.
inline std::array<int, kQuestionCount> simulated_ratings(std::mt19937_64& rng, ExplanationKind kind) {
  const double mean = kind == ExplanationKind::Directive ? 4.2 : kind == ExplanationKind::Counterfactual ? 3.3 : 2.4;
  std::normal_distribution<double> noise(0.0, 0.8);
  std::array<int, kQuestionCount> out{};
  for (auto& a : out) a = std::clamp(static_cast<int>(std::lround(mean + noise(rng))), 1, 5);
  return out;
}

}  // namespace fixtures
