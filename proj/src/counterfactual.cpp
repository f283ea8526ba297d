#include "recourse/counterfactual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "recourse/error.hpp"

namespace recourse {

void CounterfactualConfig::validate(const FeatureSchema& schema) const {
  if (grid_steps < 2) throw Error(ErrorCode::InvalidArgument, "grid_steps must be at least 2");
  for (const auto& [name, n] : steps) {
    schema.index_of(name);
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "step count must be at least 2", name);
  }
  for (const auto& [name, values] : numeric_grid) {
    if (schema[schema.index_of(name)].kind != FeatureKind::Numeric)
      throw Error(ErrorCode::InvalidArgument, "explicit grids apply to numeric features only", name);
    for (double v : values)
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite grid value", name);
  }
  for (const auto& name : frozen_features) schema.index_of(name);
  if (tau_schedule.empty()) throw Error(ErrorCode::InvalidArgument, "tau schedule must not be empty");
  for (std::size_t i = 0; i < tau_schedule.size(); ++i) {
    if (!(tau_schedule[i] > 0) || !std::isfinite(tau_schedule[i]))
      throw Error(ErrorCode::InvalidArgument, "tau values must be positive");
    if (i && !(tau_schedule[i] > tau_schedule[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "tau schedule must be strictly increasing");
  }
  if (max_candidates == 0) throw Error(ErrorCode::InvalidArgument, "max_candidates must be positive");
}

double distance_l1_mad(const Encoder& encoder, const Instance& x, const Instance& c, const MadWeights& w) {
  const auto& schema = encoder.schema();
  schema.validate(x);
  schema.validate(c);
  if (w.size() != schema.size())
    throw Error(ErrorCode::SchemaMismatch, "MAD weights do not match the schema");
  double total = 0.0;
  for (std::size_t j = 0; j < schema.size(); ++j) total += w[j] * encoder.feature_difference(j, x[j], c[j]);
  return total;
}

double flip_penalty(const LinearClassifier& f, const Instance& c, int target_label) {
  const auto p = f.predict(c);
  if (p.label == target_label) return 0.0;
  constexpr double kMinPenalty = 1e-12;
  const double gap = f.score(c) - f.score_threshold();
  return std::max(target_label == 1 ? -gap : gap, kMinPenalty);
}

std::vector<std::vector<double>> candidate_grid(const LinearClassifier& f, const Instance& x,
                                                const CounterfactualConfig& config) {
  const auto& schema = f.schema();
  const auto& enc = f.encoder;
  std::vector<std::vector<double>> grid(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& spec = schema[j];
    auto& values = grid[j];
    if (config.frozen_features.count(spec.name)) {
      values = {x[j]};
      continue;
    }
    if (spec.is_discrete()) {
      for (std::size_t l = 0; l < spec.levels.size(); ++l) values.push_back(static_cast<double>(l));
      continue;
    }
    if (auto it = config.numeric_grid.find(spec.name); it != config.numeric_grid.end()) {
      values = it->second;
    } else {
      auto st = config.steps.find(spec.name);
      const int n = st != config.steps.end() ? st->second : config.grid_steps;
      const double lo = enc.numeric_min()[j], hi = enc.numeric_max()[j];
      for (int i = 0; i < n; ++i) values.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
    }
    values.push_back(x[j]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
  }
  return grid;
}

namespace {

struct Candidate {
  std::vector<std::size_t> index;
  double distance = std::numeric_limits<double>::infinity();
};

// Strict "a before b" among equal-distance candidates.
bool tie_break_less(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b,
                    const std::vector<std::vector<double>>& grid, const std::vector<std::vector<double>>& diff,
                    const std::vector<std::size_t>& factual) {
  const std::size_t n = grid.size();
  for (std::size_t j = 0; j < n; ++j) {
    const bool ca = a[j] != factual[j], cb = b[j] != factual[j];
    if (ca != cb) return ca;
  }
  for (std::size_t j = 0; j < n; ++j)
    if (diff[j][a[j]] != diff[j][b[j]]) return diff[j][a[j]] < diff[j][b[j]];
  for (std::size_t j = 0; j < n; ++j)
    if (a[j] != b[j]) return grid[j][a[j]] < grid[j][b[j]];
  return false;
}

}  // namespace

CounterfactualResult find_counterfactual(const LinearClassifier& f, const Instance& x, const MadWeights& w,
                                         const CounterfactualConfig& config) {
  f.validate();
  const auto& schema = f.schema();
  schema.validate(x);
  w.validate();
  if (w.size() != schema.size())
    throw Error(ErrorCode::SchemaMismatch, "MAD weights do not match the schema");
  config.validate(schema);

  const auto grid = candidate_grid(f, x, config);
  const std::size_t n = schema.size();

  std::size_t total = 1;
  for (const auto& values : grid) {
    if (values.size() > config.max_candidates / total)
      throw Error(ErrorCode::CandidateBudgetExceeded, "candidate grid exceeds max_candidates",
                  std::to_string(config.max_candidates));
    total *= values.size();
  }

  // Position of the factual value in each list, and weighted per-value
  // distance terms.
  std::vector<std::size_t> factual(n);
  std::vector<std::vector<double>> diff(n), term(n);
  for (std::size_t j = 0; j < n; ++j) {
    factual[j] = static_cast<std::size_t>(std::find(grid[j].begin(), grid[j].end(), x[j]) - grid[j].begin());
    for (double v : grid[j]) {
      diff[j].push_back(f.encoder.feature_difference(j, x[j], v));
      term[j].push_back(w[j] * diff[j].back());
    }
  }

  const int target = 1 - f.label(x);
  const auto& taus = config.tau_schedule;
  std::vector<double> best_unflipped(taus.size(), std::numeric_limits<double>::infinity());

  Candidate best;
  bool found = false;
  std::vector<std::size_t> idx(n, 0);
  Instance c{std::vector<double>(n)};
  std::size_t evaluated = 0;
  for (std::size_t step = 0; step < total; ++step) {
    if (idx != factual) {
      double d = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        c[j] = grid[j][idx[j]];
        d += term[j][idx[j]];
      }
      ++evaluated;
      const double pen = flip_penalty(f, c, target);
      if (pen == 0.0) {
        if (!found || d < best.distance ||
            (d == best.distance && tie_break_less(idx, best.index, grid, diff, factual))) {
          best.index = idx;
          best.distance = d;
          found = true;
        }
      } else {
        for (std::size_t t = 0; t < taus.size(); ++t)
          best_unflipped[t] = std::min(best_unflipped[t], penalized_objective(d, pen, taus[t]));
      }
    }
    // odometer, last feature fastest
    for (std::size_t j = n; j-- > 0;) {
      if (++idx[j] < grid[j].size()) break;
      idx[j] = 0;
    }
  }

  if (!found)
    throw Error(ErrorCode::NoCounterfactualFound, "no candidate changes the predicted label",
                std::to_string(evaluated) + " candidates evaluated");

  CounterfactualResult result;
  result.c.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) result.c[j] = grid[j][best.index[j]];
  result.distance = distance_l1_mad(f.encoder, x, result.c, w);
  result.target_label = target;
  for (std::size_t j = 0; j < n; ++j)
    if (result.c[j] != x[j]) result.changed_features.push_back(schema[j].name);
  result.candidates_evaluated = evaluated;
  result.tau = taus.back();
  for (std::size_t t = 0; t < taus.size(); ++t) {
    if (penalized_objective(best.distance, 0.0, taus[t]) <= best_unflipped[t]) {
      result.tau = taus[t];
      result.tau_sufficient = true;
      break;
    }
  }
  return result;
}

}  // namespace recourse
