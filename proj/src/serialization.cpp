#include "recourse/serialization.hpp"

#include <cmath>
#include <set>

#include "recourse/error.hpp"

namespace recourse {

namespace {

[[noreturn]] void malformed(const std::string& what, const std::string& detail = {}) {
  throw Error(ErrorCode::ParseError, what, detail);
}

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object()) malformed("expected a JSON object", key);
  auto it = doc.find(key);
  if (it == doc.end()) malformed(std::string("missing field \"") + key + "\"", key);
  return *it;
}

double number(const Json& v, const std::string& what) {
  if (!v.is_number()) malformed("expected a number", what);
  return v.get<double>();
}

std::vector<double> numbers(const Json& v, const std::string& what) {
  if (!v.is_array()) malformed("expected an array of numbers", what);
  std::vector<double> out;
  for (const auto& item : v) out.push_back(number(item, what));
  return out;
}

void reject_unknown(const Json& doc, const std::set<std::string>& known, const char* what) {
  if (!doc.is_object()) malformed(std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : doc.items())
    if (!known.count(key)) throw Error(ErrorCode::InvalidArgument, std::string("unknown ") + what + " key", key);
}

double level_or_value(const FeatureSpec& spec, const Json& v) {
  if (spec.is_discrete() && v.is_string()) {
    const auto idx = spec.level_index(v.get<std::string>());
    if (!idx) throw Error(ErrorCode::BadLevel, "unknown level", spec.name + "=" + v.get<std::string>());
    return static_cast<double>(*idx);
  }
  return number(v, spec.name);
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "malformed JSON", "byte " + std::to_string(e.byte));
  }
}

Json load_json(const std::filesystem::path& path) { return parse_json(read_text_file(path)); }

FeatureSchema schema_from_json(const Json& doc) { return parse_schema(doc.dump()); }

Json schema_to_json_value(const FeatureSchema& schema) { return Json::parse(schema_to_json(schema)); }

Instance instance_from_json(const FeatureSchema& schema, const Json& doc) {
  if (!doc.is_object()) malformed("an instance is an object keyed by feature name");
  for (const auto& [key, _] : doc.items())
    if (!schema.find(key)) throw Error(ErrorCode::SchemaMismatch, "unknown feature", key);
  Instance x{std::vector<double>(schema.size())};
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& spec = schema[j];
    auto it = doc.find(spec.name);
    if (it == doc.end()) throw Error(ErrorCode::MissingColumn, "instance lacks a feature", spec.name);
    x[j] = level_or_value(spec, *it);
  }
  schema.validate(x);
  return x;
}

Json instance_to_json(const FeatureSchema& schema, const Instance& x) {
  schema.validate(x);
  Json out = Json::object();
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& spec = schema[j];
    if (spec.is_discrete())
      out[spec.name] = spec.levels[static_cast<std::size_t>(x[j])];
    else
      out[spec.name] = x[j];
  }
  return out;
}

Action action_from_json(const FeatureSchema& schema, const Json& doc) {
  reject_unknown(doc, {"id", "feature", "set_level", "delta", "cost", "description"}, "action");
  Action a;
  a.id = field(doc, "id").get<std::string>();
  a.feature = field(doc, "feature").get<std::string>();
  const auto& spec = schema[schema.index_of(a.feature)];
  const bool has_set = doc.contains("set_level"), has_delta = doc.contains("delta");
  if (has_set == has_delta)
    throw Error(ErrorCode::InvalidAction, "an action needs exactly one of set_level and delta", a.id);
  if (has_set) {
    a.effect = ActionEffect::SetLevel;
    a.amount = level_or_value(spec, doc["set_level"]);
  } else {
    a.effect = ActionEffect::Delta;
    a.amount = number(doc["delta"], a.id);
  }
  if (doc.contains("cost")) a.cost = number(doc["cost"], a.id);
  a.description = doc.value("description", std::string{});
  validate_action(schema, a);
  return a;
}

Json action_to_json(const FeatureSchema& schema, const Action& a) {
  const auto& spec = schema[schema.index_of(a.feature)];
  Json out = {{"id", a.id}, {"feature", a.feature}};
  if (a.effect == ActionEffect::SetLevel) {
    if (spec.is_discrete())
      out["set_level"] = spec.levels.at(static_cast<std::size_t>(a.amount));
    else
      out["set_level"] = a.amount;
  } else {
    out["delta"] = a.amount;
  }
  out["cost"] = a.cost;
  out["description"] = a.description;
  return out;
}

std::vector<Action> action_catalog_from_json(const FeatureSchema& schema, const Json& doc) {
  const auto& list = field(doc, "actions");
  if (!list.is_array()) malformed("\"actions\" must be an array");
  std::vector<Action> out;
  std::set<std::string> ids;
  for (const auto& item : list) {
    out.push_back(action_from_json(schema, item));
    if (!ids.insert(out.back().id).second)
      throw Error(ErrorCode::InvalidAction, "duplicate action id", out.back().id);
  }
  return out;
}

Json model_to_json(const ModelBundle& bundle) {
  const auto& f = bundle.model;
  const auto& enc = f.encoder;
  Json out;
  out["schema"] = schema_to_json_value(f.schema());
  out["scaler"] = {{"min", enc.numeric_min()}, {"max", enc.numeric_max()}};
  out["weights"] = std::vector<double>(f.weights.data(), f.weights.data() + f.weights.size());
  out["bias"] = f.bias;
  out["threshold"] = f.threshold;
  if (bundle.mad)
    out["mad_weights"] = std::vector<double>(bundle.mad->values.data(),
                                             bundle.mad->values.data() + bundle.mad->values.size());
  if (bundle.training) {
    const auto& t = *bundle.training;
    out["training"] = {{"learning_rate", t.learning_rate}, {"epochs", t.epochs}, {"l2", t.l2}, {"seed", t.seed},
                       {"threshold", t.threshold}};
  }
  return out;
}

ModelBundle model_from_json(const Json& doc) {
  ModelBundle bundle;
  auto schema = schema_from_json(field(doc, "schema"));
  const auto& scaler = field(doc, "scaler");
  auto lo = numbers(field(scaler, "min"), "scaler.min");
  auto hi = numbers(field(scaler, "max"), "scaler.max");
  if (lo.size() != schema.size() || hi.size() != schema.size())
    throw Error(ErrorCode::SchemaMismatch, "scaler arity differs from the schema");
  auto& f = bundle.model;
  f.encoder = Encoder(schema, std::move(lo), std::move(hi));
  const auto w = numbers(field(doc, "weights"), "weights");
  f.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  f.bias = number(field(doc, "bias"), "bias");
  f.threshold = doc.contains("threshold") ? number(doc["threshold"], "threshold") : 0.5;
  f.validate();
  if (doc.contains("mad_weights")) {
    const auto m = numbers(doc["mad_weights"], "mad_weights");
    MadWeights mad{Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size()))};
    mad.validate();
    if (mad.size() != schema.size()) throw Error(ErrorCode::SchemaMismatch, "mad_weights arity differs from the schema");
    bundle.mad = std::move(mad);
  }
  if (doc.contains("training")) {
    const auto& t = doc["training"];
    TrainConfig cfg;
    cfg.learning_rate = t.value("learning_rate", cfg.learning_rate);
    cfg.epochs = t.value("epochs", cfg.epochs);
    cfg.l2 = t.value("l2", cfg.l2);
    cfg.seed = t.value("seed", cfg.seed);
    cfg.threshold = t.value("threshold", cfg.threshold);
    bundle.training = cfg;
  }
  return bundle;
}

ModelBundle load_model(const std::filesystem::path& path) { return model_from_json(load_json(path)); }

Json to_json(const FeatureSchema& schema, const CounterfactualResult& r) {
  return {{"counterfactual", instance_to_json(schema, r.c)},
          {"distance", r.distance},
          {"target_label", r.target_label},
          {"changed_features", r.changed_features},
          {"tau", r.tau},
          {"tau_sufficient", r.tau_sufficient},
          {"candidates_evaluated", r.candidates_evaluated}};
}

CounterfactualResult counterfactual_from_json(const FeatureSchema& schema, const Json& doc) {
  CounterfactualResult r;
  r.c = instance_from_json(schema, field(doc, "counterfactual"));
  r.distance = doc.value("distance", 0.0);
  r.target_label = doc.value("target_label", 0);
  r.changed_features = doc.value("changed_features", std::vector<std::string>{});
  r.tau = doc.value("tau", 0.0);
  r.tau_sufficient = doc.value("tau_sufficient", false);
  r.candidates_evaluated = doc.value("candidates_evaluated", std::size_t{0});
  return r;
}

Json to_json(const FeatureSchema& schema, const DirectivePlan& plan) {
  Json actions = Json::array();
  for (const auto& a : plan.actions) actions.push_back(action_to_json(schema, a));
  return {{"actions", actions},
          {"final_state", instance_to_json(schema, plan.final_state)},
          {"total_cost", plan.total_cost},
          {"cf_distance", plan.cf_distance},
          {"flipped", plan.flipped}};
}

DirectivePlan directive_plan_from_json(const FeatureSchema& schema, const Json& doc) {
  DirectivePlan plan;
  const auto& actions = field(doc, "actions");
  if (!actions.is_array()) malformed("\"actions\" must be an array");
  for (const auto& a : actions) plan.actions.push_back(action_from_json(schema, a));
  plan.final_state = instance_from_json(schema, field(doc, "final_state"));
  plan.total_cost = doc.value("total_cost", 0.0);
  plan.cf_distance = doc.value("cf_distance", 0.0);
  plan.flipped = doc.value("flipped", false);
  return plan;
}

Json to_json(const PrototypeSet& p) {
  return {{"indices", p.indices},
          {"weights", p.weights},
          {"class_label", p.class_label},
          {"objective_trace", p.objective_trace},
          {"bandwidth", p.bandwidth}};
}

PrototypeSet prototype_set_from_json(const Json& doc) {
  PrototypeSet p;
  p.indices = field(doc, "indices").get<std::vector<std::size_t>>();
  p.weights = numbers(field(doc, "weights"), "weights");
  if (p.indices.size() != p.weights.size())
    throw Error(ErrorCode::InvalidArgument, "indices and weights differ in length");
  p.class_label = doc.value("class_label", 0);
  if (doc.contains("objective_trace")) p.objective_trace = numbers(doc["objective_trace"], "objective_trace");
  p.bandwidth = doc.value("bandwidth", 1.0);
  return p;
}

CounterfactualConfig counterfactual_config_from_json(const Json& doc) {
  CounterfactualConfig cfg;
  if (doc.is_null()) return cfg;
  reject_unknown(doc, {"grid_steps", "steps", "numeric_grid", "tau_schedule", "max_candidates", "frozen_features"},
                 "counterfactual config");
  cfg.grid_steps = doc.value("grid_steps", cfg.grid_steps);
  if (doc.contains("steps")) cfg.steps = doc["steps"].get<std::map<std::string, int>>();
  if (doc.contains("numeric_grid"))
    for (const auto& [name, values] : doc["numeric_grid"].items()) cfg.numeric_grid[name] = numbers(values, name);
  if (doc.contains("tau_schedule")) cfg.tau_schedule = numbers(doc["tau_schedule"], "tau_schedule");
  cfg.max_candidates = doc.value("max_candidates", cfg.max_candidates);
  if (doc.contains("frozen_features")) cfg.frozen_features = doc["frozen_features"].get<std::set<std::string>>();
  return cfg;
}

MctsConfig mcts_config_from_json(const Json& doc) {
  MctsConfig cfg;
  if (doc.is_null()) return cfg;
  reject_unknown(doc,
                 {"alpha", "beta", "delta", "gamma", "horizon", "num_rollouts", "uct_c", "max_depth", "seed",
                  "discount_per_step", "prune_noop_children"},
                 "search config");
  cfg.alpha = doc.value("alpha", cfg.alpha);
  cfg.beta = doc.value("beta", cfg.beta);
  cfg.delta = doc.value("delta", cfg.delta);
  cfg.gamma = doc.value("gamma", cfg.gamma);
  cfg.horizon = doc.value("horizon", cfg.horizon);
  cfg.num_rollouts = doc.value("num_rollouts", cfg.num_rollouts);
  cfg.uct_c = doc.value("uct_c", cfg.uct_c);
  cfg.max_depth = doc.value("max_depth", cfg.max_depth);
  cfg.seed = doc.value("seed", cfg.seed);
  cfg.discount_per_step = doc.value("discount_per_step", cfg.discount_per_step);
  cfg.prune_noop_children = doc.value("prune_noop_children", cfg.prune_noop_children);
  cfg.validate();
  return cfg;
}

}  // namespace recourse
