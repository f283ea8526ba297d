#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "recourse/counterfactual.hpp"
#include "recourse/directive.hpp"
#include "recourse/logistic.hpp"
#include "recourse/mad.hpp"
#include "recourse/protodash.hpp"
#include "recourse/schema.hpp"

namespace recourse {

using Json = nlohmann::json;

/// Parses `text`; syntax errors become ParseError with the byte offset.
Json parse_json(std::string_view text);
Json load_json(const std::filesystem::path& path);

FeatureSchema schema_from_json(const Json& doc);
Json schema_to_json_value(const FeatureSchema& schema);

/// Instances travel as objects keyed by feature name. Numeric features take a
/// number, discrete ones a level name (a level index is also accepted).
Instance instance_from_json(const FeatureSchema& schema, const Json& doc);
Json instance_to_json(const FeatureSchema& schema, const Instance& x);

/// {"id", "feature", "set_level" | "delta", "cost", "description"}. For
/// discrete features `set_level` may name the level; for numeric features it
/// is the target value.
Action action_from_json(const FeatureSchema& schema, const Json& doc);
Json action_to_json(const FeatureSchema& schema, const Action& a);
/// {"actions": [...]}
std::vector<Action> action_catalog_from_json(const FeatureSchema& schema, const Json& doc);

/// A trained model with everything needed to reuse it: schema, scaler range,
/// weights, bias, threshold and (optionally) the MAD weights of its training
/// data.
struct ModelBundle {
  LinearClassifier model;
  std::optional<MadWeights> mad;
  std::optional<TrainConfig> training;
};

Json model_to_json(const ModelBundle& bundle);
ModelBundle model_from_json(const Json& doc);
ModelBundle load_model(const std::filesystem::path& path);

Json to_json(const FeatureSchema& schema, const CounterfactualResult& r);
Json to_json(const FeatureSchema& schema, const DirectivePlan& plan);
Json to_json(const PrototypeSet& p);
PrototypeSet prototype_set_from_json(const Json& doc);
CounterfactualResult counterfactual_from_json(const FeatureSchema& schema, const Json& doc);
DirectivePlan directive_plan_from_json(const FeatureSchema& schema, const Json& doc);

/// Overrides on top of the defaults; unknown keys are rejected.
CounterfactualConfig counterfactual_config_from_json(const Json& doc);
MctsConfig mcts_config_from_json(const Json& doc);

}  // namespace recourse
