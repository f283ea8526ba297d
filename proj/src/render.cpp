#include <algorithm>
#include <cctype>

#include "recourse/error.hpp"
#include "recourse/scenarios.hpp"

namespace recourse {

namespace {

constexpr const char* kGenericCounterfactual = "To change the {decision_word} to {target}, you need to change {changes}.";
constexpr const char* kGenericDirective =
    "To change the {decision_word} to {target}, change {changes}. Suggested actions: {actions}.";
constexpr const char* kGenericPrototypical = "The following is an example with the outcome {target}:\n{table}";

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Level name or bare number, without the unit.
std::string plain_value(const FeatureSpec& spec, double v) {
  return spec.is_discrete() ? spec.levels.at(static_cast<std::size_t>(v)) : format_number(v);
}

std::string join_list(const std::vector<std::string>& items, const std::string& sep, const std::string& last) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += (i + 1 == items.size()) ? last : sep;
    out += items[i];
  }
  return out;
}

struct Slots {
  const DomainInfo* info = nullptr;
  const Scenario* scenario = nullptr;
  const Instance* state = nullptr;  // counterfactual or plan end state
  std::optional<std::string> actions;
  std::optional<std::string> table;
};

std::string changes_text(const Slots& s) {
  const auto& schema = s.info->schema;
  std::vector<std::string> parts;
  for (std::size_t j = 0; j < schema.size(); ++j)
    if ((*s.state)[j] != s.scenario->profile[j])
      parts.push_back(lowercase(schema[j].name) + " to '" + plain_value(schema[j], (*s.state)[j]) + "'");
  return join_list(parts, ", ", " and ");
}

std::string fill(const std::string& tpl, const Slots& s) {
  auto bad = [&](const std::string& what, const std::string& slot) -> std::string {
    throw Error(ErrorCode::CorpusInvalid, what, s.scenario->id + ": {" + slot + "}");
  };
  std::string out;
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    const auto open = tpl.find('{', pos);
    if (open == std::string::npos) {
      out.append(tpl, pos);
      break;
    }
    out.append(tpl, pos, open - pos);
    const auto close = tpl.find('}', open);
    if (close == std::string::npos) bad("unterminated template slot", tpl.substr(open));
    const std::string slot = tpl.substr(open + 1, close - open - 1);
    pos = close + 1;

    const auto colon = slot.find(':');
    const std::string name = slot.substr(0, colon);
    if (colon != std::string::npos) {
      if (!s.state) bad("template slot needs a state", slot);
      const std::string feature = slot.substr(colon + 1);
      const auto j = s.info->schema.find(feature);
      if (!j) bad("template names an unknown feature", slot);
      const std::string v = plain_value(s.info->schema[*j], (*s.state)[*j]);
      if (name == "value")
        out += v;
      else if (name == "lower")
        out += lowercase(v);
      else
        bad("unknown template slot", slot);
    } else if (name == "target") {
      out += s.info->outcomes[static_cast<std::size_t>(s.scenario->target_label())];
    } else if (name == "decision_word") {
      out += s.info->decision_word;
    } else if (name == "subject") {
      out += s.scenario->subject;
    } else if (name == "changes") {
      if (!s.state) bad("template slot needs a state", slot);
      out += changes_text(s);
    } else if (name == "actions") {
      if (!s.actions) bad("template slot only applies to directives", slot);
      out += *s.actions;
    } else if (name == "table") {
      if (!s.table) bad("template slot only applies to prototypes", slot);
      out += *s.table;
    } else {
      bad("unknown template slot", slot);
    }
  }
  return out;
}

// Every feature named by a {value:..} or {lower:..} slot differs from the profile.
bool names_only_changed(const std::string& tpl, const Slots& s) {
  for (auto open = tpl.find('{'); open != std::string::npos; open = tpl.find('{', open + 1)) {
    const auto close = tpl.find('}', open);
    const auto colon = tpl.find(':', open);
    if (close == std::string::npos || colon == std::string::npos || colon > close) continue;
    const auto j = s.info->schema.find(tpl.substr(colon + 1, close - colon - 1));
    if (j && (*s.state)[*j] == s.scenario->profile[*j]) return false;
  }
  return true;
}

// The scenario's own sentence, unless it would state a value the artifact
// leaves untouched; then the generic one.
const std::string& template_for(const Scenario& scenario, ExplanationKind kind, const std::string& fallback,
                                const Slots& s) {
  auto it = scenario.templates.find(kind);
  if (it == scenario.templates.end()) return fallback;
  return !s.state || names_only_changed(it->second, s) ? it->second : fallback;
}

void require_fits(const FeatureSchema& schema, const Instance& x, const char* what) {
  try {
    schema.validate(x);
  } catch (const Error& e) {
    throw Error(ErrorCode::ArtifactSchemaMismatch, std::string(what) + " does not fit the scenario schema",
                e.detail());
  }
}

}  // namespace

std::string render_profile_table(const DomainInfo& info, const std::string& header, const Instance& x, int label) {
  info.schema.validate(x);
  std::string out = header + "\nFeature | Value\n";
  for (std::size_t j = 0; j < info.schema.size(); ++j)
    out += info.schema[j].name + " | " + format_value(info.schema[j], x[j]) + "\n";
  out += info.decision_line + " " + info.outcomes.at(static_cast<std::size_t>(label));
  return out;
}

ExplanationText render_explanation(const ScenarioCorpus& corpus, const Scenario& scenario,
                                   const CounterfactualResult& artifact) {
  const auto& info = corpus.domain(scenario.domain);
  require_fits(info.schema, artifact.c, "counterfactual");
  Slots s{&info, &scenario, &artifact.c, std::nullopt, std::nullopt};
  static const std::string fallback = kGenericCounterfactual;
  return {ExplanationKind::Counterfactual, fill(template_for(scenario, ExplanationKind::Counterfactual, fallback, s), s),
          std::nullopt};
}

ExplanationText render_explanation(const ScenarioCorpus& corpus, const Scenario& scenario,
                                   const DirectivePlan& artifact) {
  const auto& info = corpus.domain(scenario.domain);
  if (artifact.actions.empty())
    throw Error(ErrorCode::ArtifactSchemaMismatch, "a directive needs at least one action", scenario.id);
  require_fits(info.schema, artifact.final_state, "directive end state");
  std::vector<std::string> descriptions;
  for (const auto& a : artifact.actions) {
    if (!info.schema.find(a.feature))
      throw Error(ErrorCode::ArtifactSchemaMismatch, "action refers to an unknown feature", a.feature);
    const std::string& d = a.description.empty() ? a.id : a.description;
    if (std::find(descriptions.begin(), descriptions.end(), d) == descriptions.end()) descriptions.push_back(d);
  }
  std::string actions;
  for (std::size_t i = 0; i < descriptions.size(); ++i) actions += (i ? scenario.action_joiner : "") + descriptions[i];
  Slots s{&info, &scenario, &artifact.final_state, actions, std::nullopt};
  static const std::string fallback = kGenericDirective;
  return {ExplanationKind::Directive, fill(template_for(scenario, ExplanationKind::Directive, fallback, s), s),
          std::nullopt};
}

ExplanationText render_explanation(const ScenarioCorpus& corpus, const Scenario& scenario,
                                   const PrototypeSet& prototypes, const Dataset& data) {
  const auto& info = corpus.domain(scenario.domain);
  if (!(data.schema == info.schema))
    throw Error(ErrorCode::ArtifactSchemaMismatch, "prototype dataset uses a different schema", scenario.id);
  if (prototypes.class_label != 0 && prototypes.class_label != 1)
    throw Error(ErrorCode::ArtifactSchemaMismatch, "prototype class must be 0 or 1");
  const Instance row = top_prototype(prototypes, data);
  const std::string table = render_profile_table(info, info.prototype_header, row, prototypes.class_label);
  Slots s{&info, &scenario, nullptr, std::nullopt, table};
  static const std::string fallback = kGenericPrototypical;
  return {ExplanationKind::Prototypical, fill(template_for(scenario, ExplanationKind::Prototypical, fallback, s), s), row};
}

}  // namespace recourse
