#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recourse/counterfactual.hpp"
#include "recourse/directive.hpp"
#include "recourse/protodash.hpp"
#include "recourse/schema.hpp"
#include "recourse/serialization.hpp"

namespace recourse {

enum class ExplanationKind { Counterfactual, Directive, Prototypical };
inline constexpr std::array<ExplanationKind, 3> kExplanationKinds{
    ExplanationKind::Counterfactual, ExplanationKind::Directive, ExplanationKind::Prototypical};

std::string_view to_string(ExplanationKind kind) noexcept;
/// "c" / "d" / "p".
char kind_code(ExplanationKind kind) noexcept;
/// Accepts the full name or the one-letter code.
ExplanationKind parse_explanation_kind(std::string_view text);

enum class Domain { Credit, Employee };
inline constexpr std::array<Domain, 2> kDomains{Domain::Credit, Domain::Employee};
std::string_view to_string(Domain domain) noexcept;
Domain parse_domain(std::string_view text);

struct ExplanationText {
  ExplanationKind kind = ExplanationKind::Counterfactual;
  std::string body;
  std::optional<Instance> prototype_profile;  // prototypical only

  bool operator==(const ExplanationText&) const = default;
};

struct DomainInfo {
  FeatureSchema schema;
  std::array<std::string, 2> outcomes;  // display text of labels 0 and 1
  std::string decision_word;            // "prediction" / "decision"
  std::string decision_line;            // "PREDICTION:" / "DECISION:"
  std::string prototype_header;
  std::string role_framing;

  bool operator==(const DomainInfo&) const = default;
};

struct Scenario {
  std::string id;
  Domain domain = Domain::Credit;
  std::string title;
  std::string subject;
  std::string profile_header;
  Instance profile;
  int decision = 1;
  bool favourable = false;
  double delta = 5.0;
  std::string narrative;
  std::vector<std::string> scale_notes;
  std::vector<Action> actions;
  std::string action_joiner = " and ";
  std::map<ExplanationKind, ExplanationText> explanations;
  std::map<ExplanationKind, std::string> templates;
  std::vector<std::string> notes;

  int target_label() const noexcept { return 1 - decision; }
  bool operator==(const Scenario&) const = default;
};

struct ScenarioCorpus {
  std::map<Domain, DomainInfo> domains;
  std::vector<Scenario> scenarios;

  const DomainInfo& domain(Domain d) const;
  /// Throws InvalidArgument for an unknown id.
  const Scenario& find(std::string_view id) const;
  std::vector<const Scenario*> of_domain(Domain d) const;

  bool operator==(const ScenarioCorpus&) const = default;
};

/// Validates every record and reports all problems at once (CorpusInvalid,
/// one "id: problem" entry per issue in the detail).
ScenarioCorpus parse_scenarios(const Json& doc);
ScenarioCorpus load_scenarios(const std::filesystem::path& path);
Json scenarios_to_json(const ScenarioCorpus& corpus);

/// Data directory: $RECOURSE_DATA_DIR when set, else the source tree's data/.
std::filesystem::path data_dir();
/// The eight study scenarios shipped in data/scenarios.json.
const ScenarioCorpus& bundled_scenarios();

/// "Feature | Value" table: header line, one row per feature, outcome line.
std::string render_profile_table(const DomainInfo& info, const std::string& header, const Instance& x,
                                 int label);

/// Fills the scenario's template for the artifact. The generic sentence is
/// used instead when the scenario has no template or when the template names
/// a feature the artifact leaves at its profile value. Slots: {target}, {decision_word}, {subject}, {changes},
/// {actions}, {table}, {value:Feature}, {lower:Feature}. Throws
/// ArtifactSchemaMismatch when the artifact does not fit the scenario.
ExplanationText render_explanation(const ScenarioCorpus& corpus, const Scenario& scenario,
                                   const CounterfactualResult& artifact);
ExplanationText render_explanation(const ScenarioCorpus& corpus, const Scenario& scenario,
                                   const DirectivePlan& artifact);
ExplanationText render_explanation(const ScenarioCorpus& corpus, const Scenario& scenario,
                                   const PrototypeSet& prototypes, const Dataset& data);

}  // namespace recourse
