#include "recourse/scenarios.hpp"

#include <cstdlib>
#include <set>

#include "recourse/error.hpp"

#ifndef RECOURSE_DEFAULT_DATA_DIR
#define RECOURSE_DEFAULT_DATA_DIR "data"
#endif

namespace recourse {

std::string_view to_string(ExplanationKind kind) noexcept {
  switch (kind) {
    case ExplanationKind::Counterfactual: return "counterfactual";
    case ExplanationKind::Directive: return "directive";
    case ExplanationKind::Prototypical: return "prototypical";
  }
  return "?";
}

char kind_code(ExplanationKind kind) noexcept { return to_string(kind).front(); }

ExplanationKind parse_explanation_kind(std::string_view text) {
  for (auto k : kExplanationKinds)
    if (text == to_string(k) || (text.size() == 1 && text.front() == kind_code(k))) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown explanation kind", std::string(text));
}

std::string_view to_string(Domain domain) noexcept {
  return domain == Domain::Credit ? "credit" : "employee";
}

Domain parse_domain(std::string_view text) {
  for (auto d : kDomains)
    if (text == to_string(d)) return d;
  throw Error(ErrorCode::InvalidArgument, "unknown domain", std::string(text));
}

const DomainInfo& ScenarioCorpus::domain(Domain d) const {
  auto it = domains.find(d);
  if (it == domains.end()) throw Error(ErrorCode::CorpusInvalid, "corpus lacks a domain", std::string(to_string(d)));
  return it->second;
}

const Scenario& ScenarioCorpus::find(std::string_view id) const {
  for (const auto& s : scenarios)
    if (s.id == id) return s;
  throw Error(ErrorCode::InvalidArgument, "unknown scenario", std::string(id));
}

std::vector<const Scenario*> ScenarioCorpus::of_domain(Domain d) const {
  std::vector<const Scenario*> out;
  for (const auto& s : scenarios)
    if (s.domain == d) out.push_back(&s);
  return out;
}

namespace {

DomainInfo parse_domain_info(const Json& doc) {
  DomainInfo info;
  info.schema = schema_from_json(doc.at("schema"));
  const auto outcomes = doc.at("outcomes").get<std::vector<std::string>>();
  if (outcomes.size() != 2) throw Error(ErrorCode::CorpusInvalid, "a domain names exactly two outcomes");
  info.outcomes = {outcomes[0], outcomes[1]};
  info.decision_word = doc.at("decision_word").get<std::string>();
  info.decision_line = doc.at("decision_line").get<std::string>();
  info.prototype_header = doc.at("prototype_header").get<std::string>();
  info.role_framing = doc.at("role_framing").get<std::string>();
  return info;
}

Scenario parse_scenario(const Json& doc, const std::map<Domain, DomainInfo>& domains, std::vector<std::string>& problems) {
  Scenario s;
  s.id = doc.at("id").get<std::string>();
  auto problem = [&](const std::string& what) { problems.push_back(s.id + ": " + what); };
  s.domain = parse_domain(doc.at("domain").get<std::string>());
  auto dom = domains.find(s.domain);
  if (dom == domains.end()) {
    problem("domain not described in the corpus");
    return s;
  }
  const auto& schema = dom->second.schema;
  s.title = doc.value("title", std::string{});
  s.subject = doc.value("subject", std::string{});
  s.profile_header = doc.value("profile_header", std::string{});
  try {
    s.profile = instance_from_json(schema, doc.at("profile"));
  } catch (const Error& e) {
    problem(std::string("profile: ") + e.what() + " (" + e.detail() + ")");
  }
  s.decision = doc.at("decision").get<int>();
  if (s.decision != 0 && s.decision != 1) problem("decision must be 0 or 1");
  s.favourable = doc.at("favourable").get<bool>();
  if (s.favourable != (s.decision == 0)) problem("favourable flag contradicts the decision");
  s.delta = doc.value("delta", s.delta);
  s.narrative = doc.value("narrative", std::string{});
  s.scale_notes = doc.value("scale_notes", std::vector<std::string>{});
  if (doc.contains("actions")) {
    for (const auto& a : doc["actions"]) {
      try {
        s.actions.push_back(action_from_json(schema, a));
      } catch (const Error& e) {
        problem(std::string("action: ") + e.what() + " (" + e.detail() + ")");
      }
    }
  }
  s.action_joiner = doc.value("action_joiner", s.action_joiner);
  s.notes = doc.value("notes", std::vector<std::string>{});

  const Json explanations = doc.value("explanations", Json::object());
  for (auto kind : kExplanationKinds) {
    const std::string name(to_string(kind));
    auto it = explanations.find(name);
    if (it == explanations.end() || !it->contains("body") || (*it)["body"].get<std::string>().empty()) {
      problem("missing " + name + " text");
      continue;
    }
    ExplanationText text{kind, (*it)["body"].get<std::string>(), std::nullopt};
    if (it->contains("template")) s.templates[kind] = (*it)["template"].get<std::string>();
    if (it->contains("prototype_profile")) {
      if (kind != ExplanationKind::Prototypical) {
        problem(name + " text must not carry a profile table");
      } else {
        try {
          text.prototype_profile = instance_from_json(schema, (*it)["prototype_profile"]);
        } catch (const Error& e) {
          problem(std::string("prototype profile: ") + e.what() + " (" + e.detail() + ")");
        }
      }
    } else if (kind == ExplanationKind::Prototypical) {
      problem("prototypical text needs a prototype_profile");
    }
    s.explanations.emplace(kind, std::move(text));
  }
  return s;
}

}  // namespace

ScenarioCorpus parse_scenarios(const Json& doc) {
  ScenarioCorpus corpus;
  std::vector<std::string> problems;
  try {
    for (const auto& [name, info] : doc.at("domains").items()) {
      try {
        corpus.domains.emplace(parse_domain(name), parse_domain_info(info));
      } catch (const Error& e) {
        problems.push_back(name + ": " + e.what() + " (" + e.detail() + ")");
      }
    }
    std::set<std::string> ids;
    for (const auto& item : doc.at("scenarios")) {
      Scenario s = parse_scenario(item, corpus.domains, problems);
      if (!ids.insert(s.id).second) problems.push_back(s.id + ": duplicate scenario id");
      corpus.scenarios.push_back(std::move(s));
    }
  } catch (const Json::exception& e) {
    problems.push_back(std::string("malformed corpus: ") + e.what());
  } catch (const Error& e) {
    problems.push_back(std::string(e.what()) + " (" + e.detail() + ")");
  }
  if (corpus.scenarios.empty() && problems.empty()) problems.push_back("corpus has no scenarios");
  if (!problems.empty()) {
    std::string detail;
    for (const auto& p : problems) detail += (detail.empty() ? "" : "; ") + p;
    throw Error(ErrorCode::CorpusInvalid, "scenario corpus is invalid", detail);
  }
  return corpus;
}

ScenarioCorpus load_scenarios(const std::filesystem::path& path) {
  Json doc;
  try {
    doc = load_json(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::CorpusInvalid, "cannot read scenario corpus", e.detail().empty() ? e.what() : e.detail());
  }
  return parse_scenarios(doc);
}

Json scenarios_to_json(const ScenarioCorpus& corpus) {
  Json out;
  out["version"] = 1;
  Json domains = Json::object();
  for (const auto& [d, info] : corpus.domains) {
    domains[std::string(to_string(d))] = {{"schema", schema_to_json_value(info.schema)},
                                          {"outcomes", info.outcomes},
                                          {"decision_word", info.decision_word},
                                          {"decision_line", info.decision_line},
                                          {"prototype_header", info.prototype_header},
                                          {"role_framing", info.role_framing}};
  }
  out["domains"] = domains;
  Json list = Json::array();
  for (const auto& s : corpus.scenarios) {
    const auto& schema = corpus.domain(s.domain).schema;
    Json item = {{"id", s.id},
                 {"domain", std::string(to_string(s.domain))},
                 {"title", s.title},
                 {"subject", s.subject},
                 {"profile_header", s.profile_header},
                 {"profile", instance_to_json(schema, s.profile)},
                 {"decision", s.decision},
                 {"favourable", s.favourable},
                 {"delta", s.delta},
                 {"narrative", s.narrative},
                 {"scale_notes", s.scale_notes},
                 {"action_joiner", s.action_joiner}};
    Json actions = Json::array();
    for (const auto& a : s.actions) actions.push_back(action_to_json(schema, a));
    item["actions"] = actions;
    Json explanations = Json::object();
    for (const auto& [kind, text] : s.explanations) {
      Json e = {{"body", text.body}};
      if (auto t = s.templates.find(kind); t != s.templates.end()) e["template"] = t->second;
      if (text.prototype_profile) e["prototype_profile"] = instance_to_json(schema, *text.prototype_profile);
      explanations[std::string(to_string(kind))] = e;
    }
    item["explanations"] = explanations;
    if (!s.notes.empty()) item["notes"] = s.notes;
    list.push_back(std::move(item));
  }
  out["scenarios"] = list;
  return out;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("RECOURSE_DATA_DIR"); env && *env) return env;
  return RECOURSE_DEFAULT_DATA_DIR;
}

const ScenarioCorpus& bundled_scenarios() {
  static const ScenarioCorpus corpus = load_scenarios(data_dir() / "scenarios.json");
  return corpus;
}

}  // namespace recourse
