#include "recourse/assessment.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "recourse/error.hpp"

namespace recourse {

std::string_view to_string(Topic topic) noexcept {
  switch (topic) {
    case Topic::Clarity: return "clarity";
    case Topic::DecisionUnderstanding: return "decision-understanding";
    case Topic::Personalisation: return "personalisation";
    case Topic::Correction: return "correction";
    case Topic::Action: return "action";
  }
  return "?";
}

const std::vector<Question>& instrument() {
  static const std::vector<Question> questions{
      {"Q1", "The information is clear and easy to understand.", Topic::Clarity, "Clear"},
      {"Q2", "The information helps me understand the reason(s) for the decision.", Topic::DecisionUnderstanding,
       "Identify Reasons"},
      {"Q3", "The information is relevant to my personal circumstances.", Topic::Personalisation,
       "Personally Relevant"},
      {"Q4", "The information is socially appropriate.", Topic::Personalisation, "Socially Appropriate"},
      {"Q5", "The information allows me to identify and correct any misunderstandings of my personal situation.",
       Topic::Correction, "Correct Misunderstanding"},
      {"Q6", "The information allows me to identify at least one feasible action to achieve my desired outcome.",
       Topic::Action, "Feasible Action"},
      {"Q7", "The information allows me to break down any action into explicit steps.", Topic::Action,
       "Identify Steps"},
  };
  return questions;
}

std::string_view to_string(Study study) noexcept { return study == Study::Pairwise ? "pairwise" : "rating"; }

Study parse_study(std::string_view text) {
  if (text == "pairwise") return Study::Pairwise;
  if (text == "rating") return Study::Rating;
  throw Error(ErrorCode::InvalidArgument, "unknown study", std::string(text));
}

std::string pair_key(const std::pair<ExplanationKind, ExplanationKind>& pair) {
  return std::string{kind_code(pair.first), '-', kind_code(pair.second)};
}

const std::string& role_framing(const ScenarioCorpus& corpus, Domain domain) {
  return corpus.domain(domain).role_framing;
}

Session build_study_plan(const std::string& participant, std::optional<Study> study, const ScenarioCorpus& corpus,
                         std::uint64_t seed, std::optional<Domain> domain) {
  std::mt19937_64 rng(seed);
  auto coin = [&rng](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

  Session s;
  s.participant = participant;
  s.seed = seed;
  // draws happen unconditionally so that fixing one factor leaves the others unchanged
  const Study drawn_study = coin(2) == 0 ? Study::Pairwise : Study::Rating;
  const Domain drawn_domain = kDomains[coin(kDomains.size())];
  s.study = study.value_or(drawn_study);
  s.domain = domain.value_or(drawn_domain);

  auto pool = corpus.of_domain(s.domain);
  if (pool.size() < 3)
    throw Error(ErrorCode::CorpusTooSmall, "a study plan needs three scenarios from one domain",
                std::string(to_string(s.domain)) + " has " + std::to_string(pool.size()));
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(3);

  if (s.study == Study::Rating) {
    std::array<ExplanationKind, 3> kinds = kExplanationKinds;
    std::shuffle(kinds.begin(), kinds.end(), rng);
    for (std::size_t i = 0; i < 3; ++i) s.plan.push_back({pool[i]->id, {kinds[i]}});
  } else {
    using K = ExplanationKind;
    std::array<std::pair<K, K>, 3> pairs{{{K::Counterfactual, K::Directive},
                                          {K::Counterfactual, K::Prototypical},
                                          {K::Directive, K::Prototypical}}};
    std::shuffle(pairs.begin(), pairs.end(), rng);
    for (std::size_t i = 0; i < 3; ++i) {
      auto [a, b] = pairs[i];
      if (coin(2)) std::swap(a, b);
      s.plan.push_back({pool[i]->id, {a, b}});
    }
  }
  return s;
}

bool plan_is_valid(const Session& s) {
  if (s.plan.size() != 3) return false;
  std::set<std::string> scenarios;
  std::set<ExplanationKind> kinds;
  std::set<std::set<ExplanationKind>> pairs;
  for (const auto& t : s.plan) {
    scenarios.insert(t.scenario);
    if (s.study == Study::Rating) {
      if (t.kinds.size() != 1) return false;
      kinds.insert(t.kinds[0]);
    } else {
      if (t.kinds.size() != 2 || t.kinds[0] == t.kinds[1]) return false;
      pairs.insert({t.kinds[0], t.kinds[1]});
    }
  }
  if (scenarios.size() != 3) return false;
  return s.study == Study::Rating ? kinds.size() == 3 : pairs.size() == 3;
}

Json session_to_json(const Session& s, bool include_token) {
  Json plan = Json::array();
  for (const auto& t : s.plan) {
    Json kinds = Json::array();
    for (auto k : t.kinds) kinds.push_back(std::string(to_string(k)));
    plan.push_back({{"scenario", t.scenario}, {"kinds", kinds}});
  }
  Json out = {{"id", s.id},
              {"participant", s.participant},
              {"study", std::string(to_string(s.study))},
              {"domain", std::string(to_string(s.domain))},
              {"plan", plan},
              {"seed", s.seed},
              {"created_at", s.created_at}};
  if (!s.demographics.is_null()) out["demographics"] = s.demographics;
  if (include_token) out["token"] = s.token;
  return out;
}

Session session_from_json(const Json& doc) {
  Session s;
  s.id = doc.at("id").get<std::string>();
  s.token = doc.value("token", std::string{});
  s.participant = doc.at("participant").get<std::string>();
  s.study = parse_study(doc.at("study").get<std::string>());
  s.domain = parse_domain(doc.at("domain").get<std::string>());
  for (const auto& t : doc.at("plan")) {
    Task task{t.at("scenario").get<std::string>(), {}};
    for (const auto& k : t.at("kinds")) task.kinds.push_back(parse_explanation_kind(k.get<std::string>()));
    s.plan.push_back(std::move(task));
  }
  s.seed = doc.value("seed", std::uint64_t{0});
  s.created_at = doc.value("created_at", std::string{});
  if (doc.contains("demographics")) s.demographics = doc["demographics"];
  return s;
}

}  // namespace recourse
