#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "recourse/scenarios.hpp"
#include "recourse/serialization.hpp"

namespace recourse {

enum class Topic { Clarity, DecisionUnderstanding, Personalisation, Correction, Action };
std::string_view to_string(Topic topic) noexcept;

struct Question {
  std::string id;     // "Q1" .. "Q7"
  std::string text;
  Topic topic;
  std::string label;  // short column label, e.g. "Feasible Action"
};

inline constexpr std::size_t kQuestionCount = 7;

/// The seven questions, always in the order Q1..Q7.
const std::vector<Question>& instrument();

struct LikertScale {
  int points = 5;
  std::vector<std::string> anchors{"Strongly disagree", "Disagree", "Neither agree nor disagree", "Agree",
                                   "Strongly agree"};
  bool contains(int answer) const noexcept { return answer >= 1 && answer <= points; }
};

inline constexpr std::string_view kPairwiseLeadIn = "The system has generated the following two explanations for you.";
inline constexpr std::string_view kPairwisePrompt = "Which of the two explanations do you think is more actionable?";

enum class Study { Pairwise, Rating };
std::string_view to_string(Study study) noexcept;
Study parse_study(std::string_view text);

/// One step of a session plan. Rating tasks show one explanation kind;
/// pairwise tasks show two, `kinds[0]` on side A and `kinds[1]` on side B.
struct Task {
  std::string scenario;
  std::vector<ExplanationKind> kinds;

  bool operator==(const Task&) const = default;
};

struct Session {
  std::string id;
  std::string token;  // capability for answering; never part of exports
  std::string participant;
  Study study = Study::Rating;
  Domain domain = Domain::Credit;
  std::vector<Task> plan;
  std::uint64_t seed = 0;
  std::string created_at;
  Json demographics;
};

/// Random allocation for one participant: study (unless given), domain
/// (unless given), three of the domain's four scenarios in random order, and
/// either a bijection scenarios <-> {c, d, p} (rating) or the three pairs
/// {c,d}, {c,p}, {d,p} once each with random sides (pairwise). Deterministic
/// for a fixed seed. Throws CorpusTooSmall when the domain has fewer than
/// three scenarios.
Session build_study_plan(const std::string& participant, std::optional<Study> study, const ScenarioCorpus& corpus,
                         std::uint64_t seed, std::optional<Domain> domain = std::nullopt);

/// Post-hoc plan validity (three tasks, distinct scenarios, coverage rules).
bool plan_is_valid(const Session& s);

struct RatingResponse {
  std::string session;
  std::string scenario;
  ExplanationKind kind = ExplanationKind::Counterfactual;
  std::array<int, kQuestionCount> answers{};
  double elapsed_s = 0.0;
};

struct PairwiseResponse {
  std::string session;
  std::string scenario;
  std::pair<ExplanationKind, ExplanationKind> pair;  // (side A, side B)
  ExplanationKind choice = ExplanationKind::Counterfactual;
  double elapsed_s = 0.0;
};

/// "c-d" style key of an ordered pair.
std::string pair_key(const std::pair<ExplanationKind, ExplanationKind>& pair);

/// Framing shown before the first task of a domain.
const std::string& role_framing(const ScenarioCorpus& corpus, Domain domain);

Json session_to_json(const Session& s, bool include_token = false);
Session session_from_json(const Json& doc);

}  // namespace recourse
