#pragma once

#include <array>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "recourse/assessment.hpp"

namespace recourse {

/// One exported response. Rating rows carry `kind_or_pair` = "c" and all
/// seven answers; pairwise rows carry `kind_or_pair` = "c-d" (side A first),
/// `choice` = the chosen kind's code and no answers.
struct ResponseRow {
  std::string session;
  std::string participant;
  Domain domain = Domain::Credit;
  Study study = Study::Rating;
  std::string scenario;
  std::string kind_or_pair;
  std::string choice;
  std::optional<std::array<int, kQuestionCount>> answers;
  double elapsed_s = 0.0;

  bool operator==(const ResponseRow&) const = default;
};

inline constexpr std::array<const char*, 15> kExportColumns{
    "session", "participant", "domain", "study", "scenario", "kind_or_pair", "choice", "Q1",
    "Q2",      "Q3",          "Q4",     "Q5",    "Q6",       "Q7",           "elapsed_s"};

std::string rows_to_csv(const std::vector<ResponseRow>& rows);
/// Inverse of rows_to_csv. Throws ParseError (detail carries the line) on a
/// malformed header or cell.
std::vector<ResponseRow> rows_from_csv(std::string_view text);

/// Sessions and responses behind an append-only JSON-lines log. Every write
/// takes an exclusive lock and replaces the log file through a temporary file
/// and rename, so a crash leaves either the old or the new log. Reads share the
/// lock and see a consistent prefix. Without a path the store is in-memory.
class ResponseStore {
 public:
  explicit ResponseStore(std::optional<std::filesystem::path> path = std::nullopt, LikertScale scale = {});

  /// Builds a plan with `build_study_plan`, assigns an id and a fresh 128-bit
  /// token and persists it. A missing seed is drawn from std::random_device.
  Session create_session(const std::string& participant, const ScenarioCorpus& corpus,
                         std::optional<Study> study = std::nullopt, std::optional<Domain> domain = std::nullopt,
                         std::optional<std::uint64_t> seed = std::nullopt, Json demographics = nullptr);

  Session session(const std::string& id) const;  // throws UnknownSession
  std::vector<Session> sessions() const;

  /// Index into the plan of the first unanswered task; nullopt when done.
  std::optional<std::size_t> next_task_index(const std::string& session_id) const;

  /// Throws UnknownSession, OutOfPlanTask, DuplicateResponse,
  /// AnswerOutOfRange (rating) or InvalidChoice (pairwise). Nothing is stored
  /// on failure. Returns the response id.
  std::string record_rating(const RatingResponse& r);
  std::string record_pairwise(const PairwiseResponse& p);

  /// Throws Unauthorized unless `token` belongs to the session.
  void check_token(const std::string& session_id, const std::string& token) const;

  /// One row per response, in recording order, optionally filtered by study.
  std::vector<ResponseRow> export_rows(std::optional<Study> study = std::nullopt) const;

  const LikertScale& scale() const noexcept { return scale_; }
  std::size_t response_count() const;

 private:
  struct Stored {
    Session session;
    std::vector<bool> answered;
  };

  Stored& stored(const std::string& id);
  const Stored& stored(const std::string& id) const;
  void apply(const Json& event);  // replays one log line
  void append(const Json& event);
  std::size_t locate_task(const Stored& s, const std::string& scenario) const;

  std::optional<std::filesystem::path> path_;
  LikertScale scale_;
  mutable std::shared_mutex mutex_;
  std::string log_;
  std::vector<Stored> sessions_;
  std::vector<ResponseRow> rows_;
};

}  // namespace recourse
