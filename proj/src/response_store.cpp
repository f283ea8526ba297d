#include "recourse/response_store.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <random>
#include <sstream>

#include "recourse/csv.hpp"
#include "recourse/error.hpp"
#include "recourse/schema.hpp"

namespace recourse {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string random_token() {
  std::random_device rd;
  char buf[33];
  std::uint64_t hi = (std::uint64_t(rd()) << 32) | rd(), lo = (std::uint64_t(rd()) << 32) | rd();
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(hi),
                static_cast<unsigned long long>(lo));
  return buf;
}

std::string kinds_key(const std::vector<ExplanationKind>& kinds) {
  if (kinds.size() == 1) return std::string(1, kind_code(kinds[0]));
  return pair_key({kinds[0], kinds[1]});
}

}  // namespace

std::string rows_to_csv(const std::vector<ResponseRow>& rows) {
  std::string out = csv::join({kExportColumns.begin(), kExportColumns.end()}) + "\n";
  for (const auto& r : rows) {
    std::vector<std::string> f{r.session,  r.participant,  std::string(to_string(r.domain)),
                               std::string(to_string(r.study)), r.scenario, r.kind_or_pair, r.choice};
    for (std::size_t q = 0; q < kQuestionCount; ++q) f.push_back(r.answers ? std::to_string((*r.answers)[q]) : "");
    f.push_back(shortest(r.elapsed_s));
    out += csv::join(f) + "\n";
  }
  return out;
}

std::vector<ResponseRow> rows_from_csv(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty()) throw Error(ErrorCode::ParseError, "export is empty", "line 1");
  if (records[0].fields != std::vector<std::string>(kExportColumns.begin(), kExportColumns.end()))
    throw Error(ErrorCode::ParseError, "unexpected export header", "line " + std::to_string(records[0].line));
  std::vector<ResponseRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i].fields;
    const std::string where = "line " + std::to_string(records[i].line);
    if (f.size() != kExportColumns.size()) throw Error(ErrorCode::ParseError, "wrong number of cells", where);
    auto number = [&](const std::string& cell, auto& out) {
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
      if (ec != std::errc{} || p != cell.data() + cell.size())
        throw Error(ErrorCode::ParseError, "not a number: '" + cell + "'", where);
    };
    ResponseRow r;
    r.session = f[0];
    r.participant = f[1];
    try {
      r.domain = parse_domain(f[2]);
      r.study = parse_study(f[3]);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, e.what(), where);
    }
    r.scenario = f[4];
    r.kind_or_pair = f[5];
    r.choice = f[6];
    bool any = false, all = true;
    std::array<int, kQuestionCount> answers{};
    for (std::size_t q = 0; q < kQuestionCount; ++q) {
      const auto& cell = f[7 + q];
      if (cell.empty()) {
        all = false;
        continue;
      }
      any = true;
      number(cell, answers[q]);
    }
    if (any && !all) throw Error(ErrorCode::ParseError, "partial answer row", where);
    if (all) r.answers = answers;
    number(f[14], r.elapsed_s);
    rows.push_back(std::move(r));
  }
  return rows;
}

ResponseStore::ResponseStore(std::optional<std::filesystem::path> path, LikertScale scale)
    : path_(std::move(path)), scale_(std::move(scale)) {
  if (scale_.points < 2) throw Error(ErrorCode::InvalidArgument, "a Likert scale needs at least two points");
  if (!path_ || !std::filesystem::exists(*path_)) return;
  log_ = read_text_file(*path_);
  std::istringstream in(log_);
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.empty()) continue;
    try {
      apply(Json::parse(line));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, "corrupt response log", path_->string() + ":" + std::to_string(n));
    }
  }
}

ResponseStore::Stored& ResponseStore::stored(const std::string& id) {
  for (auto& s : sessions_)
    if (s.session.id == id) return s;
  throw Error(ErrorCode::UnknownSession, "unknown session", id);
}

const ResponseStore::Stored& ResponseStore::stored(const std::string& id) const {
  return const_cast<ResponseStore*>(this)->stored(id);
}

void ResponseStore::apply(const Json& event) {
  const auto type = event.at("type").get<std::string>();
  if (type == "session") {
    Session s = session_from_json(event.at("session"));
    const auto n = s.plan.size();
    sessions_.push_back({std::move(s), std::vector<bool>(n, false)});
    return;
  }
  auto& st = stored(event.at("session").get<std::string>());
  const auto scenario = event.at("scenario").get<std::string>();
  const auto task = locate_task(st, scenario);
  st.answered[task] = true;
  ResponseRow r{st.session.id, st.session.participant, st.session.domain, st.session.study, scenario,
                kinds_key(st.session.plan[task].kinds), "", std::nullopt, event.value("elapsed_s", 0.0)};
  if (type == "rating") {
    r.answers = event.at("answers").get<std::array<int, kQuestionCount>>();
  } else {
    r.choice = event.at("choice").get<std::string>();
  }
  rows_.push_back(std::move(r));
}

void ResponseStore::append(const Json& event) {
  std::string next = log_ + event.dump() + "\n";
  if (path_) write_text_file_atomic(*path_, next);
  log_ = std::move(next);
  apply(event);
}

std::size_t ResponseStore::locate_task(const Stored& s, const std::string& scenario) const {
  for (std::size_t i = 0; i < s.session.plan.size(); ++i)
    if (s.session.plan[i].scenario == scenario) return i;
  throw Error(ErrorCode::OutOfPlanTask, "scenario is not part of this session's plan", scenario);
}

Session ResponseStore::create_session(const std::string& participant, const ScenarioCorpus& corpus,
                                      std::optional<Study> study, std::optional<Domain> domain,
                                      std::optional<std::uint64_t> seed, Json demographics) {
  // 53 bits, so the seed survives a round trip through a JavaScript number
  if (!seed) seed = ((std::uint64_t(std::random_device{}()) << 32) | std::random_device{}()) & ((1ULL << 53) - 1);
  Session s = build_study_plan(participant, study, corpus, *seed, domain);
  s.token = random_token();
  s.created_at = utc_now();
  s.demographics = std::move(demographics);
  std::unique_lock lock(mutex_);
  char id[32];
  std::snprintf(id, sizeof id, "s%06zu", sessions_.size() + 1);
  s.id = id;
  append({{"type", "session"}, {"session", session_to_json(s, true)}});
  return s;
}

Session ResponseStore::session(const std::string& id) const {
  std::shared_lock lock(mutex_);
  return stored(id).session;
}

std::vector<Session> ResponseStore::sessions() const {
  std::shared_lock lock(mutex_);
  std::vector<Session> out;
  for (const auto& s : sessions_) out.push_back(s.session);
  return out;
}

std::optional<std::size_t> ResponseStore::next_task_index(const std::string& session_id) const {
  std::shared_lock lock(mutex_);
  const auto& st = stored(session_id);
  for (std::size_t i = 0; i < st.answered.size(); ++i)
    if (!st.answered[i]) return i;
  return std::nullopt;
}

void ResponseStore::check_token(const std::string& session_id, const std::string& token) const {
  std::shared_lock lock(mutex_);
  if (stored(session_id).session.token != token)
    throw Error(ErrorCode::Unauthorized, "session token does not match", session_id);
}

std::string ResponseStore::record_rating(const RatingResponse& r) {
  std::unique_lock lock(mutex_);
  const auto& st = stored(r.session);
  if (st.session.study != Study::Rating)
    throw Error(ErrorCode::OutOfPlanTask, "session belongs to the pairwise study", r.session);
  const auto task = locate_task(st, r.scenario);
  if (st.session.plan[task].kinds != std::vector<ExplanationKind>{r.kind})
    throw Error(ErrorCode::OutOfPlanTask, "explanation kind does not match the plan",
                r.scenario + ":" + std::string(to_string(r.kind)));
  if (st.answered[task]) throw Error(ErrorCode::DuplicateResponse, "task already answered", r.scenario);
  for (std::size_t q = 0; q < kQuestionCount; ++q)
    if (!scale_.contains(r.answers[q]))
      throw Error(ErrorCode::AnswerOutOfRange, "answer outside the Likert scale",
                  instrument()[q].id + "=" + std::to_string(r.answers[q]));
  append({{"type", "rating"},
          {"session", r.session},
          {"scenario", r.scenario},
          {"kind", std::string(1, kind_code(r.kind))},
          {"answers", r.answers},
          {"elapsed_s", r.elapsed_s}});
  return r.session + "/" + r.scenario;
}

std::string ResponseStore::record_pairwise(const PairwiseResponse& p) {
  std::unique_lock lock(mutex_);
  const auto& st = stored(p.session);
  if (st.session.study != Study::Pairwise)
    throw Error(ErrorCode::OutOfPlanTask, "session belongs to the rating study", p.session);
  const auto task = locate_task(st, p.scenario);
  const auto& planned = st.session.plan[task].kinds;
  if (planned != std::vector<ExplanationKind>{p.pair.first, p.pair.second})
    throw Error(ErrorCode::OutOfPlanTask, "pair does not match the plan", p.scenario + ":" + pair_key(p.pair));
  if (st.answered[task]) throw Error(ErrorCode::DuplicateResponse, "task already answered", p.scenario);
  if (p.choice != p.pair.first && p.choice != p.pair.second)
    throw Error(ErrorCode::InvalidChoice, "choice is not one of the two explanations shown",
                std::string(to_string(p.choice)));
  append({{"type", "pairwise"},
          {"session", p.session},
          {"scenario", p.scenario},
          {"pair", pair_key(p.pair)},
          {"choice", std::string(1, kind_code(p.choice))},
          {"elapsed_s", p.elapsed_s}});
  return p.session + "/" + p.scenario;
}

std::vector<ResponseRow> ResponseStore::export_rows(std::optional<Study> study) const {
  std::shared_lock lock(mutex_);
  std::vector<ResponseRow> out;
  for (const auto& r : rows_)
    if (!study || r.study == *study) out.push_back(r);
  return out;
}

std::size_t ResponseStore::response_count() const {
  std::shared_lock lock(mutex_);
  return rows_.size();
}

}  // namespace recourse
