#include "recourse/analysis.hpp"

#include <algorithm>
#include <map>

#include "recourse/error.hpp"
#include "recourse/schema.hpp"

namespace recourse {

namespace {

int kind_column(char code) {
  switch (code) {
    case 'c': return 0;
    case 'd': return 1;
    case 'p': return 2;
  }
  throw Error(ErrorCode::InvalidChoice, "unknown explanation code", std::string(1, code));
}

constexpr std::array<const char*, 3> kCodes{"c", "d", "p"};

// Sessions of one domain and study, in order of first appearance.
std::vector<std::pair<std::string, std::vector<const ResponseRow*>>> by_session(const std::vector<ResponseRow>& rows,
                                                                                Domain domain, Study study) {
  std::vector<std::pair<std::string, std::vector<const ResponseRow*>>> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    if (r.domain != domain || r.study != study) continue;
    auto [it, fresh] = index.try_emplace(r.session, out.size());
    if (fresh) out.push_back({r.session, {}});
    out[it->second].second.push_back(&r);
  }
  return out;
}

Json friedman_json(const FriedmanResult& f) {
  return {{"chi2", f.chi2},
          {"df", f.df},
          {"p", f.p},
          {"kendall_w", f.kendall_w},
          {"n", f.n},
          {"mean_ranks", {{"c", f.mean_ranks[0]}, {"d", f.mean_ranks[1]}, {"p", f.mean_ranks[2]}}}};
}

Json posthoc_json(const PosthocPairs& p) {
  Json matrix = Json::array();
  for (Eigen::Index i = 0; i < p.matrix.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < p.matrix.cols(); ++j) row.push_back(p.matrix(i, j));
    matrix.push_back(row);
  }
  return {{"c vs d", p.c_vs_d}, {"c vs p", p.c_vs_p}, {"d vs p", p.d_vs_p}, {"matrix", matrix}};
}

}  // namespace

PosthocPairs posthoc_pairs(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  PosthocPairs out;
  out.matrix = nemenyi(m);
  out.c_vs_d = out.matrix(0, 1);
  out.c_vs_p = out.matrix(0, 2);
  out.d_vs_p = out.matrix(1, 2);
  return out;
}

std::vector<PairwiseDomainReport> analyze_pairwise(const std::vector<ResponseRow>& rows) {
  std::vector<PairwiseDomainReport> out;
  for (Domain domain : kDomains) {
    const auto sessions = by_session(rows, domain, Study::Pairwise);
    if (sessions.empty()) continue;
    PairwiseDomainReport rep;
    rep.domain = domain;
    std::vector<Eigen::RowVector3d> complete;
    for (const auto& [id, responses] : sessions) {
      Eigen::RowVector3d row = Eigen::RowVector3d::Zero();
      for (const auto* r : responses) {
        if (r->choice.size() != 1) throw Error(ErrorCode::InvalidChoice, "pairwise row without a choice", id);
        const int col = kind_column(r->choice[0]);
        row[col] += 1;
        ++rep.counts[col];
      }
      if (responses.size() == 3) {
        complete.push_back(row);
        rep.sessions.push_back(id);
      } else {
        rep.excluded.push_back(id);
      }
    }
    rep.gof = chi_square_gof(rep.counts);
    rep.count_matrix.resize(static_cast<Eigen::Index>(complete.size()), 3);
    for (std::size_t i = 0; i < complete.size(); ++i) rep.count_matrix.row(static_cast<Eigen::Index>(i)) = complete[i];
    if (complete.size() >= 2) {
      rep.friedman = friedman(rep.count_matrix);
      rep.posthoc = posthoc_pairs(rep.count_matrix);
    }
    out.push_back(std::move(rep));
  }
  if (out.empty()) throw Error(ErrorCode::NoResponses, "no pairwise responses to analyse");
  return out;
}

std::vector<RatingDomainReport> analyze_ratings(const std::vector<ResponseRow>& rows) {
  std::vector<RatingDomainReport> out;
  for (Domain domain : kDomains) {
    const auto sessions = by_session(rows, domain, Study::Rating);
    if (sessions.empty()) continue;
    RatingDomainReport rep;
    rep.domain = domain;
    std::vector<std::array<const ResponseRow*, 3>> complete;
    for (const auto& [id, responses] : sessions) {
      std::array<const ResponseRow*, 3> slot{};
      bool ok = responses.size() == 3;
      for (const auto* r : responses) {
        if (!r->answers || r->kind_or_pair.size() != 1) throw Error(ErrorCode::ParseError, "malformed rating row", id);
        auto& s = slot[kind_column(r->kind_or_pair[0])];
        if (s) ok = false;
        s = r;
      }
      ok = ok && std::all_of(slot.begin(), slot.end(), [](auto* p) { return p != nullptr; });
      if (ok) {
        complete.push_back(slot);
        rep.sessions.push_back(id);
      } else {
        rep.excluded.push_back(id);
      }
    }
    for (std::size_t q = 0; q < kQuestionCount; ++q) {
      QuestionReport qr;
      qr.question = instrument()[q].id;
      qr.scores.resize(static_cast<Eigen::Index>(complete.size()), 3);
      for (std::size_t i = 0; i < complete.size(); ++i)
        for (int k = 0; k < 3; ++k) qr.scores(static_cast<Eigen::Index>(i), k) = (*complete[i][k]->answers)[q];
      if (complete.size() >= 2) {
        qr.friedman = friedman(qr.scores);
        qr.posthoc = posthoc_pairs(qr.scores);
      }
      qr.medians = complete.empty() ? Eigen::VectorXd::Constant(3, std::nan("")) : column_medians(qr.scores);
      rep.questions.push_back(std::move(qr));
    }
    out.push_back(std::move(rep));
  }
  if (out.empty()) throw Error(ErrorCode::NoResponses, "no rating responses to analyse");
  return out;
}

Json to_json(const PairwiseDomainReport& r) {
  Json out = {{"domain", std::string(to_string(r.domain))},
              {"counts", {{"c", r.counts[0]}, {"d", r.counts[1]}, {"p", r.counts[2]}}},
              {"chi_square", {{"stat", r.gof.stat}, {"df", r.gof.df}, {"p", r.gof.p}, {"n", r.gof.n}}},
              {"sessions", r.sessions},
              {"excluded", r.excluded}};
  out["friedman"] = r.friedman ? friedman_json(*r.friedman) : Json(nullptr);
  out["posthoc"] = r.posthoc ? posthoc_json(*r.posthoc) : Json(nullptr);
  return out;
}

Json to_json(const RatingDomainReport& r) {
  Json questions = Json::array();
  for (const auto& q : r.questions) {
    Json medians = Json::object();
    for (int k = 0; k < 3; ++k)
      medians[kCodes[k]] = std::isnan(q.medians[k]) ? Json(nullptr) : Json(q.medians[k]);
    questions.push_back({{"question", q.question},
                         {"label", instrument()[static_cast<std::size_t>(&q - r.questions.data())].label},
                         {"friedman", q.friedman ? friedman_json(*q.friedman) : Json(nullptr)},
                         {"posthoc", q.posthoc ? posthoc_json(*q.posthoc) : Json(nullptr)},
                         {"medians", medians}});
  }
  return {{"domain", std::string(to_string(r.domain))},
          {"sessions", r.sessions},
          {"excluded", r.excluded},
          {"questions", questions}};
}

Json analysis_report(const std::vector<ResponseRow>& rows, std::optional<Study> study) {
  auto has = [&rows](Study s) { return std::any_of(rows.begin(), rows.end(), [s](auto& r) { return r.study == s; }); };
  if (study ? !has(*study) : rows.empty())
    throw Error(ErrorCode::NoResponses, "no responses to analyse", study ? std::string(to_string(*study)) : "");
  Json out = Json::object();
  if ((!study || *study == Study::Pairwise) && has(Study::Pairwise)) {
    Json domains = Json::object();
    for (const auto& r : analyze_pairwise(rows)) domains[std::string(to_string(r.domain))] = to_json(r);
    out["pairwise"] = domains;
  }
  if ((!study || *study == Study::Rating) && has(Study::Rating)) {
    Json domains = Json::object();
    for (const auto& r : analyze_ratings(rows)) domains[std::string(to_string(r.domain))] = to_json(r);
    out["rating"] = domains;
  }
  out["notes"] = Json::array(
      {"Shapiro-Wilk normality checks are not implemented; Friedman and Nemenyi are applied unconditionally.",
       "Nemenyi p-values use the mean-rank statistic with the studentized range at infinite degrees of freedom."});
  return out;
}

std::string medians_csv(const std::vector<RatingDomainReport>& reports) {
  std::string out = "domain,question,c,d,p\n";
  for (const auto& r : reports)
    for (const auto& q : r.questions) {
      out += std::string(to_string(r.domain)) + "," + q.question;
      for (int k = 0; k < 3; ++k) out += "," + (std::isnan(q.medians[k]) ? std::string() : format_number(q.medians[k]));
      out += "\n";
    }
  return out;
}

}  // namespace recourse
