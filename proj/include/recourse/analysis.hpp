#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "recourse/response_store.hpp"
#include "recourse/stats.hpp"

namespace recourse {

/// Treatment columns are always ordered c, d, p.
struct PosthocPairs {
  Eigen::MatrixXd matrix;  // 3 x 3, symmetric, unit diagonal
  double c_vs_d = 1.0, c_vs_p = 1.0, d_vs_p = 1.0;
};

struct PairwiseDomainReport {
  Domain domain = Domain::Credit;
  std::array<std::int64_t, 3> counts{};  // pooled selections of c, d, p
  GofResult gof;
  Eigen::MatrixXd count_matrix;          // complete sessions x 3
  std::vector<std::string> sessions;     // row labels of count_matrix
  std::optional<FriedmanResult> friedman;  // absent with fewer than two complete sessions
  std::optional<PosthocPairs> posthoc;
  std::vector<std::string> excluded;     // sessions without all three answers
};

struct QuestionReport {
  std::string question;  // "Q1" .. "Q7"
  Eigen::MatrixXd scores;  // participants x 3
  std::optional<FriedmanResult> friedman;
  std::optional<PosthocPairs> posthoc;
  Eigen::VectorXd medians;  // per kind
};

struct RatingDomainReport {
  Domain domain = Domain::Credit;
  std::vector<std::string> sessions;
  std::vector<std::string> excluded;  // sessions lacking one of c, d, p
  std::vector<QuestionReport> questions;
};

/// Per-domain selection counts, chi-square goodness of fit on the pooled
/// counts, and Friedman with Nemenyi on the per-session count matrix.
/// Domains without pairwise rows are skipped. Throws NoResponses when there
/// are no pairwise rows at all.
std::vector<PairwiseDomainReport> analyze_pairwise(const std::vector<ResponseRow>& rows);

/// Per domain and per question: Friedman and Nemenyi over the sessions that
/// rated all three kinds, plus per-kind medians. Incomplete sessions are
/// excluded and listed. Throws NoResponses when there are no rating rows.
std::vector<RatingDomainReport> analyze_ratings(const std::vector<ResponseRow>& rows);

PosthocPairs posthoc_pairs(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// Report JSON. `study` restricts to one study; otherwise each study with
/// data is included and a study without rows is simply absent.
Json analysis_report(const std::vector<ResponseRow>& rows, std::optional<Study> study = std::nullopt);

Json to_json(const PairwiseDomainReport& r);
Json to_json(const RatingDomainReport& r);

/// domain,question,c,d,p per-question medians for plotting.
std::string medians_csv(const std::vector<RatingDomainReport>& reports);

}  // namespace recourse
