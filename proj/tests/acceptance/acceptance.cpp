// One PASS/FAIL line per acceptance criterion; exits non-zero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/chi_square_series.hpp"
#include "oracles/counterfactual_grid.hpp"
#include "oracles/friedman_bruteforce.hpp"
#include "oracles/plan_enumeration.hpp"
#include "oracles/protodash_single.hpp"
#include "recourse/distributions.hpp"
#include "recourse/protodash.hpp"
#include "recourse/serialization.hpp"
#include "recourse/stats.hpp"
#include "support/fixtures.hpp"
#include "support/http_study.hpp"
#include "support/study_matrices.hpp"

using namespace recourse;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Outcome kendall_identity() {
  Outcome o;
  const auto t0 = Clock::now();
  struct Case {
    fixtures::CountMatrix m;
    int n;
    double chi2, w;
  };
  for (const auto& c : {Case{fixtures::credit_counts(), 40, 40.9, 0.51}, Case{fixtures::employee_counts(), 43, 31.4, 0.37}}) {
    const auto r = friedman(c.m.m);
    o.require(r.n == c.n && r.k == 3, "wrong shape");
    o.require(std::abs(r.chi2 - c.chi2) < 0.05, "chi2 " + fmt("%.4f", r.chi2) + " does not round to the target");
    o.require(std::abs(r.kendall_w - r.chi2 / (r.n * (r.k - 1))) < 1e-12, "W identity broken");
    o.require(std::abs(r.kendall_w - c.w) <= 0.005, "W " + fmt("%.4f", r.kendall_w) + " outside tolerance");
  }
  const double s = seconds_since(t0);
  o.require(s < 1.0, "took " + fmt("%.2f s", s));
  if (o.pass) o.detail = "W = 0.5112 (N=40) and 0.3651 (N=43)";
  return o;
}

Outcome friedman_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  long checked = 0;
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    int total = 1;
    for (int i = 0; i < 3 * n; ++i) total *= 3;
    Eigen::MatrixXd m(n, 3);
    for (int code = 0; code < total; ++code) {
      int c = code;
      std::vector<std::vector<double>> blocks(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j, c /= 3) {
          m(i, j) = 1 + c % 3;
          blocks[static_cast<std::size_t>(i)].push_back(m(i, j));
        }
      if (n < 2) {
        // a single block is degenerate; the error is the contract
        try {
          friedman(m);
          o.require(false, "N = 1 accepted");
        } catch (const Error& e) {
          o.require(e.code() == ErrorCode::DegenerateBlocks, "wrong error for N = 1");
        }
        continue;
      }
      const auto got = friedman(m);
      const auto want = oracle::friedman(blocks);
      worst = std::max({worst, std::abs(got.chi2 - want.chi2), std::abs(got.kendall_w - want.kendall_w)});
      ++checked;
    }
  }
  o.require(worst <= 1e-9, "max deviation " + fmt("%.3g", worst));
  const double s = seconds_since(t0);
  o.require(s < 120.0, "took " + fmt("%.1f s", s));
  if (o.pass) o.detail = std::to_string(checked) + " matrices, max deviation " + fmt("%.1e", worst);
  return o;
}

Outcome chi_square() {
  Outcome o;
  const std::vector<std::int64_t> uniform{10, 10, 10}, skewed{30, 0, 0};
  const auto u = chi_square_gof(uniform);
  o.require(u.stat == 0.0 && u.p == 1.0, "uniform counts not stat 0 / p 1");
  const auto s = chi_square_gof(skewed);
  o.require(s.stat == 60.0 && s.df == 2 && s.p < 1e-12, "(30,0,0) gives stat " + fmt("%g", s.stat));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> stat(0.0, 80.0);
  std::uniform_int_distribution<int> df(1, 40);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = stat(rng);
    const int d = df(rng);
    worst = std::max(worst, std::abs(chi_square_sf(x, d) - oracle::chi_square_sf_series(x, d)));
  }
  o.require(worst <= 1e-10, "p deviates by " + fmt("%.3g", worst));
  if (o.pass) o.detail = "100 (stat, df) pairs, max deviation " + fmt("%.1e", worst);
  return o;
}

Outcome counterfactual_minimality() {
  Outcome o;
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto m = fixtures::desk_model(1000 + seed);
    const auto r = find_counterfactual(m.f, m.x, m.w);
    const auto best = oracle::brute_force_counterfactual(m.f, m.x, m.w);
    o.require(m.f.label(r.c) != m.f.label(m.x), "seed " + std::to_string(seed) + " does not flip");
    o.require(r.distance == best.distance, "seed " + std::to_string(seed) + " distance " + fmt("%.17g", r.distance) +
                                               " vs " + fmt("%.17g", best.distance));
  }
  const double s = seconds_since(t0);
  o.require(s < 30.0, "took " + fmt("%.1f s", s));
  if (o.pass) o.detail = "100 models in " + fmt("%.2f s", s);
  return o;
}

Outcome mcts_convergence() {
  Outcome o;
  const auto t = fixtures::toy_benchmark();
  const auto best = oracle::cheapest_plans(t.f, t.actions, t.x, 4);
  o.require(best.cost == 2.0 && best.multisets.size() == 1, "toy benchmark lost its unique cheapest plan");
  int hits = 0;
  double slowest = 0.0;
  MctsConfig cfg;  // paper parameters, 10,000 rollouts per directive
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    cfg.seed = seed;
    const auto t0 = Clock::now();
    try {
      const auto plans = generate_directives(t.x, t.f, t.actions, t.counterfactual, cfg);
      std::vector<std::size_t> key;
      for (const auto& a : plans.front().actions)
        key.push_back(static_cast<std::size_t>(
            std::find(t.actions.begin(), t.actions.end(), a) - t.actions.begin()));
      std::sort(key.begin(), key.end());
      hits += plans.front().total_cost == best.cost && key == best.multisets.front();
    } catch (const Error&) {
    }
    slowest = std::max(slowest, seconds_since(t0));
  }
  o.require(hits >= 95, std::to_string(hits) + "/100 seeds");
  o.require(slowest < 5.0, "slowest seed " + fmt("%.2f s", slowest));

  SearchTree at_goal(t.f, t.actions, t.counterfactual, t.counterfactual);
  Rng rng(0);
  const double reward = at_goal.simulate(0, MctsConfig{}, rng);
  o.require(reward == (0.5 + 0.5) * 0.8, "terminal reward " + fmt("%g", reward));
  if (o.pass) o.detail = std::to_string(hits) + "/100 seeds, slowest " + fmt("%.2f s", slowest) + ", reward 0.8";
  return o;
}

Outcome mcts_bookkeeping() {
  Outcome o;
  const auto t = fixtures::toy_benchmark();
  std::size_t nodes = 0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    MctsConfig cfg;
    cfg.num_rollouts = 3000;
    cfg.seed = seed;
    const auto run = run_directive_search(t.x, t.f, t.actions, t.counterfactual, cfg);
    o.require(run.tree.node(0).n == run.rollouts, "root N differs from the rollout count");
    for (std::size_t i = 0; i < run.tree.size(); ++i) {
      const auto& n = run.tree.node(i);
      o.require(n.q >= 0.0 && n.q <= n.n * cfg.max_reward() + 1e-9, "Q out of range at node " + std::to_string(i));
    }
    nodes += run.tree.size();
    auto dump = [&] {
      Json j = Json::array();
      for (const auto& p : generate_directives(t.x, t.f, t.actions, t.counterfactual, cfg))
        j.push_back(to_json(t.f.schema(), p));
      return j.dump();
    };
    o.require(dump() == dump(), "seed " + std::to_string(seed) + " is not reproducible");
  }
  if (o.pass) o.detail = std::to_string(nodes) + " nodes checked, plans reproducible";
  return o;
}

Dataset random_dataset(std::mt19937_64& rng) {
  FeatureSchema schema({fixtures::numeric("x"), fixtures::numeric("y"), fixtures::ordinal("o", 5),
                        fixtures::categorical("c", 3)});
  const auto rows = std::uniform_int_distribution<std::size_t>(4, 50)(rng);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Dataset data{schema, {}, {}};
  for (std::size_t i = 0; i < rows; ++i) {
    data.rows.push_back(Instance{{u(rng), u(rng), double(rng() % 5), double(rng() % 3)}});
    data.labels.push_back(i < 2 ? int(i) : int(rng() % 2));
  }
  return data;
}

Outcome protodash_oracle() {
  Outcome o;
  std::mt19937_64 rng(123);
  for (int d = 0; d < 50; ++d) {
    const auto data = random_dataset(rng);
    const int label = d % 2;
    const auto best = oracle::best_single_prototype(data, label);
    const auto p = protodash_select(data, label, 1);
    const bool same = p.indices.front() == best.row || std::abs(p.objective_trace.front() - best.objective) <= 1e-12;
    o.require(same, "dataset " + std::to_string(d) + " picks row " + std::to_string(p.indices.front()) + ", oracle " +
                        std::to_string(best.row));
    const auto size = data.rows.size();
    std::size_t in_class = 0;
    for (int l : data.labels) in_class += l == label;
    for (std::size_t m = 1; m <= std::min<std::size_t>(10, in_class); ++m)
      for (double w : protodash_select(data, label, m).weights) o.require(w >= 0.0, "negative weight");
    (void)size;
  }
  if (o.pass) o.detail = "50 datasets, weights non-negative for m <= 10";
  return o;
}

Outcome corpus_golden() {
  Outcome o;
  const auto& corpus = bundled_scenarios();
  o.require(corpus.scenarios.size() == 8, "corpus has " + std::to_string(corpus.scenarios.size()) + " scenarios");
  int matched = 0;
  auto golden = [](const std::string& name) {
    std::ifstream in(std::string(RECOURSE_TEST_DATA) + "/golden/" + name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const auto& sc : corpus.scenarios) {
    const auto data = fixtures::golden_prototype_data(corpus, sc);
    const std::pair<std::string, std::string> texts[3] = {
        {"counterfactual", render_explanation(corpus, sc, fixtures::golden_counterfactual(corpus, sc)).body},
        {"directive", render_explanation(corpus, sc, fixtures::golden_plan(corpus, sc)).body},
        {"prototypical",
         render_explanation(corpus, sc, protodash_select(data, sc.target_label(), 1), data).body}};
    for (const auto& [kind, body] : texts) {
      const bool ok = body + "\n" == golden(sc.id + "." + kind + ".txt");
      o.require(ok, sc.id + " " + kind + " differs from its golden file");
      matched += ok;
    }
  }
  if (o.pass) o.detail = "8 scenarios, " + std::to_string(matched) + "/24 texts byte-identical";
  return o;
}

Outcome scripted_study() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto run = fixtures::run_rating_study(40, Domain::Credit, 2024);
  const Json& credit = run.report.at("rating").at("credit");
  o.require(credit.at("sessions").size() == 40, "not all 40 participants were analysed");
  const Json& q7 = credit.at("questions").at(6);
  o.require(q7.at("question") == "Q7", "question order");
  const double p = q7.at("friedman").at("p");
  const Json& post = q7.at("posthoc");
  const double cd = post.at("c vs d"), cp = post.at("c vs p"), dp = post.at("d vs p");
  o.require(p < 0.05, "Q7 Friedman p = " + fmt("%.3g", p));
  o.require(dp < cd && dp < cp, "d vs p is not the smallest post-hoc p");
  const double s = seconds_since(t0);
  o.require(s < 60.0, "took " + fmt("%.1f s", s));
  if (o.pass)
    o.detail = std::to_string(run.requests) + " HTTP requests, Q7 p = " + fmt("%.2e", p) + ", d vs p = " +
               fmt("%.2e", dp);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"kendall-w-identity", kendall_identity},
      {"friedman-oracle", friedman_oracle},
      {"chi-square-gof", chi_square},
      {"counterfactual-minimality", counterfactual_minimality},
      {"mcts-convergence", mcts_convergence},
      {"mcts-bookkeeping", mcts_bookkeeping},
      {"protodash-oracle", protodash_oracle},
      {"corpus-golden", corpus_golden},
      {"scripted-study", scripted_study},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
