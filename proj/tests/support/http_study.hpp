#pragma once

// Runs the study over real HTTP: starts the service on an ephemeral port,
// enrols rating participants in one domain, answers every task with
// simulated ratings and returns the analysis report fetched from the server.

#include <httplib.h>

#include <random>
#include <stdexcept>
#include <thread>

#include "recourse/service.hpp"
#include "support/fixtures.hpp"

namespace fixtures {

class RunningService {
 public:
  RunningService(recourse::ResponseStore& store, const recourse::ScenarioCorpus& corpus)
      : service_(store, corpus), thread_([this] { service_.listen("127.0.0.1", 0); }) {
    if (!service_.wait_until_ready()) throw std::runtime_error("service did not start");
  }
  ~RunningService() {
    service_.stop();
    thread_.join();
  }
  int port() const { return service_.port(); }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port());
    c.set_read_timeout(30);
    return c;
  }

 private:
  recourse::Service service_;
  std::thread thread_;
};

inline recourse::Json body_of(const httplib::Result& r) {
  if (!r) throw std::runtime_error("no HTTP response: " + httplib::to_string(r.error()));
  return recourse::Json::parse(r->body);
}

struct StudyRun {
  recourse::Json report;
  int requests = 0;
};

// The kind behind a rating task is never sent to the client, so the simulated
// participant recognises it by its text, as a person would by its content.
inline recourse::ExplanationKind kind_of_text(const recourse::ScenarioCorpus& corpus, const std::string& scenario,
                                              const std::string& text) {
  for (const auto& [kind, expl] : corpus.find(scenario).explanations)
    if (expl.body == text) return kind;
  throw std::runtime_error("unrecognised explanation text");
}

inline StudyRun run_rating_study(int participants, recourse::Domain domain, std::uint64_t seed) {
  using recourse::Json;
  recourse::ResponseStore store;
  const auto& corpus = recourse::bundled_scenarios();
  RunningService server(store, corpus);
  auto cli = server.client();
  std::mt19937_64 rng(seed);
  StudyRun run;
  for (int i = 0; i < participants; ++i) {
    const Json created = body_of(cli.Post("/sessions",
                                          Json{{"participant", "sim-" + std::to_string(i)},
                                               {"study", "rating"},
                                               {"domain", std::string(recourse::to_string(domain))},
                                               {"seed", seed * 1000 + static_cast<std::uint64_t>(i)}}
                                              .dump(),
                                          "application/json"));
    ++run.requests;
    const std::string id = created.at("id");
    const httplib::Headers auth{{"Authorization", "Bearer " + created.at("token").get<std::string>()}};
    while (true) {
      const Json task = body_of(cli.Get("/sessions/" + id + "/next", auth));
      ++run.requests;
      if (task.at("done").get<bool>()) break;
      const std::string scenario = task.at("scenario").at("id");
      const auto kind = kind_of_text(corpus, scenario, task.at("explanation").at("text"));
      const auto answers = simulated_ratings(rng, kind);
      const auto r = cli.Post("/sessions/" + id + "/responses", auth,
                              Json{{"scenario", scenario}, {"answers", answers}, {"elapsed_s", 30.0}}.dump(),
                              "application/json");
      ++run.requests;
      if (!r || r->status != 201) throw std::runtime_error("response rejected: " + (r ? r->body : std::string()));
    }
  }
  run.report = body_of(cli.Get("/analysis?study=rating"));
  ++run.requests;
  return run;
}

}  // namespace fixtures
