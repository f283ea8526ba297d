// Command-line front end. Session, generation and analysis commands go through
// Service::dispatch so that they return exactly what the HTTP routes return.

#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "recourse/analysis.hpp"
#include "recourse/error.hpp"
#include "recourse/logistic.hpp"
#include "recourse/mad.hpp"
#include "recourse/serialization.hpp"
#include "recourse/service.hpp"
#include "recourse/synthetic.hpp"

using namespace recourse;

namespace {

Service* g_service = nullptr;

std::optional<Json> optional_json(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_json(path);
}

// Adds every non-actionable feature of the model's schema to frozen_features.
Json freeze_non_actionable(Json cf_config, const Json& model) {
  if (cf_config.is_null()) cf_config = Json::object();
  Json frozen = cf_config.value("frozen_features", Json::array());
  const ModelBundle bundle = model_from_json(model);
  for (const auto& spec : bundle.model.schema())
    if (!spec.actionable) frozen.push_back(spec.name);
  cf_config["frozen_features"] = frozen;
  return cf_config;
}

std::string store_path_or_default(const std::string& path) { return path.empty() ? "responses.jsonl" : path; }

// Prints the response body; failures go to stderr with exit code 1.
int emit(const ApiResponse& r) {
  if (r.status >= 400) {
    std::cerr << r.body.dump(2) << "\n";
    return 1;
  }
  std::cout << r.body.dump(2) << "\n";
  return 0;
}

ApiResponse call(ResponseStore& store, const std::string& method, const std::string& path, const Json& body = {},
                 std::map<std::string, std::string> query = {}) {
  Service service(store, bundled_scenarios());
  ApiRequest req{method, path, std::move(query), body.is_null() ? "" : body.dump(), ""};
  if (auto pos = path.find("/sessions/"); pos == 0) {
    const auto id = path.substr(10, path.find('/', 10) - 10);
    req.authorization = "Bearer " + store.session(id).token;
  }
  return service.dispatch(req);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual, prototypical and directive explanations with an actionability study harness"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Fit a logistic model on a labelled CSV");
  std::string schema_path, data_path, out_path;
  TrainConfig tc;
  train->add_option("--schema", schema_path, "Schema JSON")->required();
  train->add_option("--data", data_path, "CSV with a label column")->required();
  train->add_option("--out", out_path, "Model JSON to write")->required();
  train->add_option("--epochs", tc.epochs);
  train->add_option("--learning-rate", tc.learning_rate);
  train->add_option("--l2", tc.l2);
  train->add_option("--threshold", tc.threshold);
  train->add_option("--seed", tc.seed);

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset for a bundled domain");
  std::string domain_name = "credit";
  std::size_t rows = 200;
  std::uint64_t seed = 0;
  synth->add_option("--domain", domain_name)->check(CLI::IsMember({"credit", "employee"}));
  synth->add_option("--rows", rows);
  synth->add_option("--seed", seed);
  synth->add_option("--out", out_path, "CSV to write (stdout when absent)");

  // generation
  std::string model_path, instance_path, config_path, cf_config_path, scenario_id, actions_path, cf_path;
  auto* cf = app.add_subcommand("cf", "Nearest counterfactual for one instance");
  cf->add_option("--model", model_path)->required();
  cf->add_option("--instance", instance_path)->required();
  cf->add_option("--config", cf_config_path, "Counterfactual config JSON");
  cf->add_option("--scenario", scenario_id, "Also render the explanation for this scenario");
  bool actionable_only = false;
  cf->add_flag("--actionable-only", actionable_only, "Freeze every feature that is not actionable");

  auto* proto = app.add_subcommand("proto", "ProtoDash prototypes of one class");
  int class_label = 0;
  std::size_t m = 1;
  std::optional<double> bandwidth;
  proto->add_option("--schema", schema_path)->required();
  proto->add_option("--data", data_path)->required();
  proto->add_option("--class", class_label)->required();
  proto->add_option("--m", m);
  proto->add_option("--bandwidth", bandwidth);
  proto->add_option("--scenario", scenario_id);

  auto* directive = app.add_subcommand("directive", "Directive plans by Monte Carlo tree search");
  directive->add_option("--model", model_path)->required();
  directive->add_option("--instance", instance_path)->required();
  directive->add_option("--actions", actions_path, "Action catalog JSON")->required();
  directive->add_option("--counterfactual", cf_path, "Goal instance JSON; computed when absent");
  directive->add_option("--config", config_path, "Search config JSON");
  directive->add_option("--cf-config", cf_config_path);
  directive->add_option("--scenario", scenario_id);
  directive->add_flag("--actionable-only", actionable_only, "Freeze non-actionable features in the goal search");

  // service and study
  std::string store_path, host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the JSON API over HTTP");
  serve->add_option("--store", store_path, "Response log (default responses.jsonl)");
  serve->add_option("--host", host);
  serve->add_option("--port", port);

  auto* analyze = app.add_subcommand("analyze", "Friedman, Nemenyi and goodness-of-fit report");
  std::string export_path, study_name, medians_path;
  analyze->add_option("--export", export_path, "Response export CSV");
  analyze->add_option("--store", store_path, "Response log, instead of an export");
  analyze->add_option("--study", study_name)->check(CLI::IsMember({"pairwise", "rating"}));
  analyze->add_option("--medians", medians_path, "Write per-question medians CSV here");

  auto* session = app.add_subcommand("session", "Create and answer study sessions");
  session->require_subcommand(1);
  session->add_option("--store", store_path);
  auto* snew = session->add_subcommand("new", "Create a session");
  std::string participant, session_id, choice, answers;
  std::optional<std::uint64_t> session_seed;
  double elapsed = 0.0;
  snew->add_option("--participant", participant)->required();
  snew->add_option("--study", study_name)->check(CLI::IsMember({"pairwise", "rating"}));
  snew->add_option("--domain", domain_name)->check(CLI::IsMember({"credit", "employee"}));
  snew->add_option("--seed", session_seed);
  auto* snext = session->add_subcommand("next", "Show the next task");
  snext->add_option("--id", session_id)->required();
  auto* sresp = session->add_subcommand("respond", "Answer a task");
  sresp->add_option("--id", session_id)->required();
  sresp->add_option("--scenario", scenario_id)->required();
  sresp->add_option("--answers", answers, "Seven comma-separated ratings (rating study)");
  sresp->add_option("--choice", choice, "A or B (pairwise study)");
  sresp->add_option("--elapsed", elapsed);

  app.add_subcommand("scenarios", "Print the bundled scenario corpus");
  app.add_subcommand("instrument", "Print the questionnaire");
  auto* exp = app.add_subcommand("export", "Write the response export CSV");
  exp->add_option("--store", store_path);
  exp->add_option("--study", study_name)->check(CLI::IsMember({"pairwise", "rating"}));
  exp->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    std::optional<Study> study;
    if (!study_name.empty()) study = parse_study(study_name);

    if (*train) {
      const Dataset data = load_dataset(data_path, load_schema(schema_path));
      ModelBundle bundle{train_logistic(data, tc), mad_weights(data), tc};
      write_text_file_atomic(out_path, model_to_json(bundle).dump(2) + "\n");
      return 0;
    }
    if (*synth) {
      const auto csv = dataset_to_csv(domain_dataset(bundled_scenarios(), parse_domain(domain_name), rows, seed));
      if (out_path.empty()) std::cout << csv;
      else write_text_file_atomic(out_path, csv);
      return 0;
    }
    ResponseStore scratch;
    if (*cf) {
      Json body = {{"model", load_json(model_path)}, {"instance", load_json(instance_path)}};
      if (auto c = optional_json(cf_config_path)) body["cf_config"] = *c;
      if (actionable_only) body["cf_config"] = freeze_non_actionable(body.value("cf_config", Json()), body["model"]);
      if (!scenario_id.empty()) body["scenario"] = scenario_id;
      return emit(call(scratch, "POST", "/generate/cf", body));
    }
    if (*proto) {
      Json body = {{"schema", load_json(schema_path)}, {"dataset_csv", read_text_file(data_path)},
                   {"class", class_label}, {"m", m}};
      if (bandwidth) body["bandwidth"] = *bandwidth;
      if (!scenario_id.empty()) body["scenario"] = scenario_id;
      return emit(call(scratch, "POST", "/generate/proto", body));
    }
    if (*directive) {
      Json body = {{"model", load_json(model_path)}, {"instance", load_json(instance_path)},
                   {"actions", load_json(actions_path)}};
      if (auto c = optional_json(cf_path)) body["counterfactual"] = *c;
      if (auto c = optional_json(config_path)) body["config"] = *c;
      if (auto c = optional_json(cf_config_path)) body["cf_config"] = *c;
      if (actionable_only) body["cf_config"] = freeze_non_actionable(body.value("cf_config", Json()), body["model"]);
      if (!scenario_id.empty()) body["scenario"] = scenario_id;
      return emit(call(scratch, "POST", "/generate/directive", body));
    }
    if (app.got_subcommand("scenarios")) return emit(call(scratch, "GET", "/scenarios"));
    if (app.got_subcommand("instrument")) return emit(call(scratch, "GET", "/instrument"));

    if (*serve) {
      ResponseStore store(store_path_or_default(store_path));
      Service service(store, bundled_scenarios());
      g_service = &service;
      std::signal(SIGINT, [](int) { g_service->stop(); });
      std::signal(SIGTERM, [](int) { g_service->stop(); });
      std::thread announce([&service, &host] {
        if (service.wait_until_ready()) std::cerr << "listening on http://" << host << ":" << service.port() << "\n";
      });
      try {
        service.listen(host, port);
      } catch (...) {
        announce.join();
        throw;
      }
      announce.join();
      return 0;
    }
    if (*analyze) {
      std::vector<ResponseRow> rows;
      if (!export_path.empty()) rows = rows_from_csv(read_text_file(export_path));
      else rows = ResponseStore(store_path_or_default(store_path)).export_rows();
      if (study) {
        std::erase_if(rows, [&](const ResponseRow& r) { return r.study != *study; });
      }
      const Json report = analysis_report(rows, study);
      if (!medians_path.empty() && report.contains("rating"))
        write_text_file_atomic(medians_path, medians_csv(analyze_ratings(rows)));
      std::cout << report.dump(2) << "\n";
      return 0;
    }
    if (*exp) {
      const auto csv = rows_to_csv(ResponseStore(store_path_or_default(store_path)).export_rows(study));
      if (out_path.empty()) std::cout << csv;
      else write_text_file_atomic(out_path, csv);
      return 0;
    }
    if (*session) {
      ResponseStore store(store_path_or_default(store_path));
      if (*snew) {
        Json body = {{"participant", participant}};
        if (study) body["study"] = study_name;
        if (snew->count("--domain")) body["domain"] = domain_name;
        if (session_seed) body["seed"] = *session_seed;
        return emit(call(store, "POST", "/sessions", body));
      }
      if (*snext) return emit(call(store, "GET", "/sessions/" + session_id + "/next"));
      Json body = {{"scenario", scenario_id}, {"elapsed_s", elapsed}};
      if (!answers.empty()) {
        Json list = Json::array();
        for (const auto& a : CLI::detail::split(answers, ',')) list.push_back(std::stoi(a));
        body["answers"] = list;
      }
      if (!choice.empty()) body["choice"] = choice;
      return emit(call(store, "POST", "/sessions/" + session_id + "/responses", body));
    }
  } catch (const Error& e) {
    std::cerr << error_body(e).dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
