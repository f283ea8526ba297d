#include "recourse/service.hpp"

#include <chrono>
#include <regex>
#include <thread>

#include <httplib.h>

#include "recourse/error.hpp"

namespace recourse {

namespace {

ApiResponse ok(Json body, int status = 200) { return {status, std::move(body)}; }

const Json& require(const Json& body, const char* key) {
  if (!body.is_object() || !body.contains(key))
    throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'", key);
  return body.at(key);
}

std::string bearer(const std::string& header) {
  constexpr std::string_view prefix = "Bearer ";
  if (header.rfind(prefix, 0) != 0) return {};
  return header.substr(prefix.size());
}

MadWeights weights_for(const Json& body, const ModelBundle& bundle) {
  if (body.contains("mad_weights")) {
    const auto v = body["mad_weights"].get<std::vector<double>>();
    MadWeights w{Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()))};
    w.validate();
    if (w.size() != bundle.model.schema().size())
      throw Error(ErrorCode::SchemaMismatch, "one MAD weight per feature is required");
    return w;
  }
  return bundle.mad.value_or(MadWeights::uniform(bundle.model.schema().size()));
}

const Scenario* optional_scenario(const ScenarioCorpus& corpus, const Json& body, const FeatureSchema& schema) {
  if (!body.contains("scenario")) return nullptr;
  const auto& s = corpus.find(body["scenario"].get<std::string>());
  if (!(corpus.domain(s.domain).schema == schema))
    throw Error(ErrorCode::ArtifactSchemaMismatch, "model schema differs from the scenario's domain schema", s.id);
  return &s;
}

std::array<int, kQuestionCount> parse_answers(const Json& doc, const LikertScale& scale) {
  std::array<int, kQuestionCount> out{};
  for (std::size_t q = 0; q < kQuestionCount; ++q) {
    const auto& id = instrument()[q].id;
    const Json* cell = nullptr;
    if (doc.is_array() && q < doc.size()) cell = &doc[q];
    if (doc.is_object() && doc.contains(id)) cell = &doc[id];
    if (!cell) throw Error(ErrorCode::AnswerOutOfRange, "every question needs an answer", id + " missing");
    if (!cell->is_number_integer() || !scale.contains(cell->get<int>()))
      throw Error(ErrorCode::AnswerOutOfRange, "answer outside the Likert scale", id + "=" + cell->dump());
    out[q] = cell->get<int>();
  }
  if (doc.is_array() && doc.size() != kQuestionCount)
    throw Error(ErrorCode::AnswerOutOfRange, "exactly seven answers are expected", std::to_string(doc.size()));
  return out;
}

}  // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::MissingColumn:
    case ErrorCode::BadLevel:
    case ErrorCode::SchemaInvalid:
    case ErrorCode::SchemaMismatch:
      return 400;
    case ErrorCode::Unauthorized: return 401;
    case ErrorCode::UnknownSession: return 404;
    case ErrorCode::DuplicateResponse: return 409;
    case ErrorCode::IoError:
    case ErrorCode::CorpusInvalid:
      return 500;
    default: return 422;
  }
}

Json error_body(const Error& e) {
  return {{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"detail", e.detail()}};
}

Json task_view(const ScenarioCorpus& corpus, const Session& session, std::size_t index, const LikertScale& scale) {
  const auto& task = session.plan.at(index);
  const auto& sc = corpus.find(task.scenario);
  const auto& info = corpus.domain(sc.domain);
  Json out = {{"done", false},
              {"index", index},
              {"total", session.plan.size()},
              {"study", std::string(to_string(session.study))},
              {"scenario",
               {{"id", sc.id},
                {"title", sc.title},
                {"narrative", sc.narrative},
                {"profile_table", render_profile_table(info, sc.profile_header, sc.profile, sc.decision)},
                {"scale_notes", sc.scale_notes}}}};
  auto text = [&](ExplanationKind k) { return sc.explanations.at(k).body; };
  if (session.study == Study::Rating) {
    if (index == 0) out["role_framing"] = info.role_framing;
    out["explanation"] = {{"text", text(task.kinds[0])}};
    Json questions = Json::array();
    for (const auto& q : instrument()) questions.push_back({{"id", q.id}, {"text", q.text}});
    out["instrument"] = questions;
    out["scale"] = {{"points", scale.points}, {"anchors", scale.anchors}};
  } else {
    out["lead_in"] = kPairwiseLeadIn;
    out["prompt"] = kPairwisePrompt;
    out["explanations"] = Json::array({{{"side", "A"}, {"text", text(task.kinds[0])}},
                                       {{"side", "B"}, {"text", text(task.kinds[1])}}});
  }
  return out;
}

Service::Service(ResponseStore& store, const ScenarioCorpus& corpus) : store_(store), corpus_(corpus) {}
Service::~Service() { stop(); }

ApiResponse Service::dispatch(const ApiRequest& request) const {
  static const std::regex session_route(R"(/sessions/([^/]+)/(next|responses))");
  static const std::regex generate_route(R"(/generate/([a-z]+))");
  try {
    std::smatch m;
    const auto& method = request.method;
    const auto& path = request.path;
    auto body = [&request] { return request.body.empty() ? Json::object() : parse_json(request.body); };
    if (method == "POST" && path == "/sessions") return create_session(body());
    if (std::regex_match(path, m, session_route)) {
      if (m[2] == "next" && method == "GET") return next_task(m[1], request);
      if (m[2] == "responses" && method == "POST") return record(m[1], request);
    }
    if (method == "GET" && path == "/scenarios") return scenarios();
    if (method == "GET" && path == "/instrument") return instrument_view();
    if (method == "POST" && std::regex_match(path, m, generate_route)) return generate(m[1], body());
    if (method == "GET" && path == "/analysis") return analysis(request);
    return ok({{"code", "NotFound"}, {"message", "no such route"}, {"detail", method + " " + path}}, 404);
  } catch (const Error& e) {
    return ok(error_body(e), http_status(e.code()));
  } catch (const Json::exception& e) {
    return ok(error_body(Error(ErrorCode::ParseError, "malformed payload", e.what())), 400);
  }
}

ApiResponse Service::create_session(const Json& body) const {
  const auto participant = require(body, "participant").get<std::string>();
  std::optional<Study> study;
  std::optional<Domain> domain;
  std::optional<std::uint64_t> seed;
  if (body.contains("study") && !body["study"].is_null()) study = parse_study(body["study"].get<std::string>());
  if (body.contains("domain") && !body["domain"].is_null()) domain = parse_domain(body["domain"].get<std::string>());
  if (body.contains("seed") && !body["seed"].is_null()) seed = body["seed"].get<std::uint64_t>();
  Json demographics = body.value("demographics", Json(nullptr));
  const Session s = store_.create_session(participant, corpus_, study, domain, seed, std::move(demographics));
  Json out = session_to_json(s, true);
  // explanation kinds stay server-side
  out.erase("plan");
  Json scenarios = Json::array();
  for (const auto& t : s.plan) scenarios.push_back(t.scenario);
  out["scenarios"] = scenarios;
  return ok(out, 201);
}

ApiResponse Service::next_task(const std::string& id, const ApiRequest& request) const {
  store_.check_token(id, bearer(request.authorization));
  const auto index = store_.next_task_index(id);
  if (!index) return ok({{"done", true}});
  return ok(task_view(corpus_, store_.session(id), *index, store_.scale()));
}

ApiResponse Service::record(const std::string& id, const ApiRequest& request) const {
  store_.check_token(id, bearer(request.authorization));
  const Json body = request.body.empty() ? Json::object() : parse_json(request.body);
  const Session s = store_.session(id);
  const auto scenario = require(body, "scenario").get<std::string>();
  const double elapsed = body.value("elapsed_s", 0.0);
  const auto it = std::find_if(s.plan.begin(), s.plan.end(), [&](const Task& t) { return t.scenario == scenario; });
  if (it == s.plan.end())
    throw Error(ErrorCode::OutOfPlanTask, "scenario is not part of this session's plan", scenario);
  std::string stored;
  if (s.study == Study::Rating) {
    stored = store_.record_rating({id, scenario, it->kinds[0], parse_answers(require(body, "answers"), store_.scale()),
                                   elapsed});
  } else {
    const auto& choice = require(body, "choice");
    const std::string side = choice.is_string() ? choice.get<std::string>() : choice.dump();
    if (side != "A" && side != "B") throw Error(ErrorCode::InvalidChoice, "choice must be \"A\" or \"B\"", side);
    stored = store_.record_pairwise(
        {id, scenario, {it->kinds[0], it->kinds[1]}, side == "A" ? it->kinds[0] : it->kinds[1], elapsed});
  }
  const auto next = store_.next_task_index(id);
  return ok({{"stored", stored}, {"done", !next.has_value()}}, 201);
}

ApiResponse Service::scenarios() const { return ok(scenarios_to_json(corpus_)); }

ApiResponse Service::instrument_view() const {
  Json questions = Json::array();
  for (const auto& q : instrument())
    questions.push_back({{"id", q.id}, {"text", q.text}, {"topic", std::string(to_string(q.topic))}, {"label", q.label}});
  const auto& scale = store_.scale();
  return ok({{"questions", questions},
             {"scale", {{"points", scale.points}, {"anchors", scale.anchors}}},
             {"pairwise", {{"lead_in", kPairwiseLeadIn}, {"prompt", kPairwisePrompt}}}});
}

ApiResponse Service::generate(const std::string& engine, const Json& body) const {
  if (engine == "proto") {
    const FeatureSchema schema = body.contains("model") ? model_from_json(body["model"]).model.schema()
                                                        : schema_from_json(require(body, "schema"));
    const Dataset data = parse_dataset(require(body, "dataset_csv").get<std::string>(), schema);
    std::optional<double> bandwidth;
    if (body.contains("bandwidth") && !body["bandwidth"].is_null()) bandwidth = body["bandwidth"].get<double>();
    const auto protos = protodash_select(data, require(body, "class").get<int>(), body.value("m", std::size_t{1}),
                                         bandwidth);
    Json out = to_json(protos);
    out["top"] = instance_to_json(schema, top_prototype(protos, data));
    if (const auto* sc = optional_scenario(corpus_, body, schema))
      out["text"] = render_explanation(corpus_, *sc, protos, data).body;
    return ok(out);
  }
  if (engine != "cf" && engine != "directive")
    throw Error(ErrorCode::InvalidArgument, "unknown engine", engine);

  const ModelBundle bundle = model_from_json(require(body, "model"));
  const auto& schema = bundle.model.schema();
  const Instance x = instance_from_json(schema, require(body, "instance"));
  const MadWeights w = weights_for(body, bundle);
  const auto cf_config = counterfactual_config_from_json(body.value("cf_config", Json(nullptr)));
  const auto* sc = optional_scenario(corpus_, body, schema);

  if (engine == "cf") {
    const auto r = find_counterfactual(bundle.model, x, w, cf_config);
    Json out = to_json(schema, r);
    if (sc) out["text"] = render_explanation(corpus_, *sc, r).body;
    return ok(out);
  }
  const Json& actions_doc = require(body, "actions");
  const auto actions =
      action_catalog_from_json(schema, actions_doc.is_array() ? Json{{"actions", actions_doc}} : actions_doc);
  const auto mcts = mcts_config_from_json(body.value("config", Json(nullptr)));
  const auto plans = body.contains("counterfactual")
                         ? generate_directives(x, bundle.model, actions,
                                               instance_from_json(schema, body["counterfactual"]), mcts)
                         : generate_directives(x, bundle.model, actions, w, cf_config, mcts);
  Json list = Json::array();
  for (const auto& p : plans) {
    Json j = to_json(schema, p);
    if (sc) j["text"] = render_explanation(corpus_, *sc, p).body;
    list.push_back(j);
  }
  return ok({{"plans", list}});
}

ApiResponse Service::analysis(const ApiRequest& request) const {
  std::optional<Study> study;
  if (auto it = request.query.find("study"); it != request.query.end() && !it->second.empty())
    study = parse_study(it->second);
  return ok(analysis_report(store_.export_rows(study), study));
}

void Service::listen(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, {}, req.body, req.get_header_value("Authorization")};
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    const ApiResponse out = dispatch(r);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  };
  server_->Get(".*", handler);
  server_->Post(".*", handler);
  server_->Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    state_ = -1;
    throw Error(ErrorCode::IoError, "cannot bind", host + ":" + std::to_string(port));
  }
  port_ = bound;
  state_ = 1;
  server_->listen_after_bind();
}

bool Service::wait_until_ready() const {
  while (state_ == 0) std::this_thread::sleep_for(std::chrono::milliseconds(1));
  if (state_ < 0) return false;
  server_->wait_until_ready();
  return true;
}

void Service::stop() {
  if (server_) server_->stop();
}

}  // namespace recourse
