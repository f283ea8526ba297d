#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <string>

#include "recourse/analysis.hpp"
#include "recourse/response_store.hpp"
#include "recourse/scenarios.hpp"

namespace httplib {
class Server;
}

namespace recourse {

struct ApiRequest {
  std::string method;  // "GET", "POST"
  std::string path;    // without query string
  std::map<std::string, std::string> query;
  std::string body;
  std::string authorization;  // raw Authorization header, may be empty
};

struct ApiResponse {
  int status = 200;
  Json body;
};

/// HTTP status used for a library error code.
int http_status(ErrorCode code) noexcept;
Json error_body(const Error& e);

/// JSON facade over the corpus, the engines, the response store and the
/// analysis. `dispatch` is the whole API and holds no logic of its own beyond
/// payload translation; `listen` serves it over HTTP.
class Service {
 public:
  Service(ResponseStore& store, const ScenarioCorpus& corpus);
  ~Service();

  ApiResponse dispatch(const ApiRequest& request) const;

  /// Binds and serves until `stop`; blocks, so run it on its own thread.
  /// Port 0 picks a free port, available from `port()` once
  /// `wait_until_ready` returns true. Throws IoError when binding fails.
  void listen(const std::string& host, int port);
  bool wait_until_ready() const;
  int port() const noexcept { return port_.load(); }
  void stop();

 private:
  ApiResponse create_session(const Json& body) const;
  ApiResponse next_task(const std::string& id, const ApiRequest& request) const;
  ApiResponse record(const std::string& id, const ApiRequest& request) const;
  ApiResponse scenarios() const;
  ApiResponse instrument_view() const;
  ApiResponse generate(const std::string& engine, const Json& body) const;
  ApiResponse analysis(const ApiRequest& request) const;

  ResponseStore& store_;
  const ScenarioCorpus& corpus_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<int> port_{0};
  std::atomic<int> state_{0};  // 0 starting, 1 bound, -1 failed
};

/// Task payload shown to a participant. Never contains the explanation kind.
Json task_view(const ScenarioCorpus& corpus, const Session& session, std::size_t index, const LikertScale& scale);

}  // namespace recourse
