#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "mtsuite/triage.hpp"

namespace httplib {
class Server;
}

namespace mtsuite {

// JSON views shared by the HTTP API and the CLI.
nlohmann::ordered_json to_json(const Judgment& j);
nlohmann::ordered_json to_json(const AnnotationEvent& e);
nlohmann::ordered_json to_json(const RuleSet& rules);
nlohmann::ordered_json to_json(const WarningReport& report);
nlohmann::ordered_json to_json(const Table& table);

// HTTP transport over a TriageState.
//
//   GET  /warnings    ?system=&category=&phenomenon=&cause=&cursor=&limit=
//   POST /decisions   {item, system, verdict, annotator, override?, expected_version?}
//   POST /rules       {item, kind, payload, annotator, case_insensitive?, expected_version?}  (?dry_run=1)
//   POST /reevaluate
//   GET  /reports     ?mode=&grouping=&format=&exclude=&min_n=
//   GET  /items/{id}
//   GET  /stats
//
// 200/201 on success, 400 invalid payload, 404 unknown entity, 409 for a
// decision on a non-warning judgment or a stale expected_version.
class TriageServer {
 public:
  explicit TriageServer(TriageState& state);
  ~TriageServer();
  TriageServer(const TriageServer&) = delete;
  TriageServer& operator=(const TriageServer&) = delete;

  // Binds to an ephemeral port and returns it; -1 on failure.
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  void install_routes();

  TriageState& state_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace mtsuite
