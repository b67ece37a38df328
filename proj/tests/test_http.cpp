#include <catch2/catch_amalgamated.hpp>

#include <httplib.h>
#include <json.hpp>

#include <thread>

#include "mtsuite/http_service.hpp"
#include "mtsuite/triage.hpp"
#include "support.hpp"

using namespace mtsuite;
using namespace mtsuite::testing;
using nlohmann::json;

namespace {

struct Service {
  std::unique_ptr<TriageState> state;
  std::unique_ptr<TriageServer> server;
  std::thread thread;
  int port = 0;

  Service() {
    const auto w = triage_fixture();
    RunOutputs outs;
    for (const auto& o : w.outputs) outs.add(o);
    state = std::make_unique<TriageState>(load_taxonomy(), w.suite, outs, std::vector<AnnotationEvent>{});
    server = std::make_unique<TriageServer>(*state);
    port = server->bind_any_port("127.0.0.1");
    thread = std::thread([this] { server->listen_after_bind(); });
    server->wait_until_ready();
  }
  ~Service() {
    server->stop();
    thread.join();
  }

  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

}  // namespace

TEST_CASE("warnings endpoint", "[http]") {
  Service svc;
  auto cli = svc.client();
  const auto all = body_of(cli.Get("/warnings"));
  CHECK(all["total"] == 2);
  CHECK(all["warnings"][0]["item"] == "neg-nie");
  CHECK(all["warnings"][0]["rules"]["positive"][0]["expression"] == "nie");
  CHECK(body_of(cli.Get("/warnings?system=Online-G"))["total"] == 1);
  CHECK(body_of(cli.Get("/warnings?cause=conflict"))["total"] == 0);
  CHECK(body_of(cli.Get("/warnings?category=negation"))["total"] == 2);
  const auto page = body_of(cli.Get("/warnings?limit=1"));
  REQUIRE(page["next_cursor"].is_string());
  const auto next = body_of(cli.Get(("/warnings?limit=1&cursor=" + page["next_cursor"].get<std::string>()).c_str()));
  CHECK(next["warnings"][0]["system"] == "Online-G");
  CHECK(cli.Get("/warnings?cause=bogus")->status == 400);
}

TEST_CASE("decision endpoint", "[http]") {
  Service svc;
  auto cli = svc.client();
  const std::string ok = R"({"item":"neg-nie","system":"Online-B","verdict":"pass","annotator":"ann"})";
  auto r = cli.Post("/decisions", ok, "application/json");
  REQUIRE(r);
  CHECK(r->status == 201);
  const auto body = json::parse(r->body);
  CHECK(body["event"]["kind"] == "decide-pass");
  CHECK(body["judgment"]["decided_by"] == "human");
  CHECK(body["version"] == 2);
  CHECK(svc.state->log().size() == 1);

  CHECK(cli.Post("/decisions", ok, "application/json")->status == 409);
  CHECK(cli.Post("/decisions", R"({"item":"zzz","system":"Online-B","verdict":"pass","annotator":"a"})",
                 "application/json")->status == 404);
  CHECK(cli.Post("/decisions", R"({"item":"neg-nie","system":"Online-G","verdict":"maybe","annotator":"a"})",
                 "application/json")->status == 400);
  CHECK(cli.Post("/decisions", "not json", "application/json")->status == 400);
  CHECK(cli.Post("/decisions", R"({"item":"neg-nie"})", "application/json")->status == 400);
  CHECK(cli.Post("/decisions",
                 R"({"item":"neg-nie","system":"Online-G","verdict":"fail","annotator":"a","expected_version":1})",
                 "application/json")->status == 409);
  CHECK(svc.state->log().size() == 1);
}

TEST_CASE("rule endpoint with dry run", "[http]") {
  Service svc;
  auto cli = svc.client();
  const std::string rule = R"({"item":"neg-nie","kind":"positive","payload":"\\bnever\\b","annotator":"ann"})";
  auto dry = cli.Post("/rules?dry_run=1", rule, "application/json");
  REQUIRE(dry);
  CHECK(dry->status == 200);
  const auto preview = json::parse(dry->body);
  CHECK(preview["event"].is_null());
  REQUIRE(preview["transitions"].size() == 1);
  CHECK(preview["transitions"][0]["system"] == "Online-B");
  CHECK(preview["transitions"][0]["after"]["verdict"] == "pass");
  CHECK(svc.state->log().empty());

  auto commit = cli.Post("/rules", rule, "application/json");
  REQUIRE(commit);
  CHECK(commit->status == 201);
  CHECK(svc.state->log().size() == 1);
  CHECK(body_of(cli.Get("/warnings"))["total"] == 1);

  const auto item = body_of(cli.Get("/items/neg-nie"));
  CHECK(item["rules"]["positive"].size() == 2);
  CHECK(item["category"] == "negation");

  CHECK(cli.Post("/rules", R"({"item":"neg-nie","kind":"positive","payload":"([a"})", "application/json")->status == 400);
  CHECK(cli.Post("/rules", R"({"item":"neg-nie","kind":"sideways","payload":"x"})", "application/json")->status == 400);
  CHECK(cli.Post("/rules", R"({"item":"ghost","kind":"positive","payload":"x"})", "application/json")->status == 404);
  CHECK(svc.state->log().size() == 1);
}

TEST_CASE("read endpoints are side-effect free", "[http]") {
  Service svc;
  auto cli = svc.client();
  const auto v = svc.state->version();
  CHECK(cli.Get("/items/nothing")->status == 404);
  const auto stats = body_of(cli.Get("/stats"));
  CHECK(stats["total"]["warnings_before"] == 2);
  const auto report = body_of(cli.Get("/reports?mode=analysis2&grouping=category"));
  CHECK(report["table"]["rows"].size() > 0);
  auto md = cli.Get("/reports?mode=2&format=md");
  REQUIRE(md);
  CHECK(md->status == 200);
  CHECK(md->body.find("| Punctuation |") != std::string::npos);
  CHECK(cli.Get("/reports?mode=3")->status == 400);
  CHECK(cli.Get("/reports?grouping=colour")->status == 400);
  CHECK(svc.state->version() == v);
  CHECK(svc.state->log().empty());

  const auto re = cli.Post("/reevaluate", "", "application/json");
  REQUIRE(re);
  CHECK(re->status == 200);
  CHECK(svc.state->log().empty());
}
