#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "mtsuite/errors.hpp"
#include "mtsuite/store.hpp"
#include "support.hpp"

using namespace mtsuite;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static std::mt19937_64 rng(std::random_device{}());
    path = fs::temp_directory_path() / ("mtsuite-test-" + std::to_string(rng()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

const char* kThreeItems =
    R"jl({"format":"mtsuite-suite","version":1}
{"id":"p1","source":"Er rief: „Ich gewinne!“","phenomenon":"quotation-marks","positive":[", [\"“]"],"negative":[": [\"“]"]}
{"id":"m1","source":"Du bist auf dem Holzweg.","phenomenon":"idiom","negative":["wood(en)? (track|path|way)"],"exact":["You're on the  wrong track. "]}
{"id":"c1","source":"Der Haustürschlüssel","phenomenon":"compound","positive":[{"expression":"front door key","case_insensitive":true,"author":"ann"}]}
)jl";

Suite small_suite() { return parse_suite(kThreeItems, load_taxonomy()); }

}  // namespace

TEST_CASE("well-formed suite imports", "[store]") {
  const Suite s = small_suite();
  REQUIRE(s.items.size() == 3);
  CHECK(s.items[1].rules.exact_valid == std::vector<std::string>{"You're on the wrong track."});
  CHECK(s.items[2].rules.positive[0].case_insensitive);
  CHECK(s.items[2].rules.positive[0].author == "ann");
}

TEST_CASE("bad pattern is reported at its line", "[store]") {
  const std::string text = std::string(kThreeItems) +
                           R"({"id":"bad","source":"s","phenomenon":"compound","positive":["([a"]})" + "\n";
  const SuiteRead r = read_suite(text, load_taxonomy());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].line == 5);
  CHECK(r.suite.items.size() == 3);
  try {
    (void)parse_suite(text, load_taxonomy(), "suite.jsonl");
    FAIL();
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
    CHECK(std::string(e.what()).find("suite.jsonl:5") == 0);
  }
}

TEST_CASE("suite import problems are all located", "[store]") {
  const std::string text =
      "{\"format\":\"mtsuite-suite\",\"version\":2}\n"
      "{\"id\":\"a\",\"source\":\"s\",\"phenomenon\":\"compound\",\"positive\":[\"x\"]}\n"
      "{\"id\":\"a\",\"source\":\"s\",\"phenomenon\":\"compound\",\"positive\":[\"x\"]}\n"
      "not json\n"
      "{\"id\":\"b\",\"source\":\"s\",\"phenomenon\":\"compound\",\"positive\":[\"x\"],\"colour\":1}\n"
      "{\"id\":\"c\",\"source\":\"s\",\"phenomenon\":\"nothing-like-it\",\"positive\":[\"x\"]}\n"
      "{\"id\":\"d\",\"source\":\"s\",\"phenomenon\":\"compound\"}\n";
  const SuiteRead r = read_suite(text, load_taxonomy());
  std::vector<std::size_t> lines;
  for (const auto& d : r.diagnostics) lines.push_back(d.line);
  CHECK(lines == std::vector<std::size_t>{1, 3, 4, 5, 6, 7});
}

TEST_CASE("suite export round-trips", "[store]") {
  Suite s = small_suite();
  s.phenomena.push_back(mtsuite::testing::negation_phenomenon());
  s.items.push_back(mtsuite::testing::make_item("n1", "negation", {R"(\bnever\b)"}, {R"(^(?!.*\bnever\b))"}));
  s.items.back().note = "tab\tand \"quotes\"";
  const std::string text = export_suite(s);
  CHECK(parse_suite(text, load_taxonomy()) == s);
  CHECK(export_suite(parse_suite(text, load_taxonomy())) == text);
}

TEST_CASE("outputs import", "[store]") {
  Suite suite;
  std::string tsv;
  for (int i = 0; i < 5000; ++i) {
    const std::string id = "item-" + std::to_string(i);
    suite.items.push_back(mtsuite::testing::make_item(id, "compound", {"x"}));
    tsv += id + "\ttranslation " + std::to_string(i) + "\n";
  }
  CHECK(parse_outputs(tsv, "NTT", suite).outputs.size() == 5000);

  std::string partial;
  for (int i = 0; i < 5000; ++i) {
    if (i == 17 || i == 4321) continue;
    partial += "item-" + std::to_string(i) + "\tt\n";
  }
  const auto imp = parse_outputs(partial, "NTT", suite);
  CHECK(imp.outputs.size() == 4998);
  CHECK(imp.missing == std::vector<std::string>{"item-17", "item-4321"});

  CHECK_THROWS_AS(parse_outputs("item-1\ta\nitem-1\tb\n", "NTT", suite), ParseError);
  CHECK_THROWS_AS(parse_outputs("item-x\ta\n", "NTT", suite), ParseError);
  try {
    (void)parse_outputs("item-1\ta\nno tab here\n", "NTT", suite, "ntt.tsv");
    FAIL();
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("outputs round-trip with escapes", "[store]") {
  const Suite suite = small_suite();
  const std::vector<SystemOutput> outs = {{"S", "p1", "He said:\t\"x\"\nback\\slash\r"}, {"S", "c1", ""}, {"S", "m1", "ü „“"}};
  const auto back = parse_outputs(export_outputs(outs), "S", suite);
  CHECK(back.outputs == outs);
  CHECK(unescape_tsv_field(escape_tsv_field("a\\tb")) == "a\\tb");
}

TEST_CASE("annotation log", "[store]") {
  std::vector<AnnotationEvent> log = {
      {1, "2026-01-01T00:00:00Z", "ann", EventKind::decide_pass, "p1", std::string("NTT"), "", false, false},
      {2, "2026-01-01T00:00:01Z", "ann", EventKind::add_positive_pattern, "m1", std::nullopt, "wrong track", true, false},
      {5, "2026-01-01T00:00:02Z", "bob", EventKind::decide_fail, "m1", std::string("UCAM"), "note", false, true},
  };
  CHECK(parse_log(export_log(log)) == log);
  CHECK_THROWS_AS(parse_log(serialize_event(log[1]) + "\n" + serialize_event(log[0]) + "\n"), ParseError);
  AnnotationEvent no_sys = log[0];
  no_sys.system.reset();
  CHECK_THROWS_AS(parse_log(serialize_event(no_sys) + "\n"), ParseError);
  CHECK_THROWS_AS(parse_log("{\"seq\":1}\n"), ParseError);

  TempDir dir;
  EventLogWriter writer(dir.path / "log.jsonl", 0);
  writer.append(log[0]);
  const auto e = writer.append(log[2]);
  CHECK(e.seq == 2);
  const auto reread = parse_log(read_file(dir.path / "log.jsonl"));
  REQUIRE(reread.size() == 2);
  CHECK(reread[1].annotator == "bob");
}

TEST_CASE("workspace layout", "[store]") {
  TempDir dir;
  Workspace ws(dir.path / "suite");
  CHECK_FALSE(ws.initialized());
  ws.save_suite(small_suite());
  CHECK(ws.initialized());
  CHECK(ws.load_suite(load_taxonomy()) == small_suite());

  const Suite suite = small_suite();
  const std::vector<SystemOutput> outs = {{"NTT", "p1", "He shouted, “I win!\""}};
  ws.save_outputs("NTT", outs);
  ws.save_outputs("Online-F", outs);
  CHECK(ws.systems() == std::vector<std::string>{"NTT", "Online-F"});
  CHECK(ws.load_outputs("NTT", suite) == outs);
  CHECK(ws.load_log().empty());

  WorkspaceConfig cfg;
  cfg.analysis.mode = AnalysisMode::analysis2;
  cfg.analysis.excluded_systems = {"LMU-uns"};
  cfg.min_n = 10;
  ws.save_config(cfg);
  const auto back = ws.load_config();
  CHECK(back.analysis.mode == AnalysisMode::analysis2);
  CHECK(back.analysis.excluded_systems == cfg.analysis.excluded_systems);
  CHECK(back.min_n == 10);

  CHECK(valid_system_id("onl-A"));
  CHECK(valid_system_id("RWTH_uns.2"));
  CHECK_FALSE(valid_system_id("../x"));
  CHECK_FALSE(valid_system_id(".hidden"));
  CHECK_FALSE(valid_system_id(""));
}
