#include <catch2/catch_amalgamated.hpp>

#include "mtsuite/errors.hpp"
#include "mtsuite/replay.hpp"
#include "random_log.hpp"

using namespace mtsuite;
using namespace mtsuite::testing;

namespace {

RunOutputs outputs_of(const std::vector<SystemOutput>& outs) {
  RunOutputs r;
  for (const auto& o : outs) r.add(o);
  return r;
}

AnnotationEvent event(std::uint64_t seq, EventKind kind, std::string item, std::optional<std::string> system = {},
                      std::string payload = {}) {
  return AnnotationEvent{seq, "2026-01-01T00:00:00Z", "ann", kind, std::move(item), std::move(system),
                         std::move(payload), false, false};
}

}  // namespace

TEST_CASE("empty log is the identity", "[replay]") {
  const auto w = worked_examples();
  const RunOutputs outs = outputs_of(w.outputs);
  CHECK(replay(w.suite, outs, {}) == initial_state(w.suite, outs));
}

TEST_CASE("a new positive pattern resolves a warning", "[replay]") {
  Suite suite;
  suite.phenomena.push_back(negation_phenomenon());
  suite.items = {make_item("neg", "negation", {"nie"})};
  const RunOutputs outs = outputs_of({{"Online-B", "neg", "Tim never washes his clothes himself."},
                                      {"Online-G", "neg", "Tim is washing his clothes myself."}});
  const ReplayState before = initial_state(suite, outs);
  CHECK(before.judgments.at("Online-B").find("neg")->verdict == Verdict::warning);

  const std::vector<AnnotationEvent> log = {event(1, EventKind::add_positive_pattern, "neg", {}, R"(\bnever\b)")};
  const ReplayState after = replay(suite, outs, log);
  const Judgment* b = after.judgments.at("Online-B").find("neg");
  CHECK(b->verdict == Verdict::pass);
  CHECK(b->cause == Cause::positive_match);
  CHECK(after.judgments.at("Online-G").find("neg")->verdict == Verdict::warning);
  CHECK(after.suite.find("neg")->rules.positive.size() == 2);
}

TEST_CASE("human decisions survive rule changes", "[replay]") {
  Suite suite;
  suite.items = {make_item("m", "idiom", {"wrong track"})};
  const RunOutputs outs = outputs_of({{"UCAM", "m", "You're on the wooden path."}});
  const std::vector<AnnotationEvent> log = {
      event(1, EventKind::decide_pass, "m", std::string("UCAM")),
      event(2, EventKind::add_negative_pattern, "m", {}, "wood(en)? (track|path|way)"),
  };
  const ReplayState s = replay(suite, outs, log);
  const Judgment* j = s.judgments.at("UCAM").find("m");
  CHECK(j->verdict == Verdict::pass);
  CHECK(j->decided_by == DecidedBy::human);
  CHECK(j->cause == Cause::human_decision);

  // a later explicit decision supersedes the earlier one
  auto more = log;
  more.push_back(event(3, EventKind::decide_fail, "m", std::string("UCAM")));
  more.back().override_verdict = true;
  CHECK(replay(suite, outs, more).judgments.at("UCAM").find("m")->verdict == Verdict::fail);
}

TEST_CASE("replay halts on unknown targets", "[replay]") {
  const auto w = worked_examples();
  const RunOutputs outs = outputs_of(w.outputs);
  const std::vector<AnnotationEvent> log = {event(1, EventKind::add_exact_translation, "neg-nie", {}, "x"),
                                            event(2, EventKind::decide_pass, "nope", std::string("NTT"))};
  try {
    (void)replay(w.suite, outs, log);
    FAIL();
  } catch (const ReplayError& e) {
    CHECK(e.position() == 1);
  }
  const std::vector<AnnotationEvent> bad_sys = {event(1, EventKind::decide_pass, "neg-nie", std::string("Nobody"))};
  CHECK_THROWS_AS(replay(w.suite, outs, bad_sys), ReplayError);
  const std::vector<AnnotationEvent> bad_pat = {event(1, EventKind::add_positive_pattern, "neg-nie", {}, "([a")};
  CHECK_THROWS_AS(replay(w.suite, outs, bad_pat), ReplayError);
}

TEST_CASE("exact translations are normalized", "[replay]") {
  Suite suite;
  suite.items = {make_item("m", "idiom", {"zzz"})};
  const RunOutputs outs = outputs_of({{"RWTH", "m", "You're on the wrong track."}});
  const std::vector<AnnotationEvent> log = {
      event(1, EventKind::add_exact_translation, "m", {}, "  You're on the   wrong track.")};
  const ReplayState s = replay(suite, outs, log);
  CHECK(s.suite.find("m")->rules.exact_valid == std::vector<std::string>{"You're on the wrong track."});
  CHECK(s.judgments.at("RWTH").find("m")->cause == Cause::exact_match);
}

TEST_CASE("replay is deterministic", "[replay][property]") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const RandomWorld w = random_world(rng, 20, 3);
    const auto log = random_log(rng, w, rng() % 200);
    const std::string a = export_state(replay(w.suite, w.outputs, log));
    const std::string b = export_state(replay(w.suite, w.outputs, log));
    CHECK(a == b);
  }
}
