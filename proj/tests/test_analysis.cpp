#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mtsuite/analysis.hpp"
#include "mtsuite/errors.hpp"
#include "support.hpp"

using namespace mtsuite;
using Catch::Approx;

namespace {

Judgment judge(const std::string& sys, const std::string& item, Verdict v) {
  const Cause c = v == Verdict::pass ? Cause::positive_match : v == Verdict::fail ? Cause::negative_match : Cause::no_match;
  return Judgment{sys, item, v, c, std::nullopt, DecidedBy::automatic};
}

// Independent statement of the pooled two-proportion statistic.
double z_oracle(double c1, double n1, double c2, double n2) {
  const double p = (c1 + c2) / (n1 + n2);
  const double se = std::sqrt(p * (1 - p) * (1 / n1 + 1 / n2));
  return se == 0 ? 0 : (c1 / n1 - c2 / n2) / se;
}

}  // namespace

TEST_CASE("accuracy rendering", "[analysis]") {
  CHECK(format_percent(20, 20) == "100.0");
  CHECK(format_percent(13, 20) == "65.0");
  CHECK(format_percent(12, 20) == "60.0");
  CHECK(format_percent(0, 20) == "0.0");
  CHECK(format_percent(49, 51) == "96.1");
  CHECK(format_percent(0, 0) == kUndefinedCell);
  CHECK(format_percent(std::nullopt) == kUndefinedCell);
  // half-up on exact halves: 1/8 = 12.5%, 1/80 = 1.25%
  CHECK(format_percent(1, 80) == "1.3");
  CHECK(format_percent(std::optional<double>(1.0 / 80)) == "1.3");
  CHECK(format_percent(39, 48) == "81.3");
  CHECK(percent_tenths(49, 51) == 961);
  CHECK_FALSE(accuracy(1, 0));
}

TEST_CASE("49 of 51 is the only count printing as 96.1", "[analysis]") {
  int hits = 0;
  for (std::size_t c = 0; c <= 51; ++c) hits += format_percent(c, 51) == "96.1" ? 1 : 0;
  CHECK(hits == 1);
  CHECK(format_percent(48, 51) == "94.1");
  CHECK(format_percent(50, 51) == "98.0");
}

TEST_CASE("z statistic", "[analysis]") {
  CHECK(z_test(20, 20, 18, 20).z == Approx(1.45095).margin(1e-4));
  CHECK_FALSE(z_test(20, 20, 18, 20).significant);
  CHECK(z_test(20, 20, 13, 20).z == Approx(2.91288).margin(1e-4));
  CHECK(z_test(20, 20, 13, 20).significant);
  CHECK(z_test(5, 10, 5, 10).z == 0.0);
  CHECK(z_test(20, 20, 20, 20).z == 0.0);
  CHECK(z_test(0, 7, 0, 9).z == 0.0);
  CHECK_THROWS_AS(z_test(1, 0, 1, 2), std::invalid_argument);

  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n1 = 1 + rng() % 60, n2 = 1 + rng() % 60;
    const std::size_t c1 = rng() % (n1 + 1), c2 = rng() % (n2 + 1);
    const ZTest a = z_test(c1, n1, c2, n2), b = z_test(c2, n2, c1, n1);
    CHECK(a.z == Approx(z_oracle(c1, n1, c2, n2)).margin(1e-9));
    CHECK(a.z == Approx(-b.z).margin(1e-12));
    CHECK(a.significant == b.significant);
  }
}

TEST_CASE("top cluster on the negation row", "[analysis]") {
  const auto cells = mtsuite::testing::row_cells(mtsuite::testing::negation_row(), 20, "negation");
  const auto cluster = top_cluster(cells);
  CHECK(cluster.size() == 12);
  CHECK_FALSE(cluster.count("onl-F"));
  CHECK_FALSE(cluster.count("onl-G"));
  CHECK(cluster.count("LMU"));  // 90.0

  SignificanceConfig pairwise;
  pairwise.basis = ClusterBasis::pairwise;
  CHECK(top_cluster(cells, pairwise) == cluster);
}

TEST_CASE("cluster sanity", "[analysis][property]") {
  std::mt19937 rng(5);
  for (int i = 0; i < 500; ++i) {
    std::vector<AccuracyCell> row;
    const int systems = 1 + static_cast<int>(rng() % 8);
    for (int s = 0; s < systems; ++s) {
      const std::size_t n = 1 + rng() % 40;
      row.push_back({"s" + std::to_string(s), "k", rng() % (n + 1), n, false});
    }
    const auto best = std::max_element(row.begin(), row.end(), [](const auto& a, const auto& b) {
      return a.correct * b.evaluated < b.correct * a.evaluated;
    });
    SignificanceConfig loose, tight;
    tight.critical_z = 1.0;
    const auto wide = top_cluster(row, loose);
    const auto narrow = top_cluster(row, tight);
    CHECK(wide.count(best->system));
    CHECK(std::includes(wide.begin(), wide.end(), narrow.begin(), narrow.end()));
  }
  CHECK(top_cluster(std::vector<AccuracyCell>{{"only", "k", 3, 9, false}}) == std::set<std::string>{"only"});
}

TEST_CASE("averages", "[analysis]") {
  const std::vector<AccuracyCell> two = {{"S", "a", 90, 100, false}, {"S", "b", 1, 2, false}};
  CHECK(format_percent(non_weighted_average(two)) == "89.2");
  CHECK(format_percent(weighted_average(two)) == "70.0");
  const std::vector<AccuracyCell> half = {{"S", "a", 10, 10, false}, {"S", "b", 0, 10, false}};
  CHECK(non_weighted_average(half) == 0.5);
  CHECK(weighted_average(half) == 0.5);
  const std::vector<AccuracyCell> hole = {{"S", "a", 1, 1, false}, {"S", "b", 0, 0, false}};
  CHECK_THROWS_AS(weighted_average(hole), std::domain_error);
}

TEST_CASE("column averages reproduce printed values", "[analysis]") {
  const auto ucam = mtsuite::testing::column_cells("UCAM", mtsuite::testing::ucam_column());
  std::size_t n = 0;
  for (const auto& c : ucam) n += c.evaluated;
  CHECK(n == 4650);
  CHECK(format_percent(non_weighted_average(ucam)) == "86.0");
  CHECK(format_percent(81, 93) == format_percent(std::optional<double>(81.0 / 93)));
  for (const auto& c : ucam) CHECK(format_percent(c.correct, c.evaluated) == format_percent(c.accuracy()));

  const auto onlf = mtsuite::testing::column_cells("onl-F", mtsuite::testing::online_f_column());
  CHECK(format_percent(weighted_average(onlf)) == "53.0");
}

TEST_CASE("analysis filters", "[analysis]") {
  EvaluationRun run;
  run["A"] = JudgmentSet("A");
  run["B"] = JudgmentSet("B");
  run["U"] = JudgmentSet("U");
  for (const char* item : {"x", "y", "z"}) {
    run["A"].add(judge("A", item, Verdict::pass));
    run["B"].add(judge("B", item, std::string(item) == "x" ? Verdict::warning : Verdict::fail));
    run["U"].add(judge("U", item, std::string(item) == "z" ? Verdict::warning : Verdict::pass));
  }
  const std::vector<std::string> none;
  CHECK(filter_analysis1(run, none) == std::vector<std::string>{"y"});
  const std::vector<std::string> unsup = {"U"};
  CHECK(filter_analysis1(run, unsup) == std::vector<std::string>{"y", "z"});
  CHECK(filter_analysis2(run["A"]).size() == 3);
  CHECK(filter_analysis2(run["B"]) == std::vector<std::string>{"y", "z"});

  EvaluationRun all_warn;
  all_warn["A"] = JudgmentSet("A");
  all_warn["A"].add(judge("A", "x", Verdict::warning));
  CHECK_THROWS_AS(filter_analysis1(all_warn, none), EmptyAnalysisError);
}

TEST_CASE("tense counts add up", "[analysis]") {
  const Taxonomy& tax = load_taxonomy();
  const std::vector<std::pair<const char*, std::size_t>> rows = {
      {"Future I", 494}, {"Future I subjunctive II", 479}, {"Future II", 138}, {"Future II subjunctive II", 128},
      {"Perfect", 506},  {"Pluperfect", 478}, {"Pluperfect subjunctive II", 442}, {"Present", 482},
      {"Preterite", 513}, {"Preterite subjunctive II", 433}};
  // put each group's count on one phenomenon of that group
  std::vector<AccuracyCell> cells;
  for (const auto& [group, n] : rows) {
    for (const auto& p : tax.phenomena()) {
      if (p.tense_group == std::optional<std::string>(group)) {
        cells.push_back({"S", p.id, n / 2, n, false});
        break;
      }
    }
  }
  REQUIRE(cells.size() == rows.size());
  const auto by_tense = aggregate(cells, tax, Grouping::tense);
  std::size_t total = 0;
  for (std::size_t i = 0; i < by_tense.size(); ++i) {
    CHECK(by_tense[i].key == rows[i].first);
    CHECK(by_tense[i].evaluated == rows[i].second);
    total += by_tense[i].evaluated;
  }
  CHECK(total == 4093);
  const auto by_cat = aggregate(cells, tax, Grouping::category);
  REQUIRE(by_cat.size() == 1);
  CHECK(by_cat[0].evaluated == 4093);
}

TEST_CASE("aggregation preserves totals", "[analysis][property]") {
  const Taxonomy& tax = load_taxonomy();
  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    std::vector<AccuracyCell> cells;
    std::size_t c = 0, n = 0;
    for (const auto& p : tax.phenomena()) {
      if (rng() % 3) continue;
      const std::size_t e = rng() % 30, k = e ? rng() % (e + 1) : 0;
      cells.push_back({"S", p.id, k, e, false});
      c += k;
      n += e;
    }
    std::size_t ac = 0, an = 0;
    for (const auto& cell : aggregate(cells, tax, Grouping::category)) {
      ac += cell.correct;
      an += cell.evaluated;
    }
    CHECK(ac == c);
    CHECK(an == n);
    if (cells.size() == 1) CHECK(aggregate(cells, tax, Grouping::phenomenon) == cells);
  }
}

TEST_CASE("phenomenon cells follow the analysis mode", "[analysis]") {
  Suite suite;
  suite.items = {mtsuite::testing::make_item("x", "compound", {"a"}),
                 mtsuite::testing::make_item("y", "compound", {"a"})};
  EvaluationRun run;
  run["A"] = JudgmentSet("A");
  run["B"] = JudgmentSet("B");
  run["A"].add(judge("A", "x", Verdict::pass));
  run["A"].add(judge("A", "y", Verdict::fail));
  run["B"].add(judge("B", "x", Verdict::warning));
  run["B"].add(judge("B", "y", Verdict::pass));

  const auto a1 = phenomenon_cells(run, suite, {AnalysisMode::analysis1, {}});
  REQUIRE(a1.size() == 2);
  for (const auto& c : a1) CHECK(c.evaluated == 1);
  const auto a2 = phenomenon_cells(run, suite, {AnalysisMode::analysis2, {}});
  CHECK(a2[0].system == "A");
  CHECK(a2[0].evaluated == 2);
  CHECK(a2[0].correct == 1);
  CHECK(a2[1].evaluated == 1);
  const auto excl = phenomenon_cells(run, suite, {AnalysisMode::analysis1, {"B"}});
  REQUIRE(excl.size() == 1);
  CHECK(excl[0].evaluated == 2);
}
