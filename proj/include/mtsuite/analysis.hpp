#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mtsuite/events.hpp"
#include "mtsuite/suite.hpp"
#include "mtsuite/taxonomy.hpp"

namespace mtsuite {

// analysis1: drop every item that any included system left as a warning,
// so all systems share one item set. analysis2: drop warnings per system.
enum class AnalysisMode { analysis1, analysis2 };

std::string_view to_string(AnalysisMode m);
// Accepts "analysis1"/"1" and "analysis2"/"2".
std::optional<AnalysisMode> parse_analysis_mode(std::string_view s);

struct AnalysisConfig {
  AnalysisMode mode = AnalysisMode::analysis1;
  std::vector<std::string> excluded_systems;
};

enum class ClusterBasis {
  versus_best,  // member iff not significantly worse than the best system
  pairwise,     // member iff no better system beats it significantly
};

struct SignificanceConfig {
  double critical_z = 1.959964;  // two-sided, 95% confidence
  ClusterBasis basis = ClusterBasis::versus_best;
};

enum class Grouping { phenomenon, category, tense, verb_type };

std::string_view to_string(Grouping g);
// Accepts phenomenon, category, tense, verbtype / verb-type.
std::optional<Grouping> parse_grouping(std::string_view s);

struct AccuracyCell {
  std::string system;
  std::string key;  // phenomenon id, category id, or group label
  std::size_t correct = 0;
  std::size_t evaluated = 0;
  bool in_top_cluster = false;

  std::optional<double> accuracy() const;
  bool operator==(const AccuracyCell&) const = default;
};

// Items (in suite order) with no warning from any non-excluded system.
// Throws EmptyAnalysisError when nothing survives.
std::vector<std::string> filter_analysis1(const EvaluationRun& run, std::span<const std::string> excluded);

// Items this system did not leave as a warning, in suite order.
std::vector<std::string> filter_analysis2(const JudgmentSet& judgments);

// correct / evaluated; nullopt when evaluated == 0.
std::optional<double> accuracy(std::size_t correct, std::size_t evaluated);

// Percentage in tenths, half-up, computed in integers: (49, 51) -> 961.
long percent_tenths(std::size_t correct, std::size_t evaluated);

// One-decimal percentage with half-up rounding; kUndefinedCell for an undefined value.
std::string format_percent(std::optional<double> fraction);
std::string format_percent(std::size_t correct, std::size_t evaluated);

inline constexpr std::string_view kUndefinedCell = "—";

double non_weighted_average(std::span<const AccuracyCell> cells);
// Mean of per-group accuracies. Throws std::domain_error if any cell is empty.
double weighted_average(std::span<const AccuracyCell> cells);

struct ZTest {
  double z = 0.0;
  bool significant = false;
};

// Pooled two-proportion z statistic for p1 - p2. Throws std::invalid_argument
// on an empty sample.
ZTest z_test(std::size_t correct1, std::size_t n1, std::size_t correct2, std::size_t n2,
             const SignificanceConfig& config = {});

// Systems in the first significance cluster of one row. Cells with no
// evaluated items never join.
std::set<std::string> top_cluster(std::span<const AccuracyCell> row, const SignificanceConfig& config = {});

// Per-(system, phenomenon) counts under the given analysis. Systems in
// config.excluded_systems are left out entirely.
std::vector<AccuracyCell> phenomenon_cells(const EvaluationRun& run, const Suite& suite, const AnalysisConfig& config);

// Sums phenomenon cells into the requested grouping. Phenomena without a tag
// for a tense/verb-type grouping are skipped.
std::vector<AccuracyCell> aggregate(std::span<const AccuracyCell> phenomenon_cells, const Taxonomy& taxonomy,
                                    Grouping grouping);

struct SystemWarningStats {
  std::string system;
  std::size_t pairs = 0;
  std::size_t warnings_before = 0;
  std::size_t warnings_after = 0;
  std::size_t human_decisions = 0;   // decide events in the log
  std::size_t resolved = 0;          // warning before, pass/fail after

  double rate_before() const { return pairs == 0 ? 0.0 : static_cast<double>(warnings_before) / pairs; }
  double rate_after() const { return pairs == 0 ? 0.0 : static_cast<double>(warnings_after) / pairs; }
};

struct WarningReport {
  std::vector<SystemWarningStats> systems;
  SystemWarningStats total;
};

// `before` is the automatic evaluation, `after` the state after replaying `log`.
WarningReport warning_stats(const EvaluationRun& before, const EvaluationRun& after,
                            std::span<const AnnotationEvent> log);

}  // namespace mtsuite
