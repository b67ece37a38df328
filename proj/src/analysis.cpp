#include "mtsuite/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mtsuite/errors.hpp"

namespace mtsuite {
namespace {

bool is_excluded(std::span<const std::string> excluded, const std::string& system) {
  return std::find(excluded.begin(), excluded.end(), system) != excluded.end();
}

// Exact comparison of a/b against c/d.
int compare_ratio(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  const auto lhs = static_cast<std::uint64_t>(a) * d;
  const auto rhs = static_cast<std::uint64_t>(c) * b;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

}  // namespace

std::string_view to_string(AnalysisMode m) { return m == AnalysisMode::analysis1 ? "analysis1" : "analysis2"; }

std::optional<AnalysisMode> parse_analysis_mode(std::string_view s) {
  if (s == "analysis1" || s == "1") return AnalysisMode::analysis1;
  if (s == "analysis2" || s == "2") return AnalysisMode::analysis2;
  return std::nullopt;
}

std::string_view to_string(Grouping g) {
  switch (g) {
    case Grouping::phenomenon: return "phenomenon";
    case Grouping::category: return "category";
    case Grouping::tense: return "tense";
    case Grouping::verb_type: return "verbtype";
  }
  return "category";
}

std::optional<Grouping> parse_grouping(std::string_view s) {
  if (s == "phenomenon") return Grouping::phenomenon;
  if (s == "category") return Grouping::category;
  if (s == "tense") return Grouping::tense;
  if (s == "verbtype" || s == "verb-type") return Grouping::verb_type;
  return std::nullopt;
}

std::optional<double> AccuracyCell::accuracy() const { return mtsuite::accuracy(correct, evaluated); }

std::vector<std::string> filter_analysis1(const EvaluationRun& run, std::span<const std::string> excluded) {
  const JudgmentSet* reference = nullptr;
  std::unordered_set<std::string> warned;
  for (const auto& [system, set] : run) {
    if (is_excluded(excluded, system)) continue;
    if (!reference) reference = &set;
    for (const auto& j : set.judgments()) {
      if (j.verdict == Verdict::warning) warned.insert(j.item);
    }
  }
  std::vector<std::string> kept;
  if (reference) {
    for (const auto& j : reference->judgments()) {
      if (!warned.count(j.item)) kept.push_back(j.item);
    }
  }
  if (kept.empty()) throw EmptyAnalysisError("analysis1 leaves no item without warnings");
  return kept;
}

std::vector<std::string> filter_analysis2(const JudgmentSet& judgments) {
  std::vector<std::string> kept;
  for (const auto& j : judgments.judgments()) {
    if (j.verdict != Verdict::warning) kept.push_back(j.item);
  }
  return kept;
}

std::optional<double> accuracy(std::size_t correct, std::size_t evaluated) {
  if (evaluated == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(evaluated);
}

long percent_tenths(std::size_t correct, std::size_t evaluated) {
  if (evaluated == 0) throw std::invalid_argument("percent_tenths: evaluated must be positive");
  const auto num = static_cast<std::uint64_t>(correct) * 2000 + evaluated;
  return static_cast<long>(num / (static_cast<std::uint64_t>(evaluated) * 2));
}

namespace {
std::string tenths_to_string(long tenths) {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}
}  // namespace

std::string format_percent(std::optional<double> fraction) {
  if (!fraction) return std::string(kUndefinedCell);
  // The epsilon keeps exact halves (0.0125 -> 1.3) from rounding down through
  // binary representation error.
  return tenths_to_string(static_cast<long>(std::floor(*fraction * 1000.0 + 0.5 + 1e-9)));
}

std::string format_percent(std::size_t correct, std::size_t evaluated) {
  if (evaluated == 0) return std::string(kUndefinedCell);
  return tenths_to_string(percent_tenths(correct, evaluated));
}

double non_weighted_average(std::span<const AccuracyCell> cells) {
  std::size_t correct = 0, evaluated = 0;
  for (const auto& c : cells) {
    correct += c.correct;
    evaluated += c.evaluated;
  }
  if (evaluated == 0) throw std::domain_error("non_weighted_average: no evaluated items");
  return static_cast<double>(correct) / static_cast<double>(evaluated);
}

double weighted_average(std::span<const AccuracyCell> cells) {
  if (cells.empty()) throw std::domain_error("weighted_average: no groups");
  double sum = 0.0;
  for (const auto& c : cells) {
    if (c.evaluated == 0) throw std::domain_error("weighted_average: group '" + c.key + "' has no evaluated items");
    sum += static_cast<double>(c.correct) / static_cast<double>(c.evaluated);
  }
  return sum / static_cast<double>(cells.size());
}

ZTest z_test(std::size_t correct1, std::size_t n1, std::size_t correct2, std::size_t n2,
             const SignificanceConfig& config) {
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("z_test: sample sizes must be positive");
  if (correct1 > n1 || correct2 > n2) throw std::invalid_argument("z_test: correct exceeds sample size");
  const double p1 = static_cast<double>(correct1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(correct2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(correct1 + correct2) / static_cast<double>(n1 + n2);
  const double variance = pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
  ZTest result;
  if (variance <= 0.0) return result;  // both samples all-correct or all-wrong
  result.z = (p1 - p2) / std::sqrt(variance);
  result.significant = std::fabs(result.z) > config.critical_z;
  return result;
}

std::set<std::string> top_cluster(std::span<const AccuracyCell> row, const SignificanceConfig& config) {
  std::vector<const AccuracyCell*> defined;
  for (const auto& c : row) {
    if (c.evaluated > 0) defined.push_back(&c);
  }
  std::set<std::string> cluster;
  if (defined.empty()) return cluster;

  const auto better = [](const AccuracyCell* a, const AccuracyCell* b) {
    return compare_ratio(a->correct, a->evaluated, b->correct, b->evaluated) > 0;
  };
  const AccuracyCell* top = *std::max_element(defined.begin(), defined.end(),
                                              [&](const auto* a, const auto* b) { return better(b, a); });
  std::vector<const AccuracyCell*> best;
  for (const auto* c : defined) {
    if (compare_ratio(c->correct, c->evaluated, top->correct, top->evaluated) == 0) best.push_back(c);
  }

  for (const auto* c : defined) {
    bool member = false;
    if (config.basis == ClusterBasis::versus_best) {
      for (const auto* b : best) {
        if (b == c || !z_test(b->correct, b->evaluated, c->correct, c->evaluated, config).significant) {
          member = true;
          break;
        }
      }
    } else {
      member = true;
      for (const auto* other : defined) {
        if (better(other, c) && z_test(other->correct, other->evaluated, c->correct, c->evaluated, config).significant) {
          member = false;
          break;
        }
      }
    }
    if (member) cluster.insert(c->system);
  }
  return cluster;
}

std::vector<AccuracyCell> phenomenon_cells(const EvaluationRun& run, const Suite& suite, const AnalysisConfig& config) {
  std::vector<std::string> phenomena;
  std::unordered_map<std::string, std::string> item_phenomenon;
  for (const auto& item : suite.items) {
    item_phenomenon.emplace(item.id, item.phenomenon);
    if (std::find(phenomena.begin(), phenomena.end(), item.phenomenon) == phenomena.end()) {
      phenomena.push_back(item.phenomenon);
    }
  }

  std::unordered_set<std::string> common;
  if (config.mode == AnalysisMode::analysis1) {
    for (auto& id : filter_analysis1(run, config.excluded_systems)) common.insert(std::move(id));
  }

  // (phenomenon, system) -> counts
  std::map<std::pair<std::string, std::string>, AccuracyCell> counts;
  std::vector<std::string> systems;
  for (const auto& [system, set] : run) {
    if (is_excluded(config.excluded_systems, system)) continue;
    systems.push_back(system);
    for (const auto& j : set.judgments()) {
      if (config.mode == AnalysisMode::analysis1 ? !common.count(j.item) : j.verdict == Verdict::warning) continue;
      const auto ph = item_phenomenon.find(j.item);
      if (ph == item_phenomenon.end()) throw std::invalid_argument("judgment for unknown item '" + j.item + "'");
      auto& cell = counts[{ph->second, system}];
      ++cell.evaluated;
      if (j.verdict == Verdict::pass) ++cell.correct;
    }
  }

  std::vector<AccuracyCell> cells;
  for (const auto& ph : phenomena) {
    for (const auto& system : systems) {
      AccuracyCell cell;
      if (const auto it = counts.find({ph, system}); it != counts.end()) cell = it->second;
      cell.system = system;
      cell.key = ph;
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<AccuracyCell> aggregate(std::span<const AccuracyCell> phenomenon_cells, const Taxonomy& taxonomy,
                                    Grouping grouping) {
  std::vector<std::string> key_order;
  switch (grouping) {
    case Grouping::phenomenon:
      for (const auto& p : taxonomy.phenomena()) key_order.push_back(p.id);
      break;
    case Grouping::category:
      for (const auto& c : taxonomy.categories()) key_order.push_back(c.id);
      break;
    case Grouping::tense:
      key_order = taxonomy.tense_groups();
      break;
    case Grouping::verb_type:
      key_order = taxonomy.verb_type_groups();
      break;
  }

  std::vector<std::string> systems;
  std::map<std::pair<std::string, std::string>, AccuracyCell> sums;
  for (const auto& cell : phenomenon_cells) {
    const Phenomenon* p = taxonomy.find_phenomenon(cell.key);
    if (!p) throw std::invalid_argument("aggregate: unknown phenomenon '" + cell.key + "'");
    std::optional<std::string> key;
    switch (grouping) {
      case Grouping::phenomenon: key = p->id; break;
      case Grouping::category: key = p->category; break;
      case Grouping::tense: key = p->tense_group; break;
      case Grouping::verb_type: key = p->verb_type_group; break;
    }
    if (std::find(systems.begin(), systems.end(), cell.system) == systems.end()) systems.push_back(cell.system);
    if (!key) continue;
    auto& sum = sums[{*key, cell.system}];
    sum.system = cell.system;
    sum.key = *key;
    sum.correct += cell.correct;
    sum.evaluated += cell.evaluated;
  }

  std::vector<AccuracyCell> out;
  for (const auto& key : key_order) {
    for (const auto& system : systems) {
      if (const auto it = sums.find({key, system}); it != sums.end()) out.push_back(it->second);
    }
  }
  return out;
}

WarningReport warning_stats(const EvaluationRun& before, const EvaluationRun& after,
                            std::span<const AnnotationEvent> log) {
  WarningReport report;
  report.total.system = "total";
  for (const auto& [system, set] : before) {
    SystemWarningStats s;
    s.system = system;
    s.pairs = set.size();
    const JudgmentSet* later = nullptr;
    if (const auto it = after.find(system); it != after.end()) later = &it->second;
    for (const auto& j : set.judgments()) {
      const Judgment* now = later ? later->find(j.item) : nullptr;
      const bool warned_before = j.verdict == Verdict::warning;
      const bool warned_after = now ? now->verdict == Verdict::warning : warned_before;
      if (warned_before) ++s.warnings_before;
      if (warned_after) ++s.warnings_after;
      if (warned_before && !warned_after) ++s.resolved;
    }
    for (const auto& e : log) {
      if (is_decision(e.kind) && e.system == system) ++s.human_decisions;
    }
    report.total.pairs += s.pairs;
    report.total.warnings_before += s.warnings_before;
    report.total.warnings_after += s.warnings_after;
    report.total.human_decisions += s.human_decisions;
    report.total.resolved += s.resolved;
    report.systems.push_back(std::move(s));
  }
  return report;
}

}  // namespace mtsuite
