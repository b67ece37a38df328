#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mtsuite/taxonomy.hpp"

namespace mtsuite {

struct Pattern {
  std::string expression;
  bool case_insensitive = false;
  std::string author;
  std::string created_at;  // ISO-8601 UTC, informational

  bool operator==(const Pattern&) const = default;
};

struct RuleSet {
  std::vector<Pattern> positive;
  std::vector<Pattern> negative;
  std::vector<std::string> exact_valid;  // normalized full-sentence translations

  bool empty() const { return positive.empty() && negative.empty() && exact_valid.empty(); }
  bool operator==(const RuleSet&) const = default;
};

struct TestItem {
  std::string id;
  std::string source;
  std::string phenomenon;
  RuleSet rules;
  std::string note;

  bool operator==(const TestItem&) const = default;
};

// A suite file: phenomena it declares on top of the bundled registry, and its items.
struct Suite {
  std::vector<Phenomenon> phenomena;
  std::vector<TestItem> items;

  const TestItem* find(std::string_view id) const;
  TestItem* find(std::string_view id);

  // Bundled registry extended with this suite's declarations. Throws
  // std::invalid_argument on a bad declaration.
  Taxonomy taxonomy(const Taxonomy& base) const;

  bool operator==(const Suite&) const = default;
};

struct SystemOutput {
  std::string system;
  std::string item;
  std::string text;

  bool operator==(const SystemOutput&) const = default;
};

enum class Verdict { pass, fail, warning };
enum class Cause { positive_match, negative_match, exact_match, no_match, conflict, empty_output, human_decision };
enum class DecidedBy { automatic, human };
enum class RuleKind { positive, negative, exact };

std::string_view to_string(Verdict v);
std::string_view to_string(Cause c);
std::string_view to_string(DecidedBy d);
std::string_view to_string(RuleKind k);
std::optional<Verdict> parse_verdict(std::string_view s);
std::optional<Cause> parse_cause(std::string_view s);
std::optional<DecidedBy> parse_decided_by(std::string_view s);
std::optional<RuleKind> parse_rule_kind(std::string_view s);

struct MatchedRule {
  RuleKind kind = RuleKind::positive;
  std::size_t index = 0;
  std::string expression;  // pattern text, or the exact sentence

  bool operator==(const MatchedRule&) const = default;
};

struct Judgment {
  std::string system;
  std::string item;
  Verdict verdict = Verdict::warning;
  Cause cause = Cause::no_match;
  std::optional<MatchedRule> matched_rule;
  DecidedBy decided_by = DecidedBy::automatic;

  // Verdict/cause pairing rules: pass needs positive/exact/human, fail needs
  // negative/human, warning needs no-match/conflict/empty-output.
  bool consistent() const;
  bool operator==(const Judgment&) const = default;
};

struct VerdictCounts {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t warning = 0;

  std::size_t total() const { return pass + fail + warning; }
  double warning_rate() const { return total() == 0 ? 0.0 : static_cast<double>(warning) / total(); }
};

// All judgments for one system, in suite item order.
class JudgmentSet {
 public:
  JudgmentSet() = default;
  explicit JudgmentSet(std::string system) : system_(std::move(system)) {}

  const std::string& system() const { return system_; }
  const std::vector<Judgment>& judgments() const { return judgments_; }
  std::size_t size() const { return judgments_.size(); }

  void add(Judgment j);
  const Judgment* find(std::string_view item) const;
  Judgment* find(std::string_view item);
  VerdictCounts counts() const;

  bool operator==(const JudgmentSet& o) const { return system_ == o.system_ && judgments_ == o.judgments_; }

 private:
  std::string system_;
  std::vector<Judgment> judgments_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Judgment sets keyed by system id.
using EvaluationRun = std::map<std::string, JudgmentSet>;

struct Finding {
  enum class Kind { duplicate_id, empty_source, empty_rule_set, bad_pattern, unknown_phenomenon, bad_declaration };
  Kind kind;
  std::string item_id;
  std::string detail;
};

std::string_view to_string(Finding::Kind k);

struct ValidationReport {
  std::vector<Finding> findings;
  bool ok() const { return findings.empty(); }
};

ValidationReport validate_suite(const std::vector<TestItem>& items, const Taxonomy& taxonomy);
// Checks the suite's phenomenon declarations against `base` as well.
ValidationReport validate_suite(const Suite& suite, const Taxonomy& base);

}  // namespace mtsuite
