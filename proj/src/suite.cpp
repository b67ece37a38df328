#include "mtsuite/suite.hpp"

#include <array>
#include <set>
#include <stdexcept>

#include "mtsuite/pattern.hpp"

namespace mtsuite {
namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::string_view, N>& names, std::string_view s) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

constexpr std::array<std::string_view, 3> kVerdicts{"pass", "fail", "warning"};
constexpr std::array<std::string_view, 7> kCauses{"positive-match", "negative-match", "exact-match", "no-match",
                                                  "conflict",       "empty-output",   "human-decision"};
constexpr std::array<std::string_view, 2> kDecidedBy{"automatic", "human"};
constexpr std::array<std::string_view, 3> kRuleKinds{"positive", "negative", "exact"};

}  // namespace

std::string_view to_string(Verdict v) { return kVerdicts[static_cast<std::size_t>(v)]; }
std::string_view to_string(Cause c) { return kCauses[static_cast<std::size_t>(c)]; }
std::string_view to_string(DecidedBy d) { return kDecidedBy[static_cast<std::size_t>(d)]; }
std::string_view to_string(RuleKind k) { return kRuleKinds[static_cast<std::size_t>(k)]; }
std::optional<Verdict> parse_verdict(std::string_view s) { return lookup<Verdict>(kVerdicts, s); }
std::optional<Cause> parse_cause(std::string_view s) { return lookup<Cause>(kCauses, s); }
std::optional<DecidedBy> parse_decided_by(std::string_view s) { return lookup<DecidedBy>(kDecidedBy, s); }
std::optional<RuleKind> parse_rule_kind(std::string_view s) { return lookup<RuleKind>(kRuleKinds, s); }

std::string_view to_string(Finding::Kind k) {
  switch (k) {
    case Finding::Kind::duplicate_id: return "duplicate-id";
    case Finding::Kind::empty_source: return "empty-source";
    case Finding::Kind::empty_rule_set: return "empty-rule-set";
    case Finding::Kind::bad_pattern: return "bad-pattern";
    case Finding::Kind::unknown_phenomenon: return "unknown-phenomenon";
    case Finding::Kind::bad_declaration: return "bad-declaration";
  }
  return "unknown";
}

const TestItem* Suite::find(std::string_view id) const {
  for (const auto& item : items) {
    if (item.id == id) return &item;
  }
  return nullptr;
}

TestItem* Suite::find(std::string_view id) {
  return const_cast<TestItem*>(static_cast<const Suite*>(this)->find(id));
}

Taxonomy Suite::taxonomy(const Taxonomy& base) const {
  Taxonomy tax = base;
  for (const auto& p : phenomena) tax.add_phenomenon(p);
  return tax;
}

bool Judgment::consistent() const {
  switch (verdict) {
    case Verdict::pass:
      return cause == Cause::positive_match || cause == Cause::exact_match || cause == Cause::human_decision;
    case Verdict::fail:
      return cause == Cause::negative_match || cause == Cause::human_decision;
    case Verdict::warning:
      return cause == Cause::no_match || cause == Cause::conflict || cause == Cause::empty_output;
  }
  return false;
}

void JudgmentSet::add(Judgment j) {
  if (index_.count(j.item)) throw std::invalid_argument("duplicate judgment for item '" + j.item + "'");
  index_.emplace(j.item, judgments_.size());
  judgments_.push_back(std::move(j));
}

const Judgment* JudgmentSet::find(std::string_view item) const {
  const auto it = index_.find(std::string(item));
  return it == index_.end() ? nullptr : &judgments_[it->second];
}

Judgment* JudgmentSet::find(std::string_view item) {
  const auto it = index_.find(std::string(item));
  return it == index_.end() ? nullptr : &judgments_[it->second];
}

VerdictCounts JudgmentSet::counts() const {
  VerdictCounts c;
  for (const auto& j : judgments_) {
    switch (j.verdict) {
      case Verdict::pass: ++c.pass; break;
      case Verdict::fail: ++c.fail; break;
      case Verdict::warning: ++c.warning; break;
    }
  }
  return c;
}

ValidationReport validate_suite(const std::vector<TestItem>& items, const Taxonomy& taxonomy) {
  ValidationReport report;
  std::set<std::string> seen;
  const auto add = [&](Finding::Kind kind, const std::string& id, std::string detail) {
    report.findings.push_back({kind, id, std::move(detail)});
  };
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) add(Finding::Kind::duplicate_id, item.id, "id used more than once");
    if (item.source.empty()) add(Finding::Kind::empty_source, item.id, "source sentence is empty");
    if (item.rules.empty()) add(Finding::Kind::empty_rule_set, item.id, "no positive, negative or exact rules");
    if (!taxonomy.find_phenomenon(item.phenomenon)) {
      add(Finding::Kind::unknown_phenomenon, item.id, "unknown phenomenon '" + item.phenomenon + "'");
    }
    for (const auto* list : {&item.rules.positive, &item.rules.negative}) {
      for (const auto& pattern : *list) {
        if (auto err = check_pattern(pattern.expression)) {
          add(Finding::Kind::bad_pattern, item.id, "'" + pattern.expression + "' " + *err);
        }
      }
    }
  }
  return report;
}

ValidationReport validate_suite(const Suite& suite, const Taxonomy& base) {
  Taxonomy tax = base;
  ValidationReport declarations;
  for (const auto& p : suite.phenomena) {
    try {
      tax.add_phenomenon(p);
    } catch (const std::invalid_argument& e) {
      declarations.findings.push_back({Finding::Kind::bad_declaration, p.id, e.what()});
    }
  }
  ValidationReport report = validate_suite(suite.items, tax);
  report.findings.insert(report.findings.begin(), declarations.findings.begin(), declarations.findings.end());
  return report;
}

}  // namespace mtsuite
