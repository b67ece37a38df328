#include "mtsuite/matcher.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "mtsuite/errors.hpp"
#include "mtsuite/unicode.hpp"

namespace mtsuite {
namespace {

std::vector<Regex> compile_list(const TestItem& item, const std::vector<Pattern>& patterns) {
  std::vector<Regex> out;
  out.reserve(patterns.size());
  for (const auto& p : patterns) {
    try {
      out.push_back(Regex::compile(p.expression, p.case_insensitive));
    } catch (const PatternError& e) {
      throw ClassificationError(item.id, p.expression, e.what());
    }
  }
  return out;
}

// Index of the first pattern that matches, or -1.
long first_match(const TestItem& item, const std::vector<Regex>& patterns, std::u32string_view text) {
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    try {
      if (patterns[i].search(text)) return static_cast<long>(i);
    } catch (const MatchBudgetExceeded& e) {
      throw ClassificationError(item.id, patterns[i].expression(), e.what());
    }
  }
  return -1;
}

}  // namespace

CompiledRules compile_rules(const TestItem& item, const NormalizationPolicy& policy) {
  CompiledRules rules;
  rules.positive = compile_list(item, item.rules.positive);
  rules.negative = compile_list(item, item.rules.negative);
  rules.exact_valid.reserve(item.rules.exact_valid.size());
  for (const auto& s : item.rules.exact_valid) rules.exact_valid.push_back(normalize(s, policy));
  return rules;
}

Judgment classify(const SystemOutput& output, const TestItem& item, const NormalizationPolicy& policy) {
  return classify(output, item, compile_rules(item, policy), policy);
}

Judgment classify(const SystemOutput& output, const TestItem& item, const CompiledRules& rules,
                  const NormalizationPolicy& policy) {
  Judgment j;
  j.system = output.system;
  j.item = item.id;
  j.decided_by = DecidedBy::automatic;

  const std::string text = normalize(output.text, policy);
  if (text.empty()) {
    j.verdict = Verdict::warning;
    j.cause = Cause::empty_output;
    return j;
  }

  const auto exact = std::find(rules.exact_valid.begin(), rules.exact_valid.end(), text);
  if (exact != rules.exact_valid.end()) {
    j.verdict = Verdict::pass;
    j.cause = Cause::exact_match;
    j.matched_rule = MatchedRule{RuleKind::exact, static_cast<std::size_t>(exact - rules.exact_valid.begin()), *exact};
    return j;
  }

  const std::u32string decoded = text::decode_utf8(text);
  const long pos = first_match(item, rules.positive, decoded);
  const long neg = first_match(item, rules.negative, decoded);
  const auto rule = [&](RuleKind kind, long index) {
    const auto& list = kind == RuleKind::positive ? rules.positive : rules.negative;
    const auto i = static_cast<std::size_t>(index);
    return MatchedRule{kind, i, list[i].expression()};
  };

  if (pos >= 0 && neg < 0) {
    j.verdict = Verdict::pass;
    j.cause = Cause::positive_match;
    j.matched_rule = rule(RuleKind::positive, pos);
  } else if (neg >= 0 && pos < 0) {
    j.verdict = Verdict::fail;
    j.cause = Cause::negative_match;
    j.matched_rule = rule(RuleKind::negative, neg);
  } else if (pos >= 0) {
    j.verdict = Verdict::warning;
    j.cause = Cause::conflict;
    j.matched_rule = rule(RuleKind::positive, pos);
  } else {
    j.verdict = Verdict::warning;
    j.cause = Cause::no_match;
  }
  return j;
}

JudgmentSet evaluate_run(const std::string& system, std::span<const SystemOutput> outputs, const Suite& suite,
                         const NormalizationPolicy& policy) {
  std::unordered_map<std::string_view, const SystemOutput*> by_item;
  std::unordered_set<std::string_view> known;
  for (const auto& item : suite.items) known.insert(item.id);
  std::vector<std::string> orphans;
  for (const auto& out : outputs) {
    if (out.system != system) {
      throw std::invalid_argument("output for item '" + out.item + "' belongs to system '" + out.system +
                                  "', expected '" + system + "'");
    }
    if (!known.count(out.item)) {
      orphans.push_back(out.item);
      continue;
    }
    if (!by_item.emplace(out.item, &out).second) {
      throw std::invalid_argument("duplicate output for (" + system + ", " + out.item + ")");
    }
  }
  if (!orphans.empty()) throw OrphanOutputsError(std::move(orphans));

  JudgmentSet set(system);
  for (const auto& item : suite.items) {
    const auto it = by_item.find(item.id);
    if (it == by_item.end()) {
      Judgment j;
      j.system = system;
      j.item = item.id;
      j.verdict = Verdict::warning;
      j.cause = Cause::empty_output;
      set.add(std::move(j));
      continue;
    }
    set.add(classify(*it->second, item, compile_rules(item, policy), policy));
  }
  return set;
}

}  // namespace mtsuite
