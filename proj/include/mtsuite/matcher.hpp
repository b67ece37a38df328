#pragma once

#include <span>
#include <string>
#include <vector>

#include "mtsuite/normalize.hpp"
#include "mtsuite/pattern.hpp"
#include "mtsuite/suite.hpp"

namespace mtsuite {

// An item's rules, compiled once and reused across systems.
struct CompiledRules {
  std::vector<Regex> positive;
  std::vector<Regex> negative;
  std::vector<std::string> exact_valid;  // normalized
};

// Throws ClassificationError naming the item and offending pattern.
CompiledRules compile_rules(const TestItem& item, const NormalizationPolicy& policy = {});

// Verdict order: empty output, exact translation, then patterns. Both a
// positive and a negative match is a conflict and goes to triage.
Judgment classify(const SystemOutput& output, const TestItem& item, const NormalizationPolicy& policy = {});
Judgment classify(const SystemOutput& output, const TestItem& item, const CompiledRules& rules,
                  const NormalizationPolicy& policy = {});

// One judgment per suite item, in suite order. Items without an output are
// warning/empty-output. Throws OrphanOutputsError for outputs whose item is
// not in the suite and std::invalid_argument for a repeated item or a
// system id that does not match.
JudgmentSet evaluate_run(const std::string& system, std::span<const SystemOutput> outputs, const Suite& suite,
                         const NormalizationPolicy& policy = {});

}  // namespace mtsuite
