#include "mtsuite/replay.hpp"

#include <stdexcept>

#include "mtsuite/errors.hpp"
#include "mtsuite/matcher.hpp"
#include "mtsuite/store.hpp"

namespace mtsuite {

void RunOutputs::add(SystemOutput output) {
  auto& by_item = texts_[output.system];
  if (!by_item.emplace(output.item, std::move(output.text)).second) {
    throw std::invalid_argument("duplicate output for (" + output.system + ", " + output.item + ")");
  }
}

void RunOutputs::set_system(const std::string& system, std::span<const SystemOutput> outputs) {
  auto& by_item = texts_[system];
  by_item.clear();
  for (const auto& o : outputs) {
    if (!by_item.emplace(o.item, o.text).second) {
      throw std::invalid_argument("duplicate output for (" + system + ", " + o.item + ")");
    }
  }
}

const std::string* RunOutputs::text(const std::string& system, const std::string& item) const {
  const auto s = texts_.find(system);
  if (s == texts_.end()) return nullptr;
  const auto i = s->second.find(item);
  return i == s->second.end() ? nullptr : &i->second;
}

std::vector<std::string> RunOutputs::systems() const {
  std::vector<std::string> out;
  for (const auto& [system, _] : texts_) out.push_back(system);
  return out;
}

std::vector<SystemOutput> RunOutputs::outputs_of(const std::string& system) const {
  std::vector<SystemOutput> out;
  if (const auto s = texts_.find(system); s != texts_.end()) {
    for (const auto& [item, text] : s->second) out.push_back({system, item, text});
  }
  return out;
}

ReplayState initial_state(const Suite& suite, const RunOutputs& outputs, const NormalizationPolicy& policy) {
  ReplayState state;
  state.suite = suite;
  for (const auto& system : outputs.systems()) {
    const auto outs = outputs.outputs_of(system);
    state.judgments.emplace(system, evaluate_run(system, outs, suite, policy));
  }
  return state;
}

std::vector<VerdictTransition> apply_event(ReplayState& state, const RunOutputs& outputs, const AnnotationEvent& event,
                                           std::size_t position, const NormalizationPolicy& policy) {
  TestItem* item = state.suite.find(event.item);
  if (!item) throw ReplayError(position, "unknown item '" + event.item + "'");
  std::vector<VerdictTransition> transitions;

  if (is_decision(event.kind)) {
    if (!event.system) throw ReplayError(position, "decision without a system");
    const auto set = state.judgments.find(*event.system);
    if (set == state.judgments.end()) throw ReplayError(position, "unknown system '" + *event.system + "'");
    Judgment* j = set->second.find(event.item);
    if (!j) throw ReplayError(position, "no judgment for (" + *event.system + ", " + event.item + ")");
    const Judgment before = *j;
    j->verdict = event.kind == EventKind::decide_pass ? Verdict::pass : Verdict::fail;
    j->cause = Cause::human_decision;
    j->matched_rule.reset();
    j->decided_by = DecidedBy::human;
    transitions.push_back({*event.system, event.item, before, *j});
    return transitions;
  }

  switch (event.kind) {
    case EventKind::add_positive_pattern:
    case EventKind::add_negative_pattern: {
      if (auto err = check_pattern(event.payload)) throw ReplayError(position, "bad pattern: " + *err);
      Pattern p{event.payload, event.case_insensitive, event.annotator, event.timestamp};
      auto& list = event.kind == EventKind::add_positive_pattern ? item->rules.positive : item->rules.negative;
      list.push_back(std::move(p));
      break;
    }
    case EventKind::add_exact_translation: {
      std::string sentence = normalize(event.payload, policy);
      if (sentence.empty()) throw ReplayError(position, "empty exact translation");
      item->rules.exact_valid.push_back(std::move(sentence));
      break;
    }
    default:
      break;
  }

  const CompiledRules rules = compile_rules(*item, policy);
  for (auto& [system, set] : state.judgments) {
    Judgment* j = set.find(item->id);
    if (!j || j->decided_by == DecidedBy::human) continue;
    const std::string* text = outputs.text(system, item->id);
    if (!text) continue;  // missing output stays warning/empty-output
    Judgment updated = classify(SystemOutput{system, item->id, *text}, *item, rules, policy);
    if (updated != *j) {
      transitions.push_back({system, item->id, *j, updated});
      *j = std::move(updated);
    }
  }
  return transitions;
}

ReplayState replay(const Suite& base, const RunOutputs& outputs, std::span<const AnnotationEvent> log,
                   const NormalizationPolicy& policy) {
  ReplayState state = initial_state(base, outputs, policy);
  for (std::size_t i = 0; i < log.size(); ++i) apply_event(state, outputs, log[i], i, policy);
  return state;
}

std::string export_state(const ReplayState& state) { return export_suite(state.suite) + export_judgments(state.judgments); }

}  // namespace mtsuite
