#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mtsuite/events.hpp"
#include "mtsuite/normalize.hpp"
#include "mtsuite/suite.hpp"

namespace mtsuite {

// System outputs keyed by system id, then item id.
class RunOutputs {
 public:
  void add(SystemOutput output);  // throws std::invalid_argument on a repeated pair
  void set_system(const std::string& system, std::span<const SystemOutput> outputs);

  const std::string* text(const std::string& system, const std::string& item) const;
  std::vector<std::string> systems() const;
  std::vector<SystemOutput> outputs_of(const std::string& system) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> texts_;
};

struct ReplayState {
  Suite suite;
  EvaluationRun judgments;

  bool operator==(const ReplayState&) const = default;
};

struct VerdictTransition {
  std::string system;
  std::string item;
  Judgment before;
  Judgment after;
};

// Automatic evaluation of every system in `outputs` against `suite`.
ReplayState initial_state(const Suite& suite, const RunOutputs& outputs, const NormalizationPolicy& policy = {});

// Applies one event in place. Rule additions re-classify the item for every
// system except pairs already decided by a human; decisions overwrite the
// verdict with decided_by=human. Returns the judgments that changed.
// Throws ReplayError(position) on an unknown item/system or a bad pattern.
std::vector<VerdictTransition> apply_event(ReplayState& state, const RunOutputs& outputs, const AnnotationEvent& event,
                                           std::size_t position, const NormalizationPolicy& policy = {});

// fold(apply_event, initial_state(base), log).
ReplayState replay(const Suite& base, const RunOutputs& outputs, std::span<const AnnotationEvent> log,
                   const NormalizationPolicy& policy = {});

// Canonical text of a state (suite records followed by judgment records).
std::string export_state(const ReplayState& state);

}  // namespace mtsuite
