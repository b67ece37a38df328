#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "mtsuite/analysis.hpp"
#include "mtsuite/events.hpp"
#include "mtsuite/replay.hpp"
#include "mtsuite/report.hpp"
#include "mtsuite/store.hpp"
#include "mtsuite/suite.hpp"
#include "mtsuite/taxonomy.hpp"

namespace mtsuite {

struct WarningFilter {
  std::optional<std::string> system;
  std::optional<std::string> category;
  std::optional<std::string> phenomenon;
  std::optional<Cause> cause;
};

struct WarningEntry {
  std::string item;
  std::string system;
  Cause cause = Cause::no_match;
  std::string source;
  std::string output;
  std::string phenomenon;
  std::string category;
  RuleSet rules;
};

struct WarningPage {
  std::vector<WarningEntry> warnings;
  std::size_t total = 0;  // matching warnings across all pages
  std::optional<std::string> next_cursor;
  std::uint64_t version = 0;
};

struct DecisionResult {
  AnnotationEvent event;
  Judgment judgment;
  std::uint64_t version = 0;
};

struct RuleResult {
  std::optional<AnnotationEvent> event;  // absent for a dry run
  std::vector<VerdictTransition> transitions;
  std::uint64_t version = 0;
};

struct ItemDetail {
  TestItem item;
  std::string category;
  std::vector<Judgment> judgments;  // one per system, system order
  std::vector<std::optional<std::string>> outputs;
};

// Live triage state for one suite: base suite and outputs, the annotation
// log, and the state obtained by replaying it. Every mutation appends
// exactly one event (to the log file when one is configured) and bumps the
// version. Safe for concurrent use; writes are serialized.
class TriageState {
 public:
  using Clock = std::function<std::string()>;

  TriageState(Taxonomy taxonomy, Suite base, RunOutputs outputs, std::vector<AnnotationEvent> log,
              WorkspaceConfig config = {}, std::optional<std::filesystem::path> log_path = std::nullopt,
              Clock clock = utc_timestamp_now);

  // Loads suite, outputs, log and config from a working directory.
  static std::unique_ptr<TriageState> open(const Workspace& workspace, const Taxonomy& taxonomy);

  // Stable order (item id, system id). Cursors are opaque.
  WarningPage list_warnings(const WarningFilter& filter, const std::optional<std::string>& cursor = std::nullopt,
                            std::size_t limit = 100) const;

  // Throws NotFoundError, ConflictError (non-warning target without override,
  // or stale expected_version) or InvalidRequestError.
  DecisionResult submit_decision(const std::string& item, const std::string& system, Verdict verdict,
                                 const std::string& annotator, bool override_verdict = false,
                                 std::optional<std::uint64_t> expected_version = std::nullopt);

  // Validates the rule before anything is appended. A dry run reports the
  // transitions without touching the log or the state.
  RuleResult add_rule(const std::string& item, RuleKind kind, const std::string& payload, const std::string& annotator,
                      bool case_insensitive = false, bool dry_run = false,
                      std::optional<std::uint64_t> expected_version = std::nullopt);

  // Reloads outputs from the working directory (when there is one) and
  // replays the log from scratch. Returns the new version.
  std::uint64_t reevaluate();

  Table report(AnalysisMode mode, Grouping grouping, const std::optional<std::vector<std::string>>& exclude = std::nullopt,
               std::optional<std::size_t> min_n = std::nullopt) const;
  ItemDetail item(const std::string& id) const;
  WarningReport stats() const;

  std::uint64_t version() const;
  ReplayState snapshot() const;
  std::vector<AnnotationEvent> log() const;
  const Taxonomy& taxonomy() const { return taxonomy_; }

  void set_workspace(std::optional<Workspace> workspace) { workspace_ = std::move(workspace); }

 private:
  void check_version(std::optional<std::uint64_t> expected) const;
  AnnotationEvent record(AnnotationEvent e);

  mutable std::shared_mutex mutex_;
  Taxonomy taxonomy_;  // bundled plus suite declarations
  Suite base_;
  RunOutputs outputs_;
  std::vector<AnnotationEvent> log_;
  WorkspaceConfig config_;
  std::optional<std::filesystem::path> log_path_;
  Clock clock_;
  std::optional<Workspace> workspace_;

  EvaluationRun automatic_;  // before any triage
  ReplayState state_;
  std::uint64_t version_ = 1;
};

}  // namespace mtsuite
