#include "mtsuite/triage.hpp"

#include <algorithm>
#include <mutex>
#include <tuple>

#include "mtsuite/errors.hpp"
#include "mtsuite/normalize.hpp"
#include "mtsuite/pattern.hpp"

namespace mtsuite {
namespace {

constexpr char kCursorSeparator = '\x1f';

std::string to_hex(std::string_view s) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  for (const unsigned char c : s) {
    out += digits[c >> 4];
    out += digits[c & 0xf];
  }
  return out;
}

std::optional<std::string> from_hex(std::string_view s) {
  if (s.size() % 2 != 0) return std::nullopt;
  const auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    const int hi = nibble(s[i]), lo = nibble(s[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out += static_cast<char>(hi * 16 + lo);
  }
  return out;
}

}  // namespace

TriageState::TriageState(Taxonomy taxonomy, Suite base, RunOutputs outputs, std::vector<AnnotationEvent> log,
                         WorkspaceConfig config, std::optional<std::filesystem::path> log_path, Clock clock)
    : taxonomy_(base.taxonomy(taxonomy)),
      base_(std::move(base)),
      outputs_(std::move(outputs)),
      log_(std::move(log)),
      config_(std::move(config)),
      log_path_(std::move(log_path)),
      clock_(std::move(clock)) {
  const ReplayState initial = initial_state(base_, outputs_);
  automatic_ = initial.judgments;
  state_ = replay(base_, outputs_, log_);
}

std::unique_ptr<TriageState> TriageState::open(const Workspace& workspace, const Taxonomy& taxonomy) {
  Suite suite = workspace.load_suite(taxonomy);
  RunOutputs outputs;
  for (const auto& system : workspace.systems()) {
    outputs.set_system(system, workspace.load_outputs(system, suite));
  }
  auto state = std::make_unique<TriageState>(taxonomy, std::move(suite), std::move(outputs), workspace.load_log(),
                                             workspace.load_config(), workspace.log_path());
  state->set_workspace(workspace);
  return state;
}

WarningPage TriageState::list_warnings(const WarningFilter& filter, const std::optional<std::string>& cursor,
                                       std::size_t limit) const {
  std::shared_lock lock(mutex_);
  std::optional<std::pair<std::string, std::string>> after;
  if (cursor && !cursor->empty()) {
    const auto decoded = from_hex(*cursor);
    const auto sep = decoded ? decoded->find(kCursorSeparator) : std::string::npos;
    if (sep == std::string::npos) throw InvalidRequestError("malformed cursor");
    after = std::make_pair(decoded->substr(0, sep), decoded->substr(sep + 1));
  }

  std::vector<WarningEntry> matching;
  for (const auto& [system, set] : state_.judgments) {
    if (filter.system && *filter.system != system) continue;
    for (const auto& j : set.judgments()) {
      if (j.verdict != Verdict::warning) continue;
      if (filter.cause && *filter.cause != j.cause) continue;
      const TestItem* item = state_.suite.find(j.item);
      if (!item) continue;
      const Phenomenon* ph = taxonomy_.find_phenomenon(item->phenomenon);
      const std::string category = ph ? ph->category : std::string();
      if (filter.phenomenon && *filter.phenomenon != item->phenomenon) continue;
      if (filter.category && *filter.category != category) continue;
      const std::string* text = outputs_.text(system, j.item);
      matching.push_back(
          {j.item, system, j.cause, item->source, text ? *text : std::string(), item->phenomenon, category, item->rules});
    }
  }
  std::sort(matching.begin(), matching.end(), [](const WarningEntry& a, const WarningEntry& b) {
    return std::tie(a.item, a.system) < std::tie(b.item, b.system);
  });

  WarningPage page;
  page.total = matching.size();
  page.version = version_;
  auto it = matching.begin();
  if (after) {
    it = std::upper_bound(matching.begin(), matching.end(), *after, [](const auto& key, const WarningEntry& e) {
      return std::tie(key.first, key.second) < std::tie(e.item, e.system);
    });
  }
  const std::size_t remaining = static_cast<std::size_t>(matching.end() - it);
  const std::size_t take = std::min(limit, remaining);
  page.warnings.assign(std::make_move_iterator(it), std::make_move_iterator(it + static_cast<std::ptrdiff_t>(take)));
  if (take < remaining && !page.warnings.empty()) {
    const auto& last = page.warnings.back();
    page.next_cursor = to_hex(last.item + kCursorSeparator + last.system);
  }
  return page;
}

void TriageState::check_version(std::optional<std::uint64_t> expected) const {
  if (expected && *expected != version_) {
    throw ConflictError("stale state version " + std::to_string(*expected) + " (current " + std::to_string(version_) + ")");
  }
}

AnnotationEvent TriageState::record(AnnotationEvent e) {
  const std::uint64_t last = log_.empty() ? 0 : log_.back().seq;
  if (log_path_) {
    EventLogWriter writer(*log_path_, last);
    e = writer.append(std::move(e));
  } else {
    e.seq = last + 1;
  }
  log_.push_back(e);
  return e;
}

DecisionResult TriageState::submit_decision(const std::string& item, const std::string& system, Verdict verdict,
                                            const std::string& annotator, bool override_verdict,
                                            std::optional<std::uint64_t> expected_version) {
  std::unique_lock lock(mutex_);
  check_version(expected_version);
  if (verdict == Verdict::warning) throw InvalidRequestError("a decision must be pass or fail");
  if (annotator.empty()) throw InvalidRequestError("annotator is required");
  if (!state_.suite.find(item)) throw NotFoundError("unknown item '" + item + "'");
  const auto set = state_.judgments.find(system);
  if (set == state_.judgments.end()) throw NotFoundError("unknown system '" + system + "'");
  const Judgment* current = set->second.find(item);
  if (!current) throw NotFoundError("no judgment for (" + system + ", " + item + ")");
  if (current->verdict != Verdict::warning && !override_verdict) {
    throw ConflictError("(" + system + ", " + item + ") is already " + std::string(to_string(current->verdict)));
  }

  AnnotationEvent e;
  e.timestamp = clock_();
  e.annotator = annotator;
  e.kind = verdict == Verdict::pass ? EventKind::decide_pass : EventKind::decide_fail;
  e.item = item;
  e.system = system;
  e.override_verdict = override_verdict;
  e = record(std::move(e));
  apply_event(state_, outputs_, e, log_.size() - 1);
  ++version_;
  return {e, *state_.judgments.at(system).find(item), version_};
}

RuleResult TriageState::add_rule(const std::string& item, RuleKind kind, const std::string& payload,
                                 const std::string& annotator, bool case_insensitive, bool dry_run,
                                 std::optional<std::uint64_t> expected_version) {
  std::unique_lock lock(mutex_);
  check_version(expected_version);
  if (!state_.suite.find(item)) throw NotFoundError("unknown item '" + item + "'");
  if (annotator.empty() && !dry_run) throw InvalidRequestError("annotator is required");
  if (payload.empty()) throw InvalidRequestError("rule payload is empty");
  if (kind == RuleKind::exact) {
    if (normalize(payload).empty()) throw InvalidRequestError("exact translation is blank");
  } else {
    if (auto err = check_pattern(payload)) throw InvalidRequestError("pattern does not compile: " + *err);
  }

  AnnotationEvent e;
  e.timestamp = clock_();
  e.annotator = annotator;
  e.kind = kind == RuleKind::positive   ? EventKind::add_positive_pattern
           : kind == RuleKind::negative ? EventKind::add_negative_pattern
                                        : EventKind::add_exact_translation;
  e.item = item;
  e.payload = payload;
  e.case_insensitive = case_insensitive && kind != RuleKind::exact;

  RuleResult result;
  if (dry_run) {
    ReplayState scratch = state_;
    result.transitions = apply_event(scratch, outputs_, e, log_.size());
    result.version = version_;
    return result;
  }
  e = record(std::move(e));
  result.transitions = apply_event(state_, outputs_, e, log_.size() - 1);
  result.event = e;
  result.version = ++version_;
  return result;
}

std::uint64_t TriageState::reevaluate() {
  std::unique_lock lock(mutex_);
  if (workspace_) {
    RunOutputs fresh;
    for (const auto& system : workspace_->systems()) {
      fresh.set_system(system, workspace_->load_outputs(system, base_));
    }
    outputs_ = std::move(fresh);
  }
  automatic_ = initial_state(base_, outputs_).judgments;
  state_ = replay(base_, outputs_, log_);
  return ++version_;
}

Table TriageState::report(AnalysisMode mode, Grouping grouping, const std::optional<std::vector<std::string>>& exclude,
                          std::optional<std::size_t> min_n) const {
  std::shared_lock lock(mutex_);
  ReportOptions options;
  options.analysis.mode = mode;
  options.analysis.excluded_systems = exclude ? *exclude : config_.analysis.excluded_systems;
  options.significance.critical_z = config_.critical_z;
  options.system_order = config_.system_order;
  options.min_n = min_n.value_or(config_.min_n);
  return build_table(state_.judgments, state_.suite, taxonomy_, grouping, options);
}

ItemDetail TriageState::item(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const TestItem* item = state_.suite.find(id);
  if (!item) throw NotFoundError("unknown item '" + id + "'");
  ItemDetail detail;
  detail.item = *item;
  if (const auto* ph = taxonomy_.find_phenomenon(item->phenomenon)) detail.category = ph->category;
  for (const auto& [system, set] : state_.judgments) {
    if (const Judgment* j = set.find(id)) {
      detail.judgments.push_back(*j);
      const std::string* text = outputs_.text(system, id);
      detail.outputs.push_back(text ? std::optional<std::string>(*text) : std::nullopt);
    }
  }
  return detail;
}

WarningReport TriageState::stats() const {
  std::shared_lock lock(mutex_);
  return warning_stats(automatic_, state_.judgments, log_);
}

std::uint64_t TriageState::version() const {
  std::shared_lock lock(mutex_);
  return version_;
}

ReplayState TriageState::snapshot() const {
  std::shared_lock lock(mutex_);
  return state_;
}

std::vector<AnnotationEvent> TriageState::log() const {
  std::shared_lock lock(mutex_);
  return log_;
}

}  // namespace mtsuite
