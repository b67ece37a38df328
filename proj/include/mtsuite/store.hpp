#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtsuite/analysis.hpp"
#include "mtsuite/events.hpp"
#include "mtsuite/suite.hpp"
#include "mtsuite/taxonomy.hpp"

namespace mtsuite {

inline constexpr int kSuiteFormatVersion = 1;

// ---- suites (JSON lines) --------------------------------------------------

struct Diagnostic {
  std::size_t line = 0;
  std::string message;
};

struct SuiteRead {
  Suite suite;
  std::vector<Diagnostic> diagnostics;  // sorted by line
};

// Reads every record; records that fail are reported and skipped.
SuiteRead read_suite(std::string_view text, const Taxonomy& base);

// Strict variants: throw ParseError at the first diagnostic.
Suite parse_suite(std::string_view text, const Taxonomy& base, std::string_view origin = "<suite>");
Suite import_suite(const std::filesystem::path& path, const Taxonomy& base);
std::string export_suite(const Suite& suite);

// ---- system outputs (TSV: item-id <TAB> text) -----------------------------

// Tabs, newlines, carriage returns and backslashes in text are written as
// \t \n \r \\ so one output always occupies one line.
std::string escape_tsv_field(std::string_view s);
std::string unescape_tsv_field(std::string_view s);

struct OutputsImport {
  std::vector<SystemOutput> outputs;    // file order
  std::vector<std::string> missing;     // suite items with no line, suite order
};

// Throws ParseError for a malformed line, an unknown item id, or a repeated item.
OutputsImport parse_outputs(std::string_view text, const std::string& system, const Suite& suite,
                            std::string_view origin = "<outputs>");
OutputsImport import_outputs(const std::filesystem::path& path, const std::string& system, const Suite& suite);
std::string export_outputs(std::span<const SystemOutput> outputs);

// ---- annotation log (JSON lines) ------------------------------------------

std::string serialize_event(const AnnotationEvent& e);
// Throws ParseError; sequence numbers must be strictly increasing.
std::vector<AnnotationEvent> parse_log(std::string_view text, std::string_view origin = "<log>");
std::string export_log(std::span<const AnnotationEvent> events);

// Appends events to a log file, assigning sequence numbers. One writer per file.
class EventLogWriter {
 public:
  EventLogWriter(std::filesystem::path path, std::uint64_t last_seq);

  // Sets e.seq and writes the record; the file is flushed before returning.
  AnnotationEvent append(AnnotationEvent e);
  std::uint64_t last_seq() const { return last_seq_; }

 private:
  std::filesystem::path path_;
  std::uint64_t last_seq_;
};

// ---- judgments -------------------------------------------------------------

std::string export_judgments(const EvaluationRun& run);

// ---- working directory -----------------------------------------------------

struct WorkspaceConfig {
  AnalysisConfig analysis;
  std::vector<std::string> system_order;  // empty: lexicographic
  double critical_z = 1.959964;
  std::size_t min_n = 15;
};

// Fixed layout:
//   suite.jsonl        imported suite
//   outputs/<sys>.tsv  one file per system
//   log.jsonl          annotation log
//   config.json        analysis settings
class Workspace {
 public:
  explicit Workspace(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path suite_path() const { return root_ / "suite.jsonl"; }
  std::filesystem::path outputs_dir() const { return root_ / "outputs"; }
  std::filesystem::path log_path() const { return root_ / "log.jsonl"; }
  std::filesystem::path config_path() const { return root_ / "config.json"; }
  std::filesystem::path outputs_path(const std::string& system) const;

  bool initialized() const;
  void init() const;

  Suite load_suite(const Taxonomy& base) const;
  void save_suite(const Suite& suite) const;

  std::vector<std::string> systems() const;  // sorted
  std::vector<SystemOutput> load_outputs(const std::string& system, const Suite& suite) const;
  void save_outputs(const std::string& system, std::span<const SystemOutput> outputs) const;

  std::vector<AnnotationEvent> load_log() const;
  WorkspaceConfig load_config() const;
  void save_config(const WorkspaceConfig& config) const;

 private:
  std::filesystem::path root_;
};

// System ids double as file names: [A-Za-z0-9._-]+, not starting with '.'.
bool valid_system_id(std::string_view id);

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary file and renames it into place.
void write_file(const std::filesystem::path& path, std::string_view content);

std::string utc_timestamp_now();

}  // namespace mtsuite
