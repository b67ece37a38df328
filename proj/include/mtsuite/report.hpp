#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtsuite/analysis.hpp"
#include "mtsuite/suite.hpp"
#include "mtsuite/taxonomy.hpp"

namespace mtsuite {

struct TableCell {
  std::size_t correct = 0;
  std::size_t evaluated = 0;
  std::optional<double> fraction;    // accuracy and average rows
  std::optional<std::size_t> count;  // Sum row
  bool bold = false;

  bool operator==(const TableCell&) const = default;
};

enum class RowKind { group, sum, non_weighted_average, weighted_average };

struct TableRow {
  RowKind kind = RowKind::group;
  std::string key;
  std::string label;
  std::optional<std::size_t> n;  // shared denominator; absent under analysis2
  std::vector<TableCell> cells;  // one per Table::systems entry

  bool operator==(const TableRow&) const = default;
};

struct Table {
  std::string title;
  AnalysisMode mode = AnalysisMode::analysis1;
  Grouping grouping = Grouping::category;
  std::vector<std::string> systems;
  std::vector<TableRow> rows;

  bool operator==(const Table&) const = default;
};

struct ReportOptions {
  AnalysisConfig analysis;
  SignificanceConfig significance;
  std::vector<std::string> system_order;  // empty: lexicographic
  std::size_t min_n = 15;                 // phenomenon grouping only
};

// Rows are groups with at least one evaluated item, in taxonomy order, followed
// by Sum / non-weighted / weighted average rows (not for the phenomenon
// grouping). Under analysis1 the top significance cluster of each row is
// bold unless it spans every system; analysis2 tables carry no bold.
Table build_table(const EvaluationRun& run, const Suite& suite, const Taxonomy& taxonomy, Grouping grouping,
                  const ReportOptions& options);

Table category_table(const EvaluationRun& run, const Suite& suite, const Taxonomy& taxonomy,
                     const ReportOptions& options);

// grouping ∈ {tense, verb_type, phenomenon}; phenomenon rows need n >= min_n.
Table group_table(const EvaluationRun& run, const Suite& suite, const Taxonomy& taxonomy, Grouping grouping,
                  const ReportOptions& options);

enum class ExportFormat { markdown, tsv, records };

std::optional<ExportFormat> parse_export_format(std::string_view s);  // md|markdown, tsv, records
std::string cell_text(const TableRow& row, const TableCell& cell);

std::string render_markdown(const Table& table);
std::string render_tsv(const Table& table);
std::string render_records(const Table& table);
std::string render(const Table& table, ExportFormat format);

// Inverse of render_records. Throws ParseError.
Table parse_records(std::string_view text);

}  // namespace mtsuite
