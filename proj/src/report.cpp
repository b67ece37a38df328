#include "mtsuite/report.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "mtsuite/errors.hpp"

namespace mtsuite {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> order_systems(const EvaluationRun& run, const ReportOptions& options) {
  std::vector<std::string> present;
  for (const auto& [system, _] : run) {
    const auto& ex = options.analysis.excluded_systems;
    if (std::find(ex.begin(), ex.end(), system) == ex.end()) present.push_back(system);
  }
  std::vector<std::string> ordered;
  for (const auto& s : options.system_order) {
    if (std::find(present.begin(), present.end(), s) != present.end() &&
        std::find(ordered.begin(), ordered.end(), s) == ordered.end()) {
      ordered.push_back(s);
    }
  }
  for (const auto& s : present) {
    if (std::find(ordered.begin(), ordered.end(), s) == ordered.end()) ordered.push_back(s);
  }
  return ordered;
}

std::string group_label(const Taxonomy& taxonomy, Grouping grouping, const std::string& key) {
  if (grouping == Grouping::category) {
    if (const auto* c = taxonomy.find_category(key)) return c->name;
  } else if (grouping == Grouping::phenomenon) {
    if (const auto* p = taxonomy.find_phenomenon(key)) return p->name;
  }
  return key;
}

std::string title_for(Grouping grouping, AnalysisMode mode) {
  std::string what;
  switch (grouping) {
    case Grouping::category: what = "error category"; break;
    case Grouping::tense: what = "verb tense"; break;
    case Grouping::verb_type: what = "verb type"; break;
    case Grouping::phenomenon: what = "phenomenon"; break;
  }
  return "System accuracy (%) per " + what + ", " + std::string(to_string(mode));
}

void mark_cluster(std::vector<TableCell>& cells, const std::vector<AccuracyCell>& row, const SignificanceConfig& config) {
  const auto cluster = top_cluster(row, config);
  std::size_t defined = 0;
  for (const auto& c : row) defined += c.evaluated > 0 ? 1 : 0;
  if (cluster.size() >= defined) return;  // whole row is one cluster
  for (std::size_t i = 0; i < row.size(); ++i) cells[i].bold = cluster.count(row[i].system) > 0;
}

const char* kind_name(RowKind k) {
  switch (k) {
    case RowKind::group: return "group";
    case RowKind::sum: return "sum";
    case RowKind::non_weighted_average: return "non-weighted-average";
    case RowKind::weighted_average: return "weighted-average";
  }
  return "group";
}

std::optional<RowKind> parse_kind(std::string_view s) {
  for (const auto k : {RowKind::group, RowKind::sum, RowKind::non_weighted_average, RowKind::weighted_average}) {
    if (s == kind_name(k)) return k;
  }
  return std::nullopt;
}

}  // namespace

Table build_table(const EvaluationRun& run, const Suite& suite, const Taxonomy& taxonomy, Grouping grouping,
                  const ReportOptions& options) {
  Table table;
  table.mode = options.analysis.mode;
  table.grouping = grouping;
  table.title = title_for(grouping, table.mode);
  table.systems = order_systems(run, options);
  const bool analysis1 = table.mode == AnalysisMode::analysis1;

  const auto cells = phenomenon_cells(run, suite, options.analysis);
  const auto grouped = aggregate(cells, taxonomy, grouping);

  std::vector<std::string> keys;
  std::map<std::pair<std::string, std::string>, AccuracyCell> by_key;
  for (const auto& c : grouped) {
    if (std::find(keys.begin(), keys.end(), c.key) == keys.end()) keys.push_back(c.key);
    by_key[{c.key, c.system}] = c;
  }

  // Per-system group cells kept for the summary rows.
  std::map<std::string, std::vector<AccuracyCell>> per_system;
  for (const auto& key : keys) {
    std::vector<AccuracyCell> row_cells;
    for (const auto& system : table.systems) {
      AccuracyCell c;
      if (const auto it = by_key.find({key, system}); it != by_key.end()) c = it->second;
      c.system = system;
      c.key = key;
      row_cells.push_back(std::move(c));
    }
    std::size_t n_min = row_cells.empty() ? 0 : row_cells.front().evaluated;
    std::size_t n_max = 0;
    for (const auto& c : row_cells) {
      n_min = std::min(n_min, c.evaluated);
      n_max = std::max(n_max, c.evaluated);
    }
    if (n_max == 0) continue;  // every item of the group was filtered out
    if (grouping == Grouping::phenomenon && n_min < options.min_n) continue;

    TableRow row;
    row.kind = RowKind::group;
    row.key = key;
    row.label = group_label(taxonomy, grouping, key);
    if (analysis1) row.n = n_max;
    for (const auto& c : row_cells) {
      TableCell cell;
      cell.correct = c.correct;
      cell.evaluated = c.evaluated;
      cell.fraction = c.accuracy();
      row.cells.push_back(cell);
      per_system[c.system].push_back(c);
    }
    if (analysis1) mark_cluster(row.cells, row_cells, options.significance);
    table.rows.push_back(std::move(row));
  }

  if (grouping == Grouping::phenomenon || table.rows.empty()) return table;

  TableRow sum{RowKind::sum, "sum", "Sum", std::nullopt, {}};
  TableRow nonweighted{RowKind::non_weighted_average, "non-weighted-average", "Non-weighted average", std::nullopt, {}};
  TableRow weighted{RowKind::weighted_average, "weighted-average", "Weighted average", std::nullopt, {}};
  std::vector<AccuracyCell> totals;
  for (const auto& system : table.systems) {
    const auto& groups = per_system[system];
    AccuracyCell total;
    total.system = system;
    total.key = "total";
    std::vector<AccuracyCell> defined;
    for (const auto& g : groups) {
      total.correct += g.correct;
      total.evaluated += g.evaluated;
      if (g.evaluated > 0) defined.push_back(g);
    }
    totals.push_back(total);

    TableCell s;
    s.correct = total.correct;
    s.evaluated = total.evaluated;
    s.count = analysis1 ? total.correct : total.evaluated;
    sum.cells.push_back(s);

    TableCell nw;
    nw.correct = total.correct;
    nw.evaluated = total.evaluated;
    if (total.evaluated > 0) nw.fraction = non_weighted_average(groups);
    nonweighted.cells.push_back(nw);

    TableCell w;
    w.correct = total.correct;
    w.evaluated = total.evaluated;
    if (!defined.empty()) w.fraction = weighted_average(defined);
    weighted.cells.push_back(w);
  }
  if (analysis1) {
    std::size_t n = 0;
    for (const auto& row : table.rows) n += row.n.value_or(0);
    sum.n = n;
    if (grouping == Grouping::category) mark_cluster(nonweighted.cells, totals, options.significance);
  }
  table.rows.push_back(std::move(sum));
  table.rows.push_back(std::move(nonweighted));
  table.rows.push_back(std::move(weighted));
  return table;
}

Table category_table(const EvaluationRun& run, const Suite& suite, const Taxonomy& taxonomy,
                     const ReportOptions& options) {
  return build_table(run, suite, taxonomy, Grouping::category, options);
}

Table group_table(const EvaluationRun& run, const Suite& suite, const Taxonomy& taxonomy, Grouping grouping,
                  const ReportOptions& options) {
  if (grouping == Grouping::category) throw std::invalid_argument("group_table: use category_table for categories");
  return build_table(run, suite, taxonomy, grouping, options);
}

std::optional<ExportFormat> parse_export_format(std::string_view s) {
  if (s == "md" || s == "markdown") return ExportFormat::markdown;
  if (s == "tsv") return ExportFormat::tsv;
  if (s == "records") return ExportFormat::records;
  return std::nullopt;
}

std::string cell_text(const TableRow& row, const TableCell& cell) {
  if (row.kind == RowKind::sum) return cell.count ? std::to_string(*cell.count) : std::string(kUndefinedCell);
  if (row.kind == RowKind::group) return format_percent(cell.correct, cell.evaluated);
  return format_percent(cell.fraction);
}

std::string render_markdown(const Table& table) {
  std::string out = "### " + table.title + "\n\n|  | # |";
  for (const auto& s : table.systems) out += " " + s + " |";
  out += "\n|---|---:|";
  for (std::size_t i = 0; i < table.systems.size(); ++i) out += "---:|";
  out += "\n";
  for (const auto& row : table.rows) {
    out += "| " + row.label + " | " + (row.n ? std::to_string(*row.n) : std::string()) + " |";
    for (const auto& cell : row.cells) {
      const std::string text = cell_text(row, cell);
      out += " " + (cell.bold ? "**" + text + "**" : text) + " |";
    }
    out += "\n";
  }
  return out;
}

std::string render_tsv(const Table& table) {
  std::string out = "group\t#";
  for (const auto& s : table.systems) out += "\t" + s;
  out += "\n";
  for (const auto& row : table.rows) {
    out += row.label + "\t" + (row.n ? std::to_string(*row.n) : std::string());
    for (const auto& cell : row.cells) out += "\t" + cell_text(row, cell) + (cell.bold ? "*" : "");
    out += "\n";
  }
  return out;
}

std::string render_records(const Table& table) {
  ordered_json header;
  header["record"] = "table";
  header["title"] = table.title;
  header["mode"] = to_string(table.mode);
  header["grouping"] = to_string(table.grouping);
  header["systems"] = table.systems;
  std::string out = header.dump() + "\n";
  for (const auto& row : table.rows) {
    ordered_json r;
    r["record"] = "row";
    r["kind"] = kind_name(row.kind);
    r["key"] = row.key;
    r["label"] = row.label;
    r["n"] = row.n ? ordered_json(*row.n) : ordered_json(nullptr);
    r["cells"] = ordered_json::array();
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      const auto& c = row.cells[i];
      ordered_json cell;
      cell["system"] = table.systems.at(i);
      cell["correct"] = c.correct;
      cell["evaluated"] = c.evaluated;
      cell["accuracy"] = c.fraction ? ordered_json(*c.fraction) : ordered_json(nullptr);
      cell["count"] = c.count ? ordered_json(*c.count) : ordered_json(nullptr);
      cell["text"] = cell_text(row, c);
      cell["bold"] = c.bold;
      r["cells"].push_back(std::move(cell));
    }
    out += r.dump() + "\n";
  }
  return out;
}

std::string render(const Table& table, ExportFormat format) {
  switch (format) {
    case ExportFormat::markdown: return render_markdown(table);
    case ExportFormat::tsv: return render_tsv(table);
    case ExportFormat::records: return render_records(table);
  }
  return render_markdown(table);
}

Table parse_records(std::string_view text) {
  using nlohmann::json;
  Table table;
  bool have_header = false;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      const json rec = json::parse(line);
      const std::string kind = rec.at("record").get<std::string>();
      if (kind == "table") {
        table.title = rec.at("title").get<std::string>();
        const auto mode = parse_analysis_mode(rec.at("mode").get<std::string>());
        const auto grouping = parse_grouping(rec.at("grouping").get<std::string>());
        if (!mode || !grouping) throw std::invalid_argument("bad mode or grouping");
        table.mode = *mode;
        table.grouping = *grouping;
        table.systems = rec.at("systems").get<std::vector<std::string>>();
        have_header = true;
      } else if (kind == "row") {
        if (!have_header) throw std::invalid_argument("row before table header");
        TableRow row;
        const auto rk = parse_kind(rec.at("kind").get<std::string>());
        if (!rk) throw std::invalid_argument("bad row kind");
        row.kind = *rk;
        row.key = rec.at("key").get<std::string>();
        row.label = rec.at("label").get<std::string>();
        if (!rec.at("n").is_null()) row.n = rec.at("n").get<std::size_t>();
        const auto& cells = rec.at("cells");
        if (cells.size() != table.systems.size()) throw std::invalid_argument("cell count does not match systems");
        for (const auto& c : cells) {
          TableCell cell;
          cell.correct = c.at("correct").get<std::size_t>();
          cell.evaluated = c.at("evaluated").get<std::size_t>();
          if (!c.at("accuracy").is_null()) cell.fraction = c.at("accuracy").get<double>();
          if (!c.at("count").is_null()) cell.count = c.at("count").get<std::size_t>();
          cell.bold = c.at("bold").get<bool>();
          row.cells.push_back(cell);
        }
        table.rows.push_back(std::move(row));
      } else {
        throw std::invalid_argument("unknown record '" + kind + "'");
      }
    } catch (const std::exception& e) {
      throw ParseError("<records>", line_no, e.what());
    }
  }
  if (!have_header) throw ParseError("<records>", 0, "missing table header");
  return table;
}

}  // namespace mtsuite
