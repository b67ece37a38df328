#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "mtsuite/analysis.hpp"
#include "mtsuite/errors.hpp"
#include "mtsuite/http_service.hpp"
#include "mtsuite/matcher.hpp"
#include "mtsuite/replay.hpp"
#include "mtsuite/report.hpp"
#include "mtsuite/store.hpp"
#include "mtsuite/triage.hpp"

namespace mtsuite::cli {
namespace {

constexpr const char* kDirEnv = "MTSUITE_DIR";

std::string percent(double fraction) {
  std::ostringstream ss;
  ss << format_percent(fraction) << "%";
  return ss.str();
}

struct Context {
  Workspace workspace;
  Taxonomy taxonomy;
  std::ostream& out;
  std::ostream& err;
};

int cmd_import(Context& ctx, const std::string& file) {
  const SuiteRead r = read_suite(read_file(file), ctx.taxonomy);
  if (!r.diagnostics.empty()) {
    for (const auto& d : r.diagnostics) ctx.err << file << ":" << d.line << ": " << d.message << "\n";
    return 1;
  }
  ctx.workspace.save_suite(r.suite);
  ctx.out << "imported " << r.suite.items.size() << " items, " << r.suite.phenomena.size()
          << " declared phenomena into " << ctx.workspace.root().string() << "\n";
  return 0;
}

int cmd_validate(Context& ctx) {
  if (!ctx.workspace.initialized()) {
    ctx.err << "no suite in " << ctx.workspace.root().string() << "\n";
    return 1;
  }
  const auto path = ctx.workspace.suite_path();
  const SuiteRead r = read_suite(read_file(path), ctx.taxonomy);
  int problems = 0;
  for (const auto& d : r.diagnostics) {
    ctx.err << path.string() << ":" << d.line << ": " << d.message << "\n";
    ++problems;
  }
  const ValidationReport report = validate_suite(r.suite, ctx.taxonomy);
  for (const auto& f : report.findings) {
    ctx.err << f.item_id << ": " << to_string(f.kind) << ": " << f.detail << "\n";
    ++problems;
  }
  if (!ctx.workspace.load_log().empty()) {
    // A log that no longer replays is as broken as a bad suite.
    try {
      (void)TriageState::open(ctx.workspace, ctx.taxonomy);
    } catch (const std::exception& e) {
      ctx.err << ctx.workspace.log_path().string() << ": " << e.what() << "\n";
      ++problems;
    }
  }
  if (problems == 0) ctx.out << "ok: " << r.suite.items.size() << " items, 0 findings\n";
  return problems == 0 ? 0 : 1;
}

int cmd_evaluate(Context& ctx, const std::string& system, const std::string& file) {
  if (!valid_system_id(system)) {
    ctx.err << "invalid system id '" << system << "'\n";
    return 2;
  }
  const Suite suite = ctx.workspace.load_suite(ctx.taxonomy);
  const OutputsImport imported = import_outputs(file, system, suite);
  for (const auto& id : imported.missing) ctx.err << "notice: no output for item '" << id << "'\n";
  ctx.workspace.save_outputs(system, imported.outputs);

  const JudgmentSet set = evaluate_run(system, imported.outputs, suite);
  const auto c = set.counts();
  ctx.out << system << ": " << imported.outputs.size() << " outputs, pass=" << c.pass << " fail=" << c.fail
          << " warning=" << c.warning << " warning-rate=" << percent(c.warning_rate()) << "\n";
  return 0;
}

int cmd_stats(Context& ctx, const std::string& format) {
  const auto state = TriageState::open(ctx.workspace, ctx.taxonomy);
  const WarningReport report = state->stats();
  if (format == "records") {
    ctx.out << to_json(report).dump() << "\n";
    return 0;
  }
  ctx.out << std::left << std::setw(16) << "system" << std::right << std::setw(8) << "pairs" << std::setw(10)
          << "before" << std::setw(10) << "after" << std::setw(10) << "decided" << std::setw(10) << "resolved" << "\n";
  const auto line = [&](const SystemWarningStats& s) {
    ctx.out << std::left << std::setw(16) << s.system << std::right << std::setw(8) << s.pairs << std::setw(10)
            << percent(s.rate_before()) << std::setw(10) << percent(s.rate_after()) << std::setw(10)
            << s.human_decisions << std::setw(10) << s.resolved << "\n";
  };
  for (const auto& s : report.systems) line(s);
  line(report.total);
  return 0;
}

int cmd_analyze(Context& ctx, const std::string& mode_arg, const std::vector<std::string>& exclude,
                const std::string& format) {
  const auto mode = parse_analysis_mode(mode_arg);
  if (!mode) {
    ctx.err << "unknown mode '" << mode_arg << "'\n";
    return 2;
  }
  WorkspaceConfig config = ctx.workspace.load_config();
  config.analysis.mode = *mode;
  config.analysis.excluded_systems = exclude;
  ctx.workspace.save_config(config);

  const auto state = TriageState::open(ctx.workspace, ctx.taxonomy);
  const ReplayState snapshot = state->snapshot();
  if (*mode == AnalysisMode::analysis1) {
    const auto kept = filter_analysis1(snapshot.judgments, exclude);
    ctx.out << "analysis1: " << kept.size() << " of " << snapshot.suite.items.size()
            << " items have no warning for any included system\n";
  } else {
    for (const auto& [system, set] : snapshot.judgments) {
      if (std::find(exclude.begin(), exclude.end(), system) != exclude.end()) continue;
      ctx.out << "analysis2: " << system << " keeps " << filter_analysis2(set).size() << " of " << set.size()
              << " items\n";
    }
  }
  const auto fmt = parse_export_format(format);
  if (!fmt) {
    ctx.err << "unknown format '" << format << "'\n";
    return 2;
  }
  ctx.out << render(state->report(*mode, Grouping::category), *fmt);
  return 0;
}

int cmd_report(Context& ctx, const std::string& grouping_arg, const std::string& format_arg,
               const std::optional<std::string>& mode_arg, const std::optional<std::vector<std::string>>& exclude,
               std::optional<std::size_t> min_n, const std::string& out_path) {
  const auto grouping = parse_grouping(grouping_arg);
  const auto format = parse_export_format(format_arg);
  if (!grouping || !format) {
    ctx.err << "unknown grouping or format\n";
    return 2;
  }
  const WorkspaceConfig config = ctx.workspace.load_config();
  AnalysisMode mode = config.analysis.mode;
  if (mode_arg) {
    const auto m = parse_analysis_mode(*mode_arg);
    if (!m) {
      ctx.err << "unknown mode '" << *mode_arg << "'\n";
      return 2;
    }
    mode = *m;
  }
  const auto state = TriageState::open(ctx.workspace, ctx.taxonomy);
  const std::string text = render(state->report(mode, *grouping, exclude, min_n), *format);
  if (out_path.empty()) {
    ctx.out << text;
  } else {
    write_file(out_path, text);
  }
  return 0;
}

int cmd_serve(Context& ctx, const std::string& host, int port) {
  const auto state = TriageState::open(ctx.workspace, ctx.taxonomy);
  TriageServer server(*state);
  if (!server.bind(host, port)) {
    ctx.err << "cannot bind " << host << ":" << port << "\n";
    return 1;
  }
  ctx.out << "serving " << ctx.workspace.root().string() << " on http://" << host << ":" << port << "\n" << std::flush;
  return server.listen_after_bind() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Test-suite evaluation harness for machine translation", "mtsuite"};
  app.require_subcommand(1);

  std::string dir = ".";
  if (const char* env = std::getenv(kDirEnv)) dir = env;
  app.add_option("-d,--dir", dir, std::string("suite working directory (default: $") + kDirEnv + " or .)");

  std::string suite_file;
  auto* import = app.add_subcommand("import", "import a suite file into the working directory");
  import->add_option("suite", suite_file, "suite file (JSON lines)")->required();

  auto* validate = app.add_subcommand("validate", "check the suite and annotation log");

  std::string system, outputs_file;
  auto* evaluate = app.add_subcommand("evaluate", "import a system's outputs and classify them");
  evaluate->add_option("system", system, "system id")->required();
  evaluate->add_option("outputs", outputs_file, "TSV file: item-id<TAB>text")->required();

  std::string mode = "1";
  std::vector<std::string> exclude;
  std::string analyze_format = "md";
  auto* analyze = app.add_subcommand("analyze", "set the analysis mode and show the category table");
  analyze->add_option("--mode", mode, "1 (common item set) or 2 (per system)")->check(CLI::IsMember({"1", "2", "analysis1", "analysis2"}));
  analyze->add_option("--exclude", exclude, "systems left out of the analysis")->delimiter(',');
  analyze->add_option("--format", analyze_format, "md, tsv or records");

  std::string grouping = "category", format = "md", out_path;
  std::optional<std::string> report_mode;
  std::vector<std::string> report_exclude;
  std::size_t min_n = 15;
  auto* report = app.add_subcommand("report", "render an accuracy table");
  report->add_option("--grouping", grouping)->check(CLI::IsMember({"category", "tense", "verbtype", "phenomenon"}));
  report->add_option("--format", format)->check(CLI::IsMember({"md", "tsv", "records"}));
  auto* report_mode_opt = report->add_option("--mode", report_mode, "override the configured analysis mode");
  auto* report_exclude_opt = report->add_option("--exclude", report_exclude)->delimiter(',');
  auto* min_n_opt = report->add_option("--min-n", min_n, "minimum items per phenomenon row");
  report->add_option("-o,--out", out_path, "write to a file instead of stdout");
  (void)report_mode_opt;

  std::string stats_format = "text";
  auto* stats = app.add_subcommand("stats", "warning rates before and after triage");
  stats->add_option("--format", stats_format)->check(CLI::IsMember({"text", "records"}));

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "run the triage HTTP service");
  serve->add_option("--port", port)->check(CLI::Range(1, 65535));
  serve->add_option("--host", host);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  Context ctx{Workspace(dir), load_taxonomy(), out, err};
  try {
    if (*import) return cmd_import(ctx, suite_file);
    if (*validate) return cmd_validate(ctx);
    if (*evaluate) return cmd_evaluate(ctx, system, outputs_file);
    if (*analyze) return cmd_analyze(ctx, mode, exclude, analyze_format);
    if (*report) {
      std::optional<std::vector<std::string>> ex;
      if (report_exclude_opt->count() > 0) ex = report_exclude;
      std::optional<std::size_t> n;
      if (min_n_opt->count() > 0) n = min_n;
      return cmd_report(ctx, grouping, format, report_mode, ex, n, out_path);
    }
    if (*stats) return cmd_stats(ctx, stats_format);
    if (*serve) return cmd_serve(ctx, host, port);
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace mtsuite::cli
