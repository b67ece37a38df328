#include "mtsuite/store.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "mtsuite/errors.hpp"
#include "mtsuite/normalize.hpp"
#include "mtsuite/pattern.hpp"

namespace mtsuite {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::string_view kSuiteFormat = "mtsuite-suite";

// Calls fn(line_no, line) for every line; line_no is 1-based.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    pos = eol + 1;
  }
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; });
}

// Field access with schema errors reported as std::invalid_argument.
std::string required_string(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

bool optional_bool(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) throw std::invalid_argument(std::string("field '") + key + "' must be a boolean");
  return it->get<bool>();
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw std::invalid_argument("unknown field '" + key + "'");
    }
  }
}

Pattern pattern_from_json(const json& v) {
  if (v.is_string()) return Pattern{v.get<std::string>(), false, "", ""};
  if (!v.is_object()) throw std::invalid_argument("pattern must be a string or an object");
  reject_unknown_keys(v, {"expression", "case_insensitive", "author", "created_at"});
  Pattern p;
  p.expression = required_string(v, "expression");
  p.case_insensitive = optional_bool(v, "case_insensitive");
  p.author = optional_string(v, "author").value_or("");
  p.created_at = optional_string(v, "created_at").value_or("");
  return p;
}

ordered_json pattern_to_json(const Pattern& p) {
  ordered_json o;
  o["expression"] = p.expression;
  o["case_insensitive"] = p.case_insensitive;
  o["author"] = p.author;
  o["created_at"] = p.created_at;
  return o;
}

std::vector<Pattern> pattern_list(const json& obj, const char* key) {
  std::vector<Pattern> out;
  const auto it = obj.find(key);
  if (it == obj.end()) return out;
  if (!it->is_array()) throw std::invalid_argument(std::string("field '") + key + "' must be an array");
  for (const auto& v : *it) out.push_back(pattern_from_json(v));
  return out;
}

std::string dump(const ordered_json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

struct PendingItem {
  std::size_t line;
  TestItem item;
};

struct PendingPhenomenon {
  std::size_t line;
  Phenomenon phenomenon;
};

}  // namespace

// ---- suites ----------------------------------------------------------------

SuiteRead read_suite(std::string_view text, const Taxonomy& base) {
  SuiteRead result;
  std::vector<PendingItem> items;
  std::vector<PendingPhenomenon> declared;
  bool first_record = true;

  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (blank(line)) return;
    const bool is_first = first_record;
    first_record = false;
    try {
      json rec;
      try {
        rec = json::parse(line);
      } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
      }
      if (!rec.is_object()) throw std::invalid_argument("record must be a JSON object");

      if (rec.contains("format")) {
        if (!is_first) throw std::invalid_argument("format header must be the first record");
        reject_unknown_keys(rec, {"format", "version"});
        if (required_string(rec, "format") != kSuiteFormat) throw std::invalid_argument("not a suite file");
        const auto v = rec.find("version");
        if (v == rec.end() || !v->is_number_integer() || v->get<int>() != kSuiteFormatVersion) {
          throw std::invalid_argument("unsupported schema version (expected " + std::to_string(kSuiteFormatVersion) + ")");
        }
        return;
      }

      const std::string kind = optional_string(rec, "record").value_or("item");
      if (kind == "phenomenon") {
        reject_unknown_keys(rec, {"record", "id", "name", "category", "tense_group", "verb_type_group"});
        Phenomenon p;
        p.id = required_string(rec, "id");
        p.name = required_string(rec, "name");
        p.category = required_string(rec, "category");
        p.tense_group = optional_string(rec, "tense_group");
        p.verb_type_group = optional_string(rec, "verb_type_group");
        declared.push_back({line_no, std::move(p)});
      } else if (kind == "item") {
        reject_unknown_keys(rec, {"record", "id", "source", "phenomenon", "positive", "negative", "exact", "note"});
        TestItem item;
        item.id = required_string(rec, "id");
        item.source = required_string(rec, "source");
        item.phenomenon = required_string(rec, "phenomenon");
        item.rules.positive = pattern_list(rec, "positive");
        item.rules.negative = pattern_list(rec, "negative");
        if (const auto it = rec.find("exact"); it != rec.end()) {
          if (!it->is_array()) throw std::invalid_argument("field 'exact' must be an array");
          for (const auto& s : *it) {
            if (!s.is_string()) throw std::invalid_argument("exact translations must be strings");
            item.rules.exact_valid.push_back(normalize(s.get<std::string>()));
          }
        }
        item.note = optional_string(rec, "note").value_or("");
        items.push_back({line_no, std::move(item)});
      } else {
        throw std::invalid_argument("unknown record type '" + kind + "'");
      }
    } catch (const std::exception& e) {
      result.diagnostics.push_back({line_no, e.what()});
    }
  });

  Taxonomy tax = base;
  for (auto& d : declared) {
    try {
      tax.add_phenomenon(d.phenomenon);
      result.suite.phenomena.push_back(std::move(d.phenomenon));
    } catch (const std::invalid_argument& e) {
      result.diagnostics.push_back({d.line, e.what()});
    }
  }

  std::unordered_set<std::string> ids;
  for (auto& pending : items) {
    const TestItem& item = pending.item;
    std::vector<std::string> problems;
    if (item.id.empty()) problems.push_back("empty item id");
    if (!ids.insert(item.id).second) problems.push_back("duplicate item id '" + item.id + "'");
    if (item.source.empty()) problems.push_back("empty source sentence");
    if (!tax.find_phenomenon(item.phenomenon)) problems.push_back("unknown phenomenon '" + item.phenomenon + "'");
    if (item.rules.empty()) problems.push_back("item has no rules");
    for (const auto* list : {&item.rules.positive, &item.rules.negative}) {
      for (const auto& p : *list) {
        if (auto err = check_pattern(p.expression)) problems.push_back("bad pattern '" + p.expression + "' " + *err);
      }
    }
    if (problems.empty()) {
      result.suite.items.push_back(std::move(pending.item));
    } else {
      for (auto& msg : problems) result.diagnostics.push_back({pending.line, std::move(msg)});
    }
  }

  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  return result;
}

Suite parse_suite(std::string_view text, const Taxonomy& base, std::string_view origin) {
  SuiteRead r = read_suite(text, base);
  if (!r.diagnostics.empty()) {
    throw ParseError(std::string(origin), r.diagnostics.front().line, r.diagnostics.front().message);
  }
  return std::move(r.suite);
}

Suite import_suite(const std::filesystem::path& path, const Taxonomy& base) {
  return parse_suite(read_file(path), base, path.string());
}

std::string export_suite(const Suite& suite) {
  std::string out;
  ordered_json header;
  header["format"] = kSuiteFormat;
  header["version"] = kSuiteFormatVersion;
  out += dump(header) + "\n";
  for (const auto& p : suite.phenomena) {
    ordered_json o;
    o["record"] = "phenomenon";
    o["id"] = p.id;
    o["name"] = p.name;
    o["category"] = p.category;
    if (p.tense_group) o["tense_group"] = *p.tense_group;
    if (p.verb_type_group) o["verb_type_group"] = *p.verb_type_group;
    out += dump(o) + "\n";
  }
  for (const auto& item : suite.items) {
    ordered_json o;
    o["id"] = item.id;
    o["source"] = item.source;
    o["phenomenon"] = item.phenomenon;
    o["positive"] = ordered_json::array();
    for (const auto& p : item.rules.positive) o["positive"].push_back(pattern_to_json(p));
    o["negative"] = ordered_json::array();
    for (const auto& p : item.rules.negative) o["negative"].push_back(pattern_to_json(p));
    o["exact"] = item.rules.exact_valid;
    if (!item.note.empty()) o["note"] = item.note;
    out += dump(o) + "\n";
  }
  return out;
}

// ---- outputs ---------------------------------------------------------------

std::string escape_tsv_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_tsv_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out += s[i];
      continue;
    }
    switch (s[++i]) {
      case '\\': out += '\\'; break;
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      default:
        out += '\\';
        out += s[i];
    }
  }
  return out;
}

OutputsImport parse_outputs(std::string_view text, const std::string& system, const Suite& suite,
                            std::string_view origin) {
  const std::string where(origin);
  std::unordered_set<std::string> known;
  for (const auto& item : suite.items) known.insert(item.id);

  OutputsImport result;
  std::unordered_set<std::string> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(where, line_no, "expected 'item-id<TAB>text'");
    std::string id(line.substr(0, tab));
    if (!known.count(id)) throw ParseError(where, line_no, "unknown item id '" + id + "'");
    if (!seen.insert(id).second) {
      throw ParseError(where, line_no, "duplicate output for (" + system + ", " + id + ")");
    }
    result.outputs.push_back({system, std::move(id), unescape_tsv_field(line.substr(tab + 1))});
  });
  for (const auto& item : suite.items) {
    if (!seen.count(item.id)) result.missing.push_back(item.id);
  }
  return result;
}

OutputsImport import_outputs(const std::filesystem::path& path, const std::string& system, const Suite& suite) {
  return parse_outputs(read_file(path), system, suite, path.string());
}

std::string export_outputs(std::span<const SystemOutput> outputs) {
  std::string out;
  for (const auto& o : outputs) out += o.item + "\t" + escape_tsv_field(o.text) + "\n";
  return out;
}

// ---- log -------------------------------------------------------------------

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::decide_pass: return "decide-pass";
    case EventKind::decide_fail: return "decide-fail";
    case EventKind::add_positive_pattern: return "add-positive-pattern";
    case EventKind::add_negative_pattern: return "add-negative-pattern";
    case EventKind::add_exact_translation: return "add-exact-translation";
  }
  return "decide-pass";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (const auto k : {EventKind::decide_pass, EventKind::decide_fail, EventKind::add_positive_pattern,
                       EventKind::add_negative_pattern, EventKind::add_exact_translation}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

std::string serialize_event(const AnnotationEvent& e) {
  ordered_json o;
  o["seq"] = e.seq;
  o["timestamp"] = e.timestamp;
  o["annotator"] = e.annotator;
  o["kind"] = to_string(e.kind);
  o["item"] = e.item;
  if (e.system) o["system"] = *e.system;
  o["payload"] = e.payload;
  if (e.case_insensitive) o["case_insensitive"] = true;
  if (e.override_verdict) o["override"] = true;
  return dump(o);
}

std::vector<AnnotationEvent> parse_log(std::string_view text, std::string_view origin) {
  const std::string where(origin);
  std::vector<AnnotationEvent> events;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (blank(line)) return;
    try {
      const json rec = json::parse(line);
      if (!rec.is_object()) throw std::invalid_argument("record must be a JSON object");
      reject_unknown_keys(rec, {"seq", "timestamp", "annotator", "kind", "item", "system", "payload",
                                "case_insensitive", "override"});
      AnnotationEvent e;
      const auto seq = rec.find("seq");
      if (seq == rec.end() || !seq->is_number_unsigned()) throw std::invalid_argument("'seq' must be an unsigned integer");
      e.seq = seq->get<std::uint64_t>();
      e.timestamp = optional_string(rec, "timestamp").value_or("");
      e.annotator = required_string(rec, "annotator");
      const auto kind = parse_event_kind(required_string(rec, "kind"));
      if (!kind) throw std::invalid_argument("unknown event kind");
      e.kind = *kind;
      e.item = required_string(rec, "item");
      e.system = optional_string(rec, "system");
      e.payload = optional_string(rec, "payload").value_or("");
      e.case_insensitive = optional_bool(rec, "case_insensitive");
      e.override_verdict = optional_bool(rec, "override");
      if (is_decision(e.kind) && !e.system) throw std::invalid_argument("decision without 'system'");
      if (!events.empty() && e.seq <= events.back().seq) {
        throw std::invalid_argument("sequence number " + std::to_string(e.seq) + " is not increasing");
      }
      events.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw ParseError(where, line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw ParseError(where, line_no, e.what());
    }
  });
  return events;
}

std::string export_log(std::span<const AnnotationEvent> events) {
  std::string out;
  for (const auto& e : events) out += serialize_event(e) + "\n";
  return out;
}

EventLogWriter::EventLogWriter(std::filesystem::path path, std::uint64_t last_seq)
    : path_(std::move(path)), last_seq_(last_seq) {}

AnnotationEvent EventLogWriter::append(AnnotationEvent e) {
  e.seq = last_seq_ + 1;
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open log '" + path_.string() + "' for append");
  out << serialize_event(e) << '\n';
  out.flush();
  if (!out) throw std::runtime_error("failed writing log '" + path_.string() + "'");
  last_seq_ = e.seq;
  return e;
}

// ---- judgments ---------------------------------------------------------------

std::string export_judgments(const EvaluationRun& run) {
  std::string out;
  for (const auto& [system, set] : run) {
    for (const auto& j : set.judgments()) {
      ordered_json o;
      o["system"] = j.system;
      o["item"] = j.item;
      o["verdict"] = to_string(j.verdict);
      o["cause"] = to_string(j.cause);
      if (j.matched_rule) {
        o["matched_rule"] = {{"kind", to_string(j.matched_rule->kind)},
                             {"index", j.matched_rule->index},
                             {"expression", j.matched_rule->expression}};
      }
      o["decided_by"] = to_string(j.decided_by);
      out += dump(o) + "\n";
    }
  }
  return out;
}

// ---- workspace ---------------------------------------------------------------

bool valid_system_id(std::string_view id) {
  if (id.empty() || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
           c == '-';
  });
}

Workspace::Workspace(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path Workspace::outputs_path(const std::string& system) const {
  if (!valid_system_id(system)) throw std::invalid_argument("invalid system id '" + system + "'");
  return outputs_dir() / (system + ".tsv");
}

bool Workspace::initialized() const { return std::filesystem::exists(suite_path()); }

void Workspace::init() const { std::filesystem::create_directories(outputs_dir()); }

Suite Workspace::load_suite(const Taxonomy& base) const {
  if (!initialized()) throw std::runtime_error("no suite in '" + root_.string() + "' (run 'import' first)");
  return import_suite(suite_path(), base);
}

void Workspace::save_suite(const Suite& suite) const {
  init();
  write_file(suite_path(), export_suite(suite));
}

std::vector<std::string> Workspace::systems() const {
  std::vector<std::string> out;
  if (!std::filesystem::exists(outputs_dir())) return out;
  for (const auto& entry : std::filesystem::directory_iterator(outputs_dir())) {
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") {
      const auto stem = entry.path().stem().string();
      if (valid_system_id(stem)) out.push_back(stem);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SystemOutput> Workspace::load_outputs(const std::string& system, const Suite& suite) const {
  return import_outputs(outputs_path(system), system, suite).outputs;
}

void Workspace::save_outputs(const std::string& system, std::span<const SystemOutput> outputs) const {
  init();
  write_file(outputs_path(system), export_outputs(outputs));
}

std::vector<AnnotationEvent> Workspace::load_log() const {
  if (!std::filesystem::exists(log_path())) return {};
  return parse_log(read_file(log_path()), log_path().string());
}

WorkspaceConfig Workspace::load_config() const {
  WorkspaceConfig config;
  if (!std::filesystem::exists(config_path())) return config;
  const json j = json::parse(read_file(config_path()));
  if (j.contains("mode")) {
    const auto mode = parse_analysis_mode(j.at("mode").get<std::string>());
    if (!mode) throw ParseError(config_path().string(), 0, "unknown analysis mode");
    config.analysis.mode = *mode;
  }
  if (j.contains("excluded_systems")) config.analysis.excluded_systems = j.at("excluded_systems").get<std::vector<std::string>>();
  if (j.contains("system_order")) config.system_order = j.at("system_order").get<std::vector<std::string>>();
  if (j.contains("critical_z")) config.critical_z = j.at("critical_z").get<double>();
  if (j.contains("min_n")) config.min_n = j.at("min_n").get<std::size_t>();
  return config;
}

void Workspace::save_config(const WorkspaceConfig& config) const {
  ordered_json j;
  j["mode"] = to_string(config.analysis.mode);
  j["excluded_systems"] = config.analysis.excluded_systems;
  j["system_order"] = config.system_order;
  j["critical_z"] = config.critical_z;
  j["min_n"] = config.min_n;
  init();
  write_file(config_path(), j.dump(2) + "\n");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string utc_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace mtsuite
