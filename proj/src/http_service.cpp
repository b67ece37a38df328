#include "mtsuite/http_service.hpp"

#include <httplib.h>

#include <charconv>

#include "mtsuite/errors.hpp"

namespace mtsuite {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const Judgment& j) {
  ordered_json o;
  o["system"] = j.system;
  o["item"] = j.item;
  o["verdict"] = to_string(j.verdict);
  o["cause"] = to_string(j.cause);
  if (j.matched_rule) {
    o["matched_rule"] = {{"kind", to_string(j.matched_rule->kind)},
                         {"index", j.matched_rule->index},
                         {"expression", j.matched_rule->expression}};
  } else {
    o["matched_rule"] = nullptr;
  }
  o["decided_by"] = to_string(j.decided_by);
  return o;
}

ordered_json to_json(const AnnotationEvent& e) {
  ordered_json o;
  o["seq"] = e.seq;
  o["timestamp"] = e.timestamp;
  o["annotator"] = e.annotator;
  o["kind"] = to_string(e.kind);
  o["item"] = e.item;
  o["system"] = e.system ? ordered_json(*e.system) : ordered_json(nullptr);
  o["payload"] = e.payload;
  o["case_insensitive"] = e.case_insensitive;
  o["override"] = e.override_verdict;
  return o;
}

ordered_json to_json(const RuleSet& rules) {
  const auto patterns = [](const std::vector<Pattern>& list) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : list) {
      arr.push_back({{"expression", p.expression},
                     {"case_insensitive", p.case_insensitive},
                     {"author", p.author},
                     {"created_at", p.created_at}});
    }
    return arr;
  };
  ordered_json o;
  o["positive"] = patterns(rules.positive);
  o["negative"] = patterns(rules.negative);
  o["exact"] = rules.exact_valid;
  return o;
}

ordered_json to_json(const WarningReport& report) {
  const auto one = [](const SystemWarningStats& s) {
    ordered_json o;
    o["system"] = s.system;
    o["pairs"] = s.pairs;
    o["warnings_before"] = s.warnings_before;
    o["warnings_after"] = s.warnings_after;
    o["warning_rate_before"] = s.rate_before();
    o["warning_rate_after"] = s.rate_after();
    o["human_decisions"] = s.human_decisions;
    o["resolved"] = s.resolved;
    return o;
  };
  ordered_json o;
  o["systems"] = ordered_json::array();
  for (const auto& s : report.systems) o["systems"].push_back(one(s));
  o["total"] = one(report.total);
  return o;
}

ordered_json to_json(const Table& table) {
  ordered_json o;
  o["title"] = table.title;
  o["mode"] = to_string(table.mode);
  o["grouping"] = to_string(table.grouping);
  o["systems"] = table.systems;
  o["rows"] = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json r;
    r["label"] = row.label;
    r["key"] = row.key;
    r["n"] = row.n ? ordered_json(*row.n) : ordered_json(nullptr);
    r["cells"] = ordered_json::array();
    for (const auto& c : row.cells) {
      r["cells"].push_back({{"text", cell_text(row, c)},
                            {"correct", c.correct},
                            {"evaluated", c.evaluated},
                            {"bold", c.bold}});
    }
    o["rows"].push_back(std::move(r));
  }
  return o;
}

namespace {

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, ordered_json{{"error", message}});
}

template <typename Handler>
httplib::Server::Handler guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const NotFoundError& e) {
      send_error(res, 404, e.what());
    } catch (const ConflictError& e) {
      send_error(res, 409, e.what());
    } catch (const InvalidRequestError& e) {
      send_error(res, 400, e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, std::string("invalid payload: ") + e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };
}

json parse_body(const httplib::Request& req) {
  json body;
  try {
    body = json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw InvalidRequestError(std::string("body is not valid JSON: ") + e.what());
  }
  if (!body.is_object()) throw InvalidRequestError("body must be a JSON object");
  return body;
}

std::string required(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_string()) throw InvalidRequestError(std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

bool flag(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end()) return false;
  if (!it->is_boolean()) throw InvalidRequestError(std::string("field '") + key + "' must be a boolean");
  return it->get<bool>();
}

std::optional<std::uint64_t> expected_version(const json& body) {
  const auto it = body.find("expected_version");
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_unsigned()) throw InvalidRequestError("'expected_version' must be an unsigned integer");
  return it->get<std::uint64_t>();
}

std::optional<std::string> param(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  return req.get_param_value(key);
}

std::size_t parse_size(const std::string& s, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidRequestError(std::string("bad ") + what);
  return v;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!part.empty()) out.push_back(part);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

TriageServer::TriageServer(TriageState& state) : state_(state), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

TriageServer::~TriageServer() { stop(); }

int TriageServer::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool TriageServer::bind(const std::string& host, int port) { return server_->bind_to_port(host, port); }

bool TriageServer::listen_after_bind() { return server_->listen_after_bind(); }

void TriageServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

void TriageServer::wait_until_ready() const { server_->wait_until_ready(); }

void TriageServer::install_routes() {
  auto& s = *server_;

  s.Get("/warnings", guarded([this](const httplib::Request& req, httplib::Response& res) {
    WarningFilter filter;
    filter.system = param(req, "system");
    filter.category = param(req, "category");
    filter.phenomenon = param(req, "phenomenon");
    if (const auto cause = param(req, "cause")) {
      filter.cause = parse_cause(*cause);
      if (!filter.cause) throw InvalidRequestError("unknown cause '" + *cause + "'");
    }
    std::size_t limit = 100;
    if (const auto l = param(req, "limit")) limit = parse_size(*l, "limit");
    const WarningPage page = state_.list_warnings(filter, param(req, "cursor"), limit);

    ordered_json body;
    body["version"] = page.version;
    body["total"] = page.total;
    body["warnings"] = ordered_json::array();
    for (const auto& w : page.warnings) {
      body["warnings"].push_back({{"item", w.item},
                                  {"system", w.system},
                                  {"cause", to_string(w.cause)},
                                  {"source", w.source},
                                  {"output", w.output},
                                  {"phenomenon", w.phenomenon},
                                  {"category", w.category},
                                  {"rules", to_json(w.rules)}});
    }
    body["next_cursor"] = page.next_cursor ? ordered_json(*page.next_cursor) : ordered_json(nullptr);
    send_json(res, 200, body);
  }));

  s.Post("/decisions", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    const auto verdict = parse_verdict(required(body, "verdict"));
    if (!verdict || *verdict == Verdict::warning) throw InvalidRequestError("verdict must be 'pass' or 'fail'");
    const DecisionResult r = state_.submit_decision(required(body, "item"), required(body, "system"), *verdict,
                                                    required(body, "annotator"), flag(body, "override"),
                                                    expected_version(body));
    send_json(res, 201, ordered_json{{"event", to_json(r.event)}, {"judgment", to_json(r.judgment)}, {"version", r.version}});
  }));

  s.Post("/rules", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    const auto kind = parse_rule_kind(required(body, "kind"));
    if (!kind) throw InvalidRequestError("kind must be positive, negative or exact");
    const auto dry = param(req, "dry_run");
    const bool dry_run = dry && (*dry == "1" || *dry == "true");
    const std::string annotator = body.contains("annotator") ? required(body, "annotator") : std::string();
    const RuleResult r = state_.add_rule(required(body, "item"), *kind, required(body, "payload"), annotator,
                                         flag(body, "case_insensitive"), dry_run, expected_version(body));
    ordered_json out;
    out["dry_run"] = dry_run;
    out["event"] = r.event ? to_json(*r.event) : ordered_json(nullptr);
    out["transitions"] = ordered_json::array();
    for (const auto& t : r.transitions) {
      out["transitions"].push_back({{"system", t.system},
                                    {"item", t.item},
                                    {"before", to_json(t.before)},
                                    {"after", to_json(t.after)}});
    }
    out["version"] = r.version;
    send_json(res, dry_run ? 200 : 201, out);
  }));

  s.Post("/reevaluate", guarded([this](const httplib::Request&, httplib::Response& res) {
    const auto version = state_.reevaluate();
    ordered_json out;
    out["version"] = version;
    out["systems"] = ordered_json::object();
    for (const auto& [system, set] : state_.snapshot().judgments) {
      const auto c = set.counts();
      out["systems"][system] = {{"pass", c.pass}, {"fail", c.fail}, {"warning", c.warning}};
    }
    send_json(res, 200, out);
  }));

  s.Get("/reports", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto mode = parse_analysis_mode(param(req, "mode").value_or("analysis1"));
    if (!mode) throw InvalidRequestError("unknown mode");
    const auto grouping = parse_grouping(param(req, "grouping").value_or("category"));
    if (!grouping) throw InvalidRequestError("unknown grouping");
    std::optional<std::vector<std::string>> exclude;
    if (const auto e = param(req, "exclude")) exclude = split_commas(*e);
    std::optional<std::size_t> min_n;
    if (const auto m = param(req, "min_n")) min_n = parse_size(*m, "min_n");
    const Table table = state_.report(*mode, *grouping, exclude, min_n);

    const auto format = param(req, "format");
    if (!format || *format == "json") {
      send_json(res, 200, ordered_json{{"version", state_.version()}, {"table", to_json(table)}});
      return;
    }
    const auto fmt = parse_export_format(*format);
    if (!fmt) throw InvalidRequestError("unknown format");
    res.status = 200;
    res.set_content(render(table, *fmt), *fmt == ExportFormat::records ? "application/x-ndjson" : "text/plain; charset=utf-8");
  }));

  s.Get(R"(/items/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const ItemDetail d = state_.item(req.matches[1].str());
    ordered_json out;
    out["id"] = d.item.id;
    out["source"] = d.item.source;
    out["phenomenon"] = d.item.phenomenon;
    out["category"] = d.category;
    out["note"] = d.item.note;
    out["rules"] = to_json(d.item.rules);
    out["judgments"] = ordered_json::array();
    for (std::size_t i = 0; i < d.judgments.size(); ++i) {
      auto j = to_json(d.judgments[i]);
      j["output"] = d.outputs[i] ? ordered_json(*d.outputs[i]) : ordered_json(nullptr);
      out["judgments"].push_back(std::move(j));
    }
    out["version"] = state_.version();
    send_json(res, 200, out);
  }));

  s.Get("/stats", guarded([this](const httplib::Request&, httplib::Response& res) {
    auto body = to_json(state_.stats());
    body["version"] = state_.version();
    send_json(res, 200, body);
  }));
}

}  // namespace mtsuite
