#include "ordersim/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace ordersim {

using nlohmann::json;

namespace {

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", t);
  return buf;
}

std::string format_rate(double r) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", r);
  return buf;
}

std::string format_period(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", p);
  return buf;
}

std::string json_escape(const std::string& s) {
  return json(s).dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open file for writing: " + path);
  out << content;
  if (!out) throw ConfigError("failed writing file: " + path);
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("malformed " + what + ": " + e.what());
  }
}

const json& require(const json& j, const char* field, const std::string& what) {
  const auto it = j.find(field);
  if (it == j.end()) throw ConfigError(what + ": missing field '" + field + "'");
  return *it;
}

double number_field(const json& j, const char* field, const std::string& what) {
  const json& v = require(j, field, what);
  if (!v.is_number()) throw ConfigError(what + ": field '" + field + "' must be a number");
  return v.get<double>();
}

std::string string_field(const json& j, const char* field, const std::string& what) {
  const json& v = require(j, field, what);
  if (!v.is_string()) throw ConfigError(what + ": field '" + field + "' must be a string");
  return v.get<std::string>();
}

LinkClass link_class_from_string(const std::string& s) {
  for (LinkClass c : {LinkClass::IotDevice, LinkClass::MobileApp, LinkClass::Edge,
                      LinkClass::UserCloud, LinkClass::VendorCloud,
                      LinkClass::TriggerActionCloud}) {
    if (to_string(c) == s) return c;
  }
  throw ConfigError("unknown link endpoint class: " + s);
}

json relation_to_json(const TemporalRelation& relation) {
  json seq = json::array();
  for (const auto& [actuator, command] : relation.sequence) {
    seq.push_back(json::array({actuator, command}));
  }
  return json{{"id", relation.id}, {"sequence", seq}};
}

TemporalRelation relation_from_json(const json& j) {
  const std::string what = "relation";
  TemporalRelation relation;
  relation.id = string_field(j, "id", what);
  const json& seq = require(j, "sequence", what);
  if (!seq.is_array()) throw ConfigError("relation: field 'sequence' must be an array");
  for (const auto& entry : seq) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_string() ||
        !entry[1].is_string()) {
      throw ConfigError("relation " + relation.id +
                        ": sequence entries must be [actuator, command] pairs");
    }
    relation.sequence.emplace_back(entry[0].get<std::string>(), entry[1].get<std::string>());
  }
  return relation;
}

json event_to_json(const EventSpec& event) {
  json j{{"source", event.source}, {"event", event.name}, {"ts", event.ts}};
  j["value"] = event.value ? json(*event.value) : json(nullptr);
  return j;
}

EventSpec event_from_json(const json& j) {
  const std::string what = "stimulus event";
  EventSpec event;
  event.source = string_field(j, "source", what);
  event.name = string_field(j, "event", what);
  event.ts = number_field(j, "ts", what);
  if (j.contains("value") && !j["value"].is_null()) {
    if (!j["value"].is_number()) throw ConfigError(what + ": field 'value' must be a number");
    event.value = j["value"].get<double>();
  }
  return event;
}

json rule_to_json(const AppRule& rule) {
  json variants = json::array();
  for (const auto& variant : rule.variants) {
    json actions = json::array();
    for (const auto& action : variant.actions) {
      actions.push_back({{"actuator", action.actuator},
                         {"command", action.command},
                         {"path", action.path}});
    }
    json v{{"source", variant.source}, {"event", variant.event_name}, {"actions", actions}};
    if (variant.predicate) v["predicate"] = variant.predicate->to_string();
    variants.push_back(std::move(v));
  }
  return json{{"id", rule.id},
              {"experiments", std::vector<int>(rule.experiments.begin(), rule.experiments.end())},
              {"variants", variants}};
}

AppRule rule_from_json(const json& j) {
  AppRule rule;
  rule.id = string_field(j, "id", "rule");
  const std::string what = "rule " + rule.id;
  if (j.contains("experiments")) {
    for (const auto& e : j["experiments"]) rule.experiments.insert(e.get<int>());
  }
  const json& variants = require(j, "variants", what);
  for (const auto& v : variants) {
    RuleVariant variant;
    variant.source = string_field(v, "source", what);
    variant.event_name = string_field(v, "event", what);
    if (v.contains("predicate")) {
      variant.predicate = ValuePredicate::parse(v["predicate"].get<std::string>());
    }
    const json& actions = require(v, "actions", what);
    for (const auto& a : actions) {
      RuleAction action;
      action.actuator = string_field(a, "actuator", what);
      action.command = string_field(a, "command", what);
      const json& path = require(a, "path", what);
      if (!path.is_array()) throw ConfigError(what + ": field 'path' must be an array");
      for (const auto& component : path) action.path.push_back(component.get<std::string>());
      variant.actions.push_back(std::move(action));
    }
    rule.variants.push_back(std::move(variant));
  }
  return rule;
}

json topology_to_json_obj(const Topology& topology) {
  json components = json::array();
  for (const auto& c : topology.components) {
    json jc{{"id", c.id}, {"kind", to_string(c.kind)}};
    if (!c.vendor.empty()) jc["vendor"] = c.vendor;
    components.push_back(std::move(jc));
  }
  json links = json::array();
  for (const auto& link : topology.links) {
    links.push_back({{"a", to_string(link.a)},
                     {"b", to_string(link.b)},
                     {"mean", link.mean},
                     {"std", link.std_dev}});
  }
  return json{{"components", components}, {"links", links}};
}

Topology topology_from_json_obj(const json& j) {
  Topology topology;
  const std::string what = "topology";
  for (const auto& c : require(j, "components", what)) {
    ComponentSpec spec;
    spec.id = string_field(c, "id", what);
    spec.kind = component_kind_from_string(string_field(c, "kind", what));
    if (c.contains("vendor")) spec.vendor = c["vendor"].get<std::string>();
    topology.components.push_back(std::move(spec));
  }
  for (const auto& l : require(j, "links", what)) {
    LinkDelayModel link;
    link.a = link_class_from_string(string_field(l, "a", what));
    link.b = link_class_from_string(string_field(l, "b", what));
    link.mean = number_field(l, "mean", what);
    link.std_dev = number_field(l, "std", what);
    topology.links.push_back(link);
  }
  topology.validate();
  return topology;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
  const json j = parse_json(read_file(path), "scenario file " + path);
  const std::string what = "scenario file " + path;
  ScenarioConfig config;
  config.id = string_field(j, "id", what);
  if (j.contains("experiment")) {
    if (!j["experiment"].is_number_integer()) {
      throw ConfigError(what + ": field 'experiment' must be an integer");
    }
    config.experiment = j["experiment"].get<int>();
  }
  if (j.contains("apps")) {
    if (!j["apps"].is_array()) throw ConfigError(what + ": field 'apps' must be an array");
    for (const auto& app : j["apps"]) config.app_ids.push_back(app.get<std::string>());
  }
  if (j.contains("n_events")) {
    config.n_events = j["n_events"].get<int>();
    if (config.n_events < 1) throw ConfigError(what + ": field 'n_events' must be >= 1");
  }
  if (j.contains("period")) {
    config.period = number_field(j, "period", what);
    if (config.period <= 0.0) throw ConfigError(what + ": field 'period' must be positive");
  }
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("thresholds")) {
    for (const auto& [app, value] : j["thresholds"].items()) {
      if (!value.is_number()) throw ConfigError(what + ": thresholds must be numbers");
      config.thresholds[app] = value.get<double>();
    }
  }
  if (j.contains("relations")) {
    for (const auto& r : j["relations"]) config.relations.push_back(relation_from_json(r));
  }
  if (j.contains("stimulus")) {
    for (const auto& e : j["stimulus"]) config.stimulus.push_back(event_from_json(e));
  }
  if (j.contains("topology")) config.topology = topology_from_json_obj(j["topology"]);
  if (j.contains("rules")) {
    std::vector<AppRule> rules;
    for (const auto& r : j["rules"]) rules.push_back(rule_from_json(r));
    config.rules = std::move(rules);
  }
  return config;
}

std::string scenario_to_json(const ScenarioConfig& config) {
  json j{{"schema_version", kSchemaVersion},
         {"id", config.id},
         {"experiment", config.experiment},
         {"apps", config.app_ids},
         {"n_events", config.n_events},
         {"period", config.period},
         {"seed", config.seed}};
  if (!config.thresholds.empty()) {
    json t = json::object();
    for (const auto& [app, value] : config.thresholds) t[app] = value;
    j["thresholds"] = t;
  }
  if (!config.relations.empty()) {
    json relations = json::array();
    for (const auto& r : config.relations) relations.push_back(relation_to_json(r));
    j["relations"] = relations;
  }
  if (!config.stimulus.empty()) {
    json stimulus = json::array();
    for (const auto& e : config.stimulus) stimulus.push_back(event_to_json(e));
    j["stimulus"] = stimulus;
  }
  if (config.topology) j["topology"] = topology_to_json_obj(*config.topology);
  if (config.rules) {
    json rules = json::array();
    for (const auto& r : *config.rules) rules.push_back(rule_to_json(r));
    j["rules"] = rules;
  }
  return j.dump(2) + "\n";
}

void save_scenario(const ScenarioConfig& config, const std::string& path) {
  write_file(path, scenario_to_json(config));
}

std::string topology_to_json(const Topology& topology) {
  json j = topology_to_json_obj(topology);
  j["schema_version"] = kSchemaVersion;
  return j.dump(2) + "\n";
}

Topology topology_from_json_text(const std::string& text) {
  return topology_from_json_obj(parse_json(text, "topology document"));
}

std::string rules_to_json(const std::vector<AppRule>& rules) {
  json list = json::array();
  for (const auto& rule : rules) list.push_back(rule_to_json(rule));
  return json{{"schema_version", kSchemaVersion}, {"rules", list}}.dump(2) + "\n";
}

std::vector<AppRule> rules_from_json_text(const std::string& text) {
  const json j = parse_json(text, "rules document");
  std::vector<AppRule> rules;
  for (const auto& r : require(j, "rules", "rules document")) {
    rules.push_back(rule_from_json(r));
  }
  return rules;
}

std::vector<TemporalRelation> load_relations(const std::string& path) {
  const json j = parse_json(read_file(path), "relations file " + path);
  const json& list = j.is_array() ? j : require(j, "relations", "relations file " + path);
  std::vector<TemporalRelation> relations;
  for (const auto& r : list) relations.push_back(relation_from_json(r));
  return relations;
}

std::string relations_to_json(const std::vector<TemporalRelation>& relations) {
  json list = json::array();
  for (const auto& r : relations) list.push_back(relation_to_json(r));
  return json{{"schema_version", kSchemaVersion}, {"relations", list}}.dump(2) + "\n";
}

std::string trace_to_jsonl(const Trace& trace) {
  std::ostringstream out;
  out << "{\"schema_version\":" << kSchemaVersion << ",\"type\":\"trace\",\"scenario\":"
      << json_escape(trace.scenario_id) << ",\"seed\":" << trace.seed << "}\n";

  struct Line {
    double t;
    std::uint64_t msg_id;
    std::size_t hop_index;
    std::string text;
  };
  std::vector<Line> lines;
  for (const auto& m : trace.messages) {
    for (std::size_t h = 0; h < m.hops.size(); ++h) {
      const HopArrival& hop = m.hops[h];
      std::ostringstream line;
      line << "{\"msg_id\":" << m.msg_id << ",\"rule\":" << json_escape(m.rule_id)
           << ",\"source\":" << json_escape(m.source)
           << ",\"event\":" << json_escape(m.event_name) << ",\"value\":"
           << (m.event_value ? format_time(*m.event_value) : std::string("null"))
           << ",\"actuator\":" << json_escape(m.actuator)
           << ",\"command\":" << json_escape(m.command) << ",\"ts\":" << format_time(m.ts)
           << ",\"leg\":\"" << (h < m.event_leg_hops ? "event" : "command")
           << "\",\"component\":" << json_escape(hop.component)
           << ",\"t\":" << format_time(hop.t) << "}";
      lines.push_back({hop.t, m.msg_id, h, line.str()});
    }
  }
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.msg_id != b.msg_id) return a.msg_id < b.msg_id;
    return a.hop_index < b.hop_index;
  });
  for (const auto& line : lines) out << line.text << "\n";
  return out.str();
}

void write_trace(const Trace& trace, const std::string& path) {
  write_file(path, trace_to_jsonl(trace));
}

Trace read_trace(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace file " + path + " is empty");
  const json header = parse_json(line, "trace header in " + path);
  if (!header.contains("type") || header["type"] != "trace") {
    throw ConfigError("trace file " + path + ": missing trace header");
  }

  Trace trace;
  trace.scenario_id = string_field(header, "scenario", "trace header");
  trace.seed = header.value("seed", std::uint64_t{0});

  std::map<std::uint64_t, MessageRecord> messages;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const json j = parse_json(line, "trace line " + std::to_string(line_no) + " in " + path);
    const std::string what = "trace line " + std::to_string(line_no);
    const auto msg_id = static_cast<std::uint64_t>(number_field(j, "msg_id", what));

    MessageRecord& m = messages[msg_id];
    if (m.hops.empty()) {
      m.msg_id = msg_id;
      m.rule_id = string_field(j, "rule", what);
      m.source = string_field(j, "source", what);
      m.event_name = string_field(j, "event", what);
      if (!require(j, "value", what).is_null()) m.event_value = j["value"].get<double>();
      m.actuator = string_field(j, "actuator", what);
      m.command = string_field(j, "command", what);
      m.ts = number_field(j, "ts", what);
    }
    // Lines are sorted by arrival time, so hops arrive in order.
    m.hops.push_back({string_field(j, "component", what), number_field(j, "t", what)});
    if (string_field(j, "leg", what) == "event") m.event_leg_hops = m.hops.size();
  }

  for (auto& [msg_id, m] : messages) {
    if (!m.hops.empty()) m.ta = m.hops.back().t;
    trace.messages.push_back(std::move(m));
  }
  // std::map iteration already yields ascending msg_id.
  return trace;
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw ConfigError("unknown report format: " + s);
}

namespace {

json violations_to_json(const std::vector<Violation>& violations) {
  json list = json::array();
  for (const auto& v : violations) {
    list.push_back({{"later", v.later}, {"earlier", v.earlier}, {"entity", v.entity}});
  }
  return list;
}

}  // namespace

std::string report_to_json(const MisorderReport& report) {
  json entities = json::array();
  for (const auto& e : report.entities) {
    entities.push_back({{"entity", e.entity},
                        {"kind", e.kind},
                        {"total", e.total},
                        {"misordered", e.misordered},
                        {"percentage", e.percentage}});
  }
  json j{{"schema_version", kSchemaVersion},
         {"mode", to_string(report.mode)},
         {"entities", entities},
         {"violations",
          {{"p1", violations_to_json(report.p1)},
           {"p2", violations_to_json(report.p2)},
           {"p3", violations_to_json(report.p3)}}}};
  return j.dump(2) + "\n";
}

std::string report_to_csv(const MisorderReport& report) {
  std::ostringstream out;
  out << "entity,kind,total,misordered,percentage\n";
  for (const auto& e : report.entities) {
    out << e.entity << ',' << e.kind << ',' << e.total << ',' << e.misordered << ','
        << format_rate(e.percentage) << "\n";
  }
  return out.str();
}

void write_report(const MisorderReport& report, const std::string& path, ReportFormat format) {
  write_file(path, format == ReportFormat::Csv ? report_to_csv(report)
                                               : report_to_json(report));
}

std::string stats_to_csv(const ExperimentStats& stats) {
  std::ostringstream out;
  out << "period,entity,app,min,max,mean,median\n";
  const auto entities = stats.entities();
  for (double period : stats.periods) {
    for (const auto& entity : entities) {
      bool any = false;
      for (const auto& cell : stats.cells) {
        if (cell.period != period) continue;
        const auto it = cell.seed_rates.find(entity);
        if (it == cell.seed_rates.end()) continue;
        any = true;
        const StatLine line = summarize(it->second);
        out << format_period(period) << ',' << entity << ',' << cell.cell << ','
            << format_rate(line.min) << ',' << format_rate(line.max) << ','
            << format_rate(line.mean) << ',' << format_rate(line.median) << "\n";
      }
      if (any) {
        const StatLine pooled = stats.pooled(period, entity);
        out << format_period(period) << ',' << entity << ",ALL," << format_rate(pooled.min)
            << ',' << format_rate(pooled.max) << ',' << format_rate(pooled.mean) << ','
            << format_rate(pooled.median) << "\n";
      }
    }
  }
  return out.str();
}

std::string stats_to_plot_json(const ExperimentStats& stats) {
  json series = json::object();
  for (const auto& entity : stats.entities()) {
    json s{{"periods", json::array()},
           {"min", json::array()},
           {"max", json::array()},
           {"mean", json::array()},
           {"median", json::array()}};
    for (double period : stats.periods) {
      bool any = false;
      for (const auto& cell : stats.cells) {
        if (cell.period == period && cell.mean_rate.contains(entity)) {
          any = true;
          break;
        }
      }
      if (!any) continue;
      const StatLine line = stats.pooled(period, entity);
      s["periods"].push_back(period);
      s["min"].push_back(line.min);
      s["max"].push_back(line.max);
      s["mean"].push_back(line.mean);
      s["median"].push_back(line.median);
    }
    series[entity] = std::move(s);
  }
  json j{{"schema_version", kSchemaVersion},
         {"experiment", stats.experiment},
         {"mode", to_string(stats.mode)},
         {"series", series}};
  return j.dump(2) + "\n";
}

void write_stats(const ExperimentStats& stats, const std::string& csv_path,
                 const std::string& plot_path) {
  write_file(csv_path, stats_to_csv(stats));
  write_file(plot_path, stats_to_plot_json(stats));
}

}  // namespace ordersim
