#pragma once

#include <string>
#include <vector>

#include "ordersim/detect.hpp"
#include "ordersim/experiments.hpp"
#include "ordersim/model.hpp"

namespace ordersim {

inline constexpr int kSchemaVersion = 1;

// Scenario document (single JSON object). Unknown app ids, bad kinds and
// malformed fields raise ConfigError naming the field.
ScenarioConfig load_scenario(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& config);
void save_scenario(const ScenarioConfig& config, const std::string& path);

// Topology and rule schemas shared by scenario overrides and the catalog
// export. All serialization is deterministic.
std::string topology_to_json(const Topology& topology);
Topology topology_from_json_text(const std::string& text);
std::string rules_to_json(const std::vector<AppRule>& rules);
std::vector<AppRule> rules_from_json_text(const std::string& text);

std::vector<TemporalRelation> load_relations(const std::string& path);
std::string relations_to_json(const std::vector<TemporalRelation>& relations);

// Trace persistence: JSON lines, a header object followed by one line per
// hop arrival, sorted by arrival time. Times carry microsecond precision;
// read(write(trace)) == trace.
std::string trace_to_jsonl(const Trace& trace);
void write_trace(const Trace& trace, const std::string& path);
Trace read_trace(const std::string& path);

enum class ReportFormat { Csv, Json };
ReportFormat report_format_from_string(const std::string& s);

void write_report(const MisorderReport& report, const std::string& path, ReportFormat format);
std::string report_to_json(const MisorderReport& report);
std::string report_to_csv(const MisorderReport& report);

// Experiment statistics: CSV rows per (period, entity, app) plus pooled
// "ALL" rows, and a plot-ready JSON series keyed by entity class.
std::string stats_to_csv(const ExperimentStats& stats);
std::string stats_to_plot_json(const ExperimentStats& stats);
void write_stats(const ExperimentStats& stats, const std::string& csv_path,
                 const std::string& plot_path);

}  // namespace ordersim
