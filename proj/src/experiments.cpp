#include "ordersim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ordersim/apps.hpp"

namespace ordersim {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

// Stable per-cell seed derivation, independent of library hash functions.
std::uint64_t mix_seed(std::uint64_t seed, const std::string& cell_id) {
  return (seed * 0x9E3779B97F4A7C15ULL) ^ fnv1a(cell_id);
}

const AppRule& catalog_rule(const std::vector<AppRule>& catalog, const std::string& id) {
  for (const auto& rule : catalog) {
    if (rule.id == id) return rule;
  }
  throw ConfigError("unknown app id: " + id);
}

// A value that satisfies the variant's predicate, if it has one.
std::optional<double> satisfying_value(const RuleVariant& variant) {
  if (!variant.predicate) return std::nullopt;
  const ValuePredicate& p = *variant.predicate;
  switch (p.op) {
    case CmpOp::Gt:
    case CmpOp::Ge:
      return p.threshold + 5.0;
    case CmpOp::Lt:
    case CmpOp::Le:
      return p.threshold - 5.0;
    case CmpOp::Eq:
      return p.threshold;
  }
  return std::nullopt;
}

EventSpec stimulus_event(const RuleVariant& variant, double ts) {
  return EventSpec{variant.source, variant.event_name, satisfying_value(variant), ts};
}

std::vector<std::string> apps_tagged(int experiment) {
  std::vector<std::string> ids;
  for (const auto& rule : builtin_catalog()) {
    if (rule.experiments.contains(experiment)) ids.push_back(rule.id);
  }
  return ids;
}

struct Exp2Group {
  std::string actuator;
  std::vector<std::string> apps;
};

// Actuators driven by more than one tagged app, with their app sets.
const std::vector<Exp2Group>& exp2_groups() {
  static const std::vector<Exp2Group> groups = {
      {"smart-alarm", {"IoT3"}},
      {"smart-lock", {"IoT4", "IoT5", "IoT6"}},
      {"hue-light", {"TA4", "TA5", "IoT7", "IoT8"}},
      {"smart-plug", {"M2", "IoT9"}},
      {"smart-thermostat", {"TA6", "IoT10", "IoT11"}},
  };
  return groups;
}

// Experiment 3 stimulus orders: (app, variant index) cycles that follow the
// declared temporal relations.
struct Exp3Group {
  std::string id;
  std::vector<std::string> apps;
  std::vector<std::pair<std::string, std::size_t>> cycle;
  std::string relation;
};

const std::vector<Exp3Group>& exp3_groups() {
  static const std::vector<Exp3Group> groups = {
      {"garage", {"M3"}, {{"M3", 0}, {"M3", 1}}, "garage"},
      {"irrigation",
       {"IoT13"},
       {{"IoT13", 0}, {"IoT13", 1}, {"IoT13", 2}, {"IoT13", 3}},
       "irrigation"},
      {"window",
       {"M4", "IoT12"},
       {{"IoT12", 0}, {"M4", 0}, {"M4", 1}, {"IoT12", 1}},
       "window"},
  };
  return groups;
}

const TemporalRelation& relation_by_id(const std::string& id) {
  for (const auto& relation : builtin_relations()) {
    if (relation.id == id) return relation;
  }
  throw ConfigError("unknown temporal relation: " + id);
}

std::string format_period(double period) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", period);
  return buf;
}

}  // namespace

const std::vector<TemporalRelation>& builtin_relations() {
  static const std::vector<TemporalRelation> relations = {
      {"garage",
       {{"garage-lock", "unlock"},
        {"garage-door", "open"},
        {"garage-door", "close"},
        {"garage-lock", "lock"}}},
      {"irrigation",
       {{"sprinkler-valve", "valve-open"},
        {"irrigation-system", "irrigation-start"},
        {"irrigation-system", "irrigation-stop"},
        {"sprinkler-valve", "valve-close"}}},
      {"window",
       {{"window-shade", "shade-open"},
        {"window", "open"},
        {"window", "close"},
        {"window-shade", "shade-close"}}},
  };
  return relations;
}

std::vector<double> default_periods() {
  return {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
}

std::vector<ScenarioConfig> generate_scenarios(int experiment, double period,
                                               std::uint64_t seed) {
  if (experiment < 1 || experiment > 3) {
    throw ConfigError("experiment must be 1, 2 or 3");
  }
  if (period <= 0.0) throw ConfigError("period must be positive");

  std::vector<ScenarioConfig> cells;
  const std::string suffix = "-p" + format_period(period);

  if (experiment == 1) {
    for (const auto& app : apps_tagged(1)) {
      ScenarioConfig cfg;
      cfg.id = "exp1-" + app + suffix;
      cfg.experiment = 1;
      cfg.app_ids = {app};
      cfg.period = period;
      cfg.seed = mix_seed(seed, cfg.id);
      cells.push_back(std::move(cfg));
    }
  } else if (experiment == 2) {
    for (const auto& group : exp2_groups()) {
      ScenarioConfig cfg;
      cfg.id = "exp2-" + group.actuator + suffix;
      cfg.experiment = 2;
      cfg.app_ids = group.apps;
      cfg.period = period;
      cfg.seed = mix_seed(seed, cfg.id);
      cells.push_back(std::move(cfg));
    }
  } else {
    for (const auto& group : exp3_groups()) {
      ScenarioConfig cfg;
      cfg.id = "exp3-" + group.id + suffix;
      cfg.experiment = 3;
      cfg.app_ids = group.apps;
      cfg.period = period;
      cfg.seed = mix_seed(seed, cfg.id);
      cfg.relations = {relation_by_id(group.relation)};
      cells.push_back(std::move(cfg));
    }
  }
  return cells;
}

std::vector<EventSpec> scenario_stimulus(const ScenarioConfig& config,
                                         const std::vector<AppRule>& catalog) {
  if (!config.stimulus.empty()) return config.stimulus;
  if (config.n_events < 1) throw ConfigError("n_events must be >= 1");
  if (config.period <= 0.0) throw ConfigError("period must be positive");

  std::vector<EventSpec> events;

  if (config.experiment == 3) {
    // Match the cell against the built-in cycles by app set.
    const Exp3Group* group = nullptr;
    for (const auto& g : exp3_groups()) {
      if (g.apps == config.app_ids) {
        group = &g;
        break;
      }
    }
    if (!group) throw ConfigError("no experiment-3 cycle for scenario " + config.id);
    const std::size_t total = config.app_ids.size() * static_cast<std::size_t>(config.n_events);
    for (std::size_t k = 0; k < total; ++k) {
      const auto& [app, variant_index] = group->cycle[k % group->cycle.size()];
      const AppRule& rule = catalog_rule(catalog, app);
      events.push_back(
          stimulus_event(rule.variants.at(variant_index), static_cast<double>(k) * config.period));
    }
    return events;
  }

  // Experiments 1 and 2 (and custom cells): sources round-robin across the
  // cell's apps, each app cycling its trigger variants so consecutive
  // stimuli of one app contradict each other. Each app fires with the
  // configured period, so grouped apps interleave period/n_apps apart.
  const std::size_t n_apps = config.app_ids.size();
  if (n_apps == 0) throw ConfigError("scenario " + config.id + " has no apps");
  const std::size_t total = n_apps * static_cast<std::size_t>(config.n_events);
  const double spacing = config.period / static_cast<double>(n_apps);
  std::vector<std::size_t> occurrence(n_apps, 0);
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t app_index = k % n_apps;
    const AppRule& rule = catalog_rule(catalog, config.app_ids[app_index]);
    const RuleVariant& variant =
        rule.variants[occurrence[app_index] % rule.variants.size()];
    ++occurrence[app_index];
    events.push_back(stimulus_event(variant, static_cast<double>(k) * spacing));
  }
  return events;
}

SimulationInput resolve_scenario(const ScenarioConfig& config, const Topology& topology,
                                 const std::vector<AppRule>& catalog) {
  SimulationInput input;
  input.topology = &topology;
  input.seed = config.seed;
  input.scenario_id = config.id;

  for (const auto& app : config.app_ids) {
    AppRule rule = catalog_rule(catalog, app);
    const auto it = config.thresholds.find(app);
    if (it != config.thresholds.end()) {
      for (auto& variant : rule.variants) {
        if (variant.predicate) variant.predicate->threshold = it->second;
      }
    }
    input.rules.push_back(std::move(rule));
  }
  for (const auto& relation : config.relations) topology.validate_relation(relation);
  input.events = scenario_stimulus(config, input.rules);
  return input;
}

StatLine summarize(std::vector<double> values) {
  if (values.empty()) throw AnalysisError("cannot summarize an empty sample");
  std::sort(values.begin(), values.end());
  StatLine line;
  line.min = values.front();
  line.max = values.back();
  double sum = 0.0;
  for (double v : values) sum += v;
  line.mean = sum / static_cast<double>(values.size());
  const std::size_t n = values.size();
  line.median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return line;
}

StatLine ExperimentStats::pooled(double period, const std::string& entity) const {
  std::vector<double> values;
  for (const auto& cell : cells) {
    if (cell.period != period) continue;
    const auto it = cell.mean_rate.find(entity);
    if (it != cell.mean_rate.end()) values.push_back(it->second);
  }
  return summarize(std::move(values));
}

double ExperimentStats::mean(double period, const std::string& entity) const {
  return pooled(period, entity).mean;
}

std::vector<std::string> ExperimentStats::entities() const {
  std::vector<std::string> names;
  for (const auto& cell : cells) {
    for (const auto& [entity, rates] : cell.seed_rates) {
      if (std::find(names.begin(), names.end(), entity) == names.end()) {
        names.push_back(entity);
      }
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

ExperimentStats run_experiment(int experiment, const std::vector<std::uint64_t>& seeds,
                               const std::vector<double>& periods, RateMode mode) {
  if (seeds.empty()) throw ConfigError("run_experiment needs at least one seed");

  const Topology topology = default_topology();
  const std::vector<AppRule>& catalog = builtin_catalog();

  static const std::vector<std::pair<const char*, ComponentKind>> kClasses = {
      {kEntityUserCloud, ComponentKind::UserIotCloud},
      {kEntityTriggerActionCloud, ComponentKind::TriggerActionCloud},
      {kEntityVendorCloud, ComponentKind::VendorCloud},
      {kEntityActuator, ComponentKind::Actuator},
      {kEntityEdge, ComponentKind::Edge},
  };

  ExperimentStats stats;
  stats.experiment = experiment;
  stats.mode = mode;
  stats.periods = periods;

  for (double period : periods) {
    for (ScenarioConfig cfg : generate_scenarios(experiment, period, 0)) {
      CellRates cell;
      cell.cell = cfg.id;
      cell.period = period;
      for (std::uint64_t seed : seeds) {
        cfg.seed = mix_seed(seed, cfg.id);
        Trace trace;
        try {
          trace = run(resolve_scenario(cfg, topology, catalog));
        } catch (const std::exception& e) {
          throw AnalysisError("scenario " + cfg.id + ": " + e.what());
        }
        for (const auto& [entity, kind] : kClasses) {
          try {
            // Experiment 3 judges commands against the declared actuator
            // order, so both sides of an inverted pair count as misordered.
            const double rate =
                (experiment == 3 && kind == ComponentKind::Actuator &&
                 !cfg.relations.empty())
                    ? relation_involvement_rate(trace, cfg.relations, topology)
                    : misordered_rate_at_kind(trace, topology, kind, mode);
            cell.seed_rates[entity].push_back(rate);
          } catch (const AnalysisError&) {
            // Class absent from this cell's paths.
          }
        }
      }
      for (const auto& [entity, rates] : cell.seed_rates) {
        cell.mean_rate[entity] = summarize(rates).mean;
      }
      stats.cells.push_back(std::move(cell));
    }
  }
  return stats;
}

double pair_swap_probability(double path_variance_i, double path_variance_j, double gap) {
  if (path_variance_i < 0.0 || path_variance_j < 0.0) {
    throw ConfigError("path variances must be >= 0");
  }
  const double total = path_variance_i + path_variance_j;
  if (total == 0.0) return 0.0;  // deterministic delays never reorder
  const double z = -gap / std::sqrt(total);
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double path_delay_variance(const Topology& topology, const std::vector<std::string>& path) {
  double variance = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const LinkDelayModel& link =
        topology.link_between(topology.at(path[i]).kind, topology.at(path[i + 1]).kind);
    variance += link.std_dev * link.std_dev;
  }
  return variance;
}

}  // namespace ordersim
