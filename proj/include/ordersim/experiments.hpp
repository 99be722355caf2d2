#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ordersim/detect.hpp"
#include "ordersim/engine.hpp"
#include "ordersim/model.hpp"

namespace ordersim {

// One simulation cell: which apps run, how stimuli are spaced, and the seed.
struct ScenarioConfig {
  std::string id;
  int experiment = 0;  // 1..3, or 0 for custom
  std::vector<std::string> app_ids;
  int n_events = 50;  // per event source
  double period = 0.25;
  std::uint64_t seed = 1;
  std::map<std::string, double> thresholds;  // rule id -> threshold override
  std::vector<TemporalRelation> relations;
  std::vector<EventSpec> stimulus;  // explicit schedule; generated when empty
  std::optional<Topology> topology;          // override, default inventory otherwise
  std::optional<std::vector<AppRule>> rules; // override, built-in catalog otherwise
};

// The three declared actuator orderings used by Experiment 3.
const std::vector<TemporalRelation>& builtin_relations();

// Default stimulus spacing of the experiments: 0.25 s .. 2.0 s in 0.25 steps.
std::vector<double> default_periods();

// Cells of one experiment at one period. Experiment 1 runs each tagged app
// alone; Experiment 2 groups apps sharing an actuator, sources round-robin;
// Experiment 3 follows the declared temporal orders.
std::vector<ScenarioConfig> generate_scenarios(int experiment, double period,
                                               std::uint64_t seed);

// Event schedule of a cell (config.stimulus when given).
std::vector<EventSpec> scenario_stimulus(const ScenarioConfig& config,
                                         const std::vector<AppRule>& catalog);

// Resolves app ids against the catalog, applies threshold overrides and
// builds the stimulus. `topology` must outlive the returned input.
SimulationInput resolve_scenario(const ScenarioConfig& config, const Topology& topology,
                                 const std::vector<AppRule>& catalog);

// Entity-class labels used by the per-experiment statistics.
inline constexpr const char* kEntityUserCloud = "user-cloud";
inline constexpr const char* kEntityTriggerActionCloud = "ta-cloud";
inline constexpr const char* kEntityVendorCloud = "vendor-cloud";
inline constexpr const char* kEntityActuator = "actuator";
inline constexpr const char* kEntityEdge = "edge";

struct StatLine {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double median = 0.0;
};

StatLine summarize(std::vector<double> values);

// Rates of one cell at one period: raw per-seed rates and their mean,
// keyed by entity class.
struct CellRates {
  std::string cell;
  double period = 0.0;
  std::map<std::string, std::vector<double>> seed_rates;
  std::map<std::string, double> mean_rate;
};

struct ExperimentStats {
  int experiment = 0;
  RateMode mode = RateMode::Adjacent;
  std::vector<double> periods;
  std::vector<CellRates> cells;

  // min/max/mean/median over the per-cell mean rates at one period.
  StatLine pooled(double period, const std::string& entity) const;
  double mean(double period, const std::string& entity) const;
  std::vector<std::string> entities() const;
};

ExperimentStats run_experiment(int experiment, const std::vector<std::uint64_t>& seeds,
                               const std::vector<double>& periods,
                               RateMode mode = RateMode::Adjacent);

// Probability that two messages launched `gap` seconds apart swap arrival
// order, given the total delay variance of each path:
// Phi(-gap / sqrt(var_i + var_j)).
double pair_swap_probability(double path_variance_i, double path_variance_j, double gap);

// Sum of squared hop standard deviations along a component path.
double path_delay_variance(const Topology& topology, const std::vector<std::string>& path);

}  // namespace ordersim
