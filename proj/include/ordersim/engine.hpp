#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ordersim/model.hpp"

namespace ordersim {

struct SimClock {
  double now = 0.0;  // virtual seconds, monotone non-decreasing
};

// Seeded random stream with a fixed Gaussian algorithm (Box-Muller over
// explicit 53-bit uniforms), so traces reproduce independently of the
// standard library's distribution internals.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in (0, 1].
  double uniform() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1p-53;
  }

  // Standard normal draw; consumes exactly two uniforms, no caching.
  double normal();

 private:
  std::mt19937_64 gen_;
};

// Strictly positive delay from Normal(mean, std^2): a non-positive draw is
// redrawn up to 8 times, then clamped to 0.001 s.
double sample_hop_delay(const LinkDelayModel& link, GaussianRng& rng);

// A fully resolved simulation: installed rules, the stimulus schedule and
// the seed. Pointed-to topology must outlive the run.
struct SimulationInput {
  const Topology* topology = nullptr;
  std::vector<AppRule> rules;
  std::vector<EventSpec> events;
  std::uint64_t seed = 0;
  std::string scenario_id;
};

// Processes the event queue to exhaustion. Hop delays are sampled the
// moment a delivery is enqueued, in queue-processing order; equal due
// times resolve by insertion sequence. Identical inputs give identical
// traces.
Trace run(const SimulationInput& input);

}  // namespace ordersim
