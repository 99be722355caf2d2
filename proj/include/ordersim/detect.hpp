#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordersim/model.hpp"

namespace ordersim {

enum class ViolationKind { P1, P2, P3 };

std::string to_string(ViolationKind kind);

// One misordered message pair. `later` was created after `earlier`
// (ts_later > ts_earlier) but overtook it (ta_later < ta_earlier).
struct Violation {
  ViolationKind kind = ViolationKind::P1;
  std::uint64_t later = 0;
  std::uint64_t earlier = 0;
  std::string entity;  // where the inversion manifests

  bool operator==(const Violation&) const = default;
  auto operator<=>(const Violation&) const = default;
};

// Same source, same actuator, different commands, creation and arrival
// order disagree.
std::vector<Violation> detect_p1(const Trace& trace);

// Different sources, same actuator, different commands, inverted.
std::vector<Violation> detect_p2(const Trace& trace);

// Actuator pairs covered by one declared temporal relation, inverted.
std::vector<Violation> detect_p3(const Trace& trace,
                                 const std::vector<TemporalRelation>& relations,
                                 const Topology& topology);

// Literal O(n^2) evaluation of the chosen predicate over all ordered
// pairs; the testing oracle for the detectors above.
std::vector<Violation> brute_force(const Trace& trace, ViolationKind kind,
                                   const std::vector<TemporalRelation>& relations = {});

// How a message counts as misordered at an entity.
//   Adjacent: its immediate predecessor in arrival order was created later.
//   AnyPredecessor: some earlier-created message arrives after it.
enum class RateMode { Adjacent, AnyPredecessor };

std::string to_string(RateMode mode);
RateMode rate_mode_from_string(const std::string& s);

// Percentage of misordered arrivals at one entity (a message's first
// arrival there). Throws AnalysisError when nothing arrives at the entity.
double misordered_rate(const Trace& trace, const std::string& entity,
                       RateMode mode = RateMode::Adjacent);

// Same, pooled over every component of the given kind. Cloud kinds count
// event-leg arrivals only (commands relayed through a cloud are not events
// arriving there); actuators and edges count every arrival.
double misordered_rate_at_kind(const Trace& trace, const Topology& topology,
                               ComponentKind kind, RateMode mode = RateMode::Adjacent);

// Percentage of relation-covered commands that take part in at least one
// ordering violation of their declared relation. Both sides of an inverted
// pair count: each such command reached its actuator out of the declared
// order relative to the other.
double relation_involvement_rate(const Trace& trace,
                                 const std::vector<TemporalRelation>& relations,
                                 const Topology& topology);

struct EntityRate {
  std::string entity;
  std::string kind;
  std::size_t total = 0;
  std::size_t misordered = 0;
  double percentage = 0.0;

  bool operator==(const EntityRate&) const = default;
};

// Per-entity misordered percentages plus the violations of each detector.
struct MisorderReport {
  RateMode mode = RateMode::Adjacent;
  std::vector<EntityRate> entities;  // every entity that logs an arrival
  std::vector<Violation> p1;
  std::vector<Violation> p2;
  std::vector<Violation> p3;

  bool operator==(const MisorderReport&) const = default;
};

MisorderReport build_report(const Trace& trace, const Topology& topology,
                            const std::vector<TemporalRelation>& relations,
                            RateMode mode = RateMode::Adjacent);

}  // namespace ordersim
