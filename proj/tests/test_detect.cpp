#include <random>

#include "doctest.h"
#include "ordersim/apps.hpp"
#include "ordersim/detect.hpp"
#include "ordersim/engine.hpp"

using namespace ordersim;

namespace {

MessageRecord msg(std::uint64_t id, const std::string& source, const std::string& actuator,
                  const std::string& command, double ts, double ta) {
  MessageRecord m;
  m.msg_id = id;
  m.rule_id = "R";
  m.source = source;
  m.event_name = "e";
  m.actuator = actuator;
  m.command = command;
  m.ts = ts;
  m.ta = ta;
  m.hops = {{actuator, ta}};
  m.event_leg_hops = 0;
  return m;
}

Trace trace_of(std::vector<MessageRecord> messages) {
  Trace t;
  t.scenario_id = "synthetic";
  t.messages = std::move(messages);
  return t;
}

}  // namespace

TEST_CASE("a contradicting pair from one source that swaps in flight is a P1 violation") {
  const Trace t = trace_of({msg(0, "app", "oven", "on", 0.25, 4.9),
                            msg(1, "app", "oven", "off", 0.0, 5.1)});
  const auto violations = detect_p1(t);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].later == 0);
  CHECK(violations[0].earlier == 1);
  CHECK(violations[0].entity == "oven");
  CHECK(detect_p2(t).empty());  // same source: P1 territory, never P2
}

TEST_CASE("idempotent repeats never violate") {
  const Trace t = trace_of({msg(0, "app", "oven", "on", 0.25, 4.9),
                            msg(1, "app", "oven", "on", 0.0, 5.1)});
  CHECK(detect_p1(t).empty());
  CHECK(detect_p2(t).empty());
}

TEST_CASE("contradicting sources racing to one actuator is a P2 violation") {
  const Trace t = trace_of({msg(0, "voice", "oven", "oven-on", 0.0, 5.1),
                            msg(1, "mobile", "oven", "oven-off", 0.5, 4.9)});
  const auto violations = detect_p2(t);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].later == 1);
  CHECK(violations[0].earlier == 0);
  CHECK(detect_p1(t).empty());
}

TEST_CASE("detectors refuse incomplete traces") {
  Trace t = trace_of({msg(0, "app", "oven", "on", 0.0, 1.0)});
  t.messages[0].ta.reset();
  CHECK_THROWS_AS(detect_p1(t), AnalysisError);
}

TEST_CASE("the garage door opening before its lock releases is a P3 violation") {
  const Topology topo = default_topology();
  const TemporalRelation garage{
      "garage",
      {{"garage-lock", "unlock"}, {"garage-door", "open"}, {"garage-door", "close"},
       {"garage-lock", "lock"}}};

  const Trace swapped = trace_of({msg(0, "mobile-app", "garage-lock", "unlock", 0.0, 3.5),
                                  msg(1, "mobile-app", "garage-door", "open", 0.001, 3.0)});
  const auto violations = detect_p3(swapped, {garage}, topo);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].later == 1);
  CHECK(violations[0].earlier == 0);

  const Trace ordered = trace_of({msg(0, "mobile-app", "garage-lock", "unlock", 0.0, 3.0),
                                  msg(1, "mobile-app", "garage-door", "open", 0.001, 3.5)});
  CHECK(detect_p3(ordered, {garage}, topo).empty());

  // Inversions outside the declared relation are not P3's business.
  const Trace unrelated = trace_of({msg(0, "mobile-app", "window", "open", 0.0, 3.5),
                                    msg(1, "mobile-app", "smart-fan", "fan-on", 0.001, 3.0)});
  CHECK(detect_p3(unrelated, {garage}, topo).empty());

  const TemporalRelation ghost{"ghost", {{"no-such", "x"}, {"garage-door", "open"}}};
  CHECK_THROWS_AS(detect_p3(swapped, {ghost}, topo), ConfigError);
}

TEST_CASE("detectors agree with the brute-force oracle on random traces") {
  std::mt19937 gen(12345);
  std::uniform_int_distribution<int> n_dist(0, 200);
  std::uniform_int_distribution<int> source_dist(0, 3);
  std::uniform_int_distribution<int> actuator_dist(0, 2);
  std::uniform_int_distribution<int> command_dist(0, 1);
  std::uniform_int_distribution<int> tick_dist(0, 40);

  const std::vector<std::string> sources = {"s1", "s2", "s3", "s4"};
  const std::vector<std::string> actuators = {"a1", "a2", "a3"};
  const std::vector<std::string> commands = {"go", "stop"};
  const std::vector<TemporalRelation> relations = {
      {"r1", {{"a1", "go"}, {"a2", "go"}, {"a2", "stop"}, {"a1", "stop"}}},
      {"r2", {{"a2", "stop"}, {"a3", "go"}}},
  };
  Topology topo;
  for (const auto& a : actuators) topo.components.push_back({a, ComponentKind::Actuator, ""});

  for (int iteration = 0; iteration < 1000; ++iteration) {
    std::vector<MessageRecord> messages;
    const int n = n_dist(gen);
    for (int i = 0; i < n; ++i) {
      // Coarse tick grid on purpose: ties must stay unflagged.
      messages.push_back(msg(static_cast<std::uint64_t>(i), sources[source_dist(gen)],
                             actuators[actuator_dist(gen)], commands[command_dist(gen)],
                             0.1 * tick_dist(gen), 0.1 * tick_dist(gen)));
    }
    const Trace t = trace_of(std::move(messages));
    CHECK(detect_p1(t) == brute_force(t, ViolationKind::P1));
    CHECK(detect_p2(t) == brute_force(t, ViolationKind::P2));
    CHECK(detect_p3(t, relations, topo) == brute_force(t, ViolationKind::P3, relations));
  }
}

TEST_CASE("no pair is reported by both P1 and P2") {
  std::mt19937 gen(99);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<MessageRecord> messages;
  for (int i = 0; i < 120; ++i) {
    messages.push_back(msg(static_cast<std::uint64_t>(i), coin(gen) ? "s1" : "s2", "a",
                           coin(gen) ? "on" : "off", 0.2 * (i % 13), 0.2 * (i % 7)));
  }
  const Trace t = trace_of(std::move(messages));
  for (const auto& v1 : detect_p1(t)) {
    for (const auto& v2 : detect_p2(t)) {
      CHECK_FALSE((v1.later == v2.later && v1.earlier == v2.earlier));
    }
  }
}

TEST_CASE("arrivals in creation order rate at zero") {
  std::vector<MessageRecord> messages;
  for (int i = 0; i < 10; ++i) {
    messages.push_back(msg(static_cast<std::uint64_t>(i), "s", "a", i % 2 ? "on" : "off",
                           0.5 * i, 0.5 * i + 3.0));
  }
  const Trace t = trace_of(std::move(messages));
  CHECK(misordered_rate(t, "a", RateMode::Adjacent) == 0.0);
  CHECK(misordered_rate(t, "a", RateMode::AnyPredecessor) == 0.0);
}

TEST_CASE("a single swapped pair flags one of two messages") {
  const Trace t = trace_of({msg(0, "s", "a", "on", 0.0, 5.1), msg(1, "s", "a", "off", 0.5, 4.9)});
  CHECK(misordered_rate(t, "a", RateMode::Adjacent) == 50.0);
  CHECK(misordered_rate(t, "a", RateMode::AnyPredecessor) == 50.0);
}

TEST_CASE("rates at unknown entities are undefined") {
  const Trace t = trace_of({msg(0, "s", "a", "on", 0.0, 1.0)});
  CHECK_THROWS_AS(misordered_rate(t, "nowhere", RateMode::Adjacent), AnalysisError);
}

TEST_CASE("rate modes parse and print") {
  CHECK(rate_mode_from_string("adjacent") == RateMode::Adjacent);
  CHECK(rate_mode_from_string("any") == RateMode::AnyPredecessor);
  CHECK(to_string(RateMode::Adjacent) == "adjacent");
  CHECK(to_string(RateMode::AnyPredecessor) == "any");
  CHECK_THROWS_AS(rate_mode_from_string("sometimes"), ConfigError);
}

TEST_CASE("both sides of a relation inversion count as involved") {
  const Topology topo = default_topology();
  const TemporalRelation garage{
      "garage", {{"garage-lock", "unlock"}, {"garage-door", "open"}}};
  const Trace swapped = trace_of({msg(0, "m", "garage-lock", "unlock", 0.0, 3.5),
                                  msg(1, "m", "garage-door", "open", 0.001, 3.0)});
  CHECK(relation_involvement_rate(swapped, {garage}, topo) == 100.0);

  const Trace ordered = trace_of({msg(0, "m", "garage-lock", "unlock", 0.0, 3.0),
                                  msg(1, "m", "garage-door", "open", 0.001, 3.5)});
  CHECK(relation_involvement_rate(ordered, {garage}, topo) == 0.0);

  const Trace uncovered = trace_of({msg(0, "m", "window", "open", 0.0, 3.0)});
  CHECK_THROWS_AS(relation_involvement_rate(uncovered, {garage}, topo), AnalysisError);
}

TEST_CASE("reports cover every visited entity with sane counts") {
  const Topology topo = default_topology();
  std::vector<AppRule> rules;
  for (const auto& r : builtin_catalog()) {
    if (r.id == "M4") rules.push_back(r);
  }
  SimulationInput input;
  input.topology = &topo;
  input.rules = rules;
  for (int k = 0; k < 16; ++k) {
    input.events.push_back({"mobile-app", k % 2 ? "close-window" : "open-window",
                            std::nullopt, 0.25 * k});
  }
  input.seed = 21;
  input.scenario_id = "report-test";
  const Trace t = run(input);

  const MisorderReport report = build_report(t, topo, {}, RateMode::Adjacent);
  REQUIRE(report.entities.size() == 3);  // user cloud, edge, window
  for (const auto& e : report.entities) {
    CHECK(e.total == 16);
    CHECK(e.misordered <= e.total);
    CHECK(e.percentage >= 0.0);
    CHECK(e.percentage <= 100.0);
  }
  CHECK(report.p3.empty());  // no relations declared
}
