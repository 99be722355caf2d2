#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ordersim {

// Raised for malformed topologies, rules, scenarios and broken references.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a trace cannot be analyzed (incomplete messages, empty input).
class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ComponentKind {
  Sensor,
  MobileApp,
  VoiceAssistant,
  Actuator,
  Edge,
  UserIotCloud,
  VendorCloud,
  TriggerActionCloud,
};

std::string to_string(ComponentKind kind);
ComponentKind component_kind_from_string(const std::string& s);

// Endpoint classes of the delay table. Sensors, actuators and voice
// assistants all count as plain IoT devices for delay lookup.
enum class LinkClass {
  IotDevice,
  MobileApp,
  Edge,
  UserCloud,
  VendorCloud,
  TriggerActionCloud,
};

LinkClass link_class_of(ComponentKind kind);
std::string to_string(LinkClass c);

struct ComponentSpec {
  std::string id;
  ComponentKind kind = ComponentKind::Sensor;
  std::string vendor;  // optional label, e.g. "hue", "google"

  bool operator==(const ComponentSpec&) const = default;
};

// Gaussian processing+network delay between two endpoint classes.
struct LinkDelayModel {
  LinkClass a = LinkClass::IotDevice;
  LinkClass b = LinkClass::Edge;
  double mean = 0.0;     // seconds, > 0
  double std_dev = 0.0;  // seconds, >= 0

  bool connects(LinkClass x, LinkClass y) const {
    return (a == x && b == y) || (a == y && b == x);
  }
  bool operator==(const LinkDelayModel&) const = default;
};

struct EventSpec {
  std::string source;  // component id, the tuple's s
  std::string name;    // event label, the tuple's e
  std::optional<double> value;
  double ts = 0.0;  // virtual seconds at creation

  bool operator==(const EventSpec&) const = default;
};

struct HopArrival {
  std::string component;
  double t = 0.0;  // arrival, virtual seconds

  bool operator==(const HopArrival&) const = default;
};

// End-to-end record of one event-to-command flow.
struct MessageRecord {
  std::uint64_t msg_id = 0;
  std::string rule_id;
  std::string source;      // s
  std::string event_name;  // e
  std::optional<double> event_value;
  std::string actuator;  // a
  std::string command;   // c
  double ts = 0.0;       // creation time of this command
  std::optional<double> ta;  // arrival at the actuator, absent in flight
  // Number of leading hops that belong to the event leg (source to the
  // dispatching cloud); the rest carry the actuation command.
  std::size_t event_leg_hops = 0;
  std::vector<HopArrival> hops;  // arrivals along the rule path, source excluded

  bool complete() const { return ta.has_value(); }
  bool operator==(const MessageRecord&) const = default;
};

enum class CmpOp { Lt, Le, Gt, Ge, Eq };

// Scalar threshold predicate, e.g. "> 30".
struct ValuePredicate {
  CmpOp op = CmpOp::Gt;
  double threshold = 0.0;

  bool holds(const std::optional<double>& value) const;
  std::string to_string() const;
  static ValuePredicate parse(const std::string& text);

  bool operator==(const ValuePredicate&) const = default;
};

struct RuleAction {
  std::string actuator;
  std::string command;
  // Full component path, source first, actuator last. Hops are the
  // consecutive pairs.
  std::vector<std::string> path;

  bool operator==(const RuleAction&) const = default;
};

// One trigger of a rule. Apps that react to opposing stimuli ("start or
// stop the oven") carry one variant per direction.
struct RuleVariant {
  std::string source;
  std::string event_name;
  std::optional<ValuePredicate> predicate;
  std::vector<RuleAction> actions;  // declared actuation order

  bool operator==(const RuleVariant&) const = default;
};

struct AppRule {
  std::string id;
  std::set<int> experiments;  // tag metadata: 1 = *, 2 = dagger, 3 = star
  std::vector<RuleVariant> variants;

  bool operator==(const AppRule&) const = default;
};

// Commands of different actuators that must be received in declared order.
struct TemporalRelation {
  std::string id;
  std::vector<std::pair<std::string, std::string>> sequence;  // (actuator, command)

  bool contains(const std::string& actuator, const std::string& command) const;
  bool operator==(const TemporalRelation&) const = default;
};

struct Topology {
  std::vector<ComponentSpec> components;
  std::vector<LinkDelayModel> links;

  const ComponentSpec* find(const std::string& id) const;
  const ComponentSpec& at(const std::string& id) const;  // throws ConfigError
  // Delay model for a hop between two component kinds. The trigger-action
  // cloud has no dedicated vendor-cloud row; that pair borrows the
  // user-cloud/vendor-cloud parameters.
  const LinkDelayModel& link_between(ComponentKind x, ComponentKind y) const;

  void validate() const;
  void validate_rule(const AppRule& rule) const;
  void validate_relation(const TemporalRelation& relation) const;

  bool operator==(const Topology&) const = default;
};

struct Trace {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::vector<MessageRecord> messages;  // sorted by msg_id

  void require_complete() const;  // AnalysisError naming the first incomplete message
  bool operator==(const Trace&) const = default;
};

// Creation-time stagger between commands spawned by one dispatch, so the
// declared actuation order is visible to the ordering predicates.
inline constexpr double kActionTsStagger = 0.001;

// All times are kept on a microsecond grid so serialized traces round-trip
// exactly.
inline double quantize_us(double t) {
  return std::nearbyint(t * 1e6) / 1e6;
}

// Device inventory and the delay table rows.
Topology default_topology();

}  // namespace ordersim
