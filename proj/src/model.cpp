#include "ordersim/model.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_set>

namespace ordersim {

std::string to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Sensor: return "sensor";
    case ComponentKind::MobileApp: return "mobile-app";
    case ComponentKind::VoiceAssistant: return "voice-assistant";
    case ComponentKind::Actuator: return "actuator";
    case ComponentKind::Edge: return "edge";
    case ComponentKind::UserIotCloud: return "user-iot-cloud";
    case ComponentKind::VendorCloud: return "vendor-cloud";
    case ComponentKind::TriggerActionCloud: return "trigger-action-cloud";
  }
  throw ConfigError("unknown component kind");
}

ComponentKind component_kind_from_string(const std::string& s) {
  static const std::map<std::string, ComponentKind> table = {
      {"sensor", ComponentKind::Sensor},
      {"mobile-app", ComponentKind::MobileApp},
      {"voice-assistant", ComponentKind::VoiceAssistant},
      {"actuator", ComponentKind::Actuator},
      {"edge", ComponentKind::Edge},
      {"user-iot-cloud", ComponentKind::UserIotCloud},
      {"vendor-cloud", ComponentKind::VendorCloud},
      {"trigger-action-cloud", ComponentKind::TriggerActionCloud},
  };
  auto it = table.find(s);
  if (it == table.end()) throw ConfigError("unknown component kind: " + s);
  return it->second;
}

LinkClass link_class_of(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::Sensor:
    case ComponentKind::Actuator:
    case ComponentKind::VoiceAssistant:
      return LinkClass::IotDevice;
    case ComponentKind::MobileApp: return LinkClass::MobileApp;
    case ComponentKind::Edge: return LinkClass::Edge;
    case ComponentKind::UserIotCloud: return LinkClass::UserCloud;
    case ComponentKind::VendorCloud: return LinkClass::VendorCloud;
    case ComponentKind::TriggerActionCloud: return LinkClass::TriggerActionCloud;
  }
  throw ConfigError("unknown component kind");
}

std::string to_string(LinkClass c) {
  switch (c) {
    case LinkClass::IotDevice: return "iot-device";
    case LinkClass::MobileApp: return "mobile-app";
    case LinkClass::Edge: return "edge";
    case LinkClass::UserCloud: return "user-iot-cloud";
    case LinkClass::VendorCloud: return "vendor-cloud";
    case LinkClass::TriggerActionCloud: return "trigger-action-cloud";
  }
  throw ConfigError("unknown link class");
}

bool ValuePredicate::holds(const std::optional<double>& value) const {
  if (!value) return false;
  switch (op) {
    case CmpOp::Lt: return *value < threshold;
    case CmpOp::Le: return *value <= threshold;
    case CmpOp::Gt: return *value > threshold;
    case CmpOp::Ge: return *value >= threshold;
    case CmpOp::Eq: return *value == threshold;
  }
  return false;
}

std::string ValuePredicate::to_string() const {
  const char* sym = "";
  switch (op) {
    case CmpOp::Lt: sym = "<"; break;
    case CmpOp::Le: sym = "<="; break;
    case CmpOp::Gt: sym = ">"; break;
    case CmpOp::Ge: sym = ">="; break;
    case CmpOp::Eq: sym = "="; break;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s %g", sym, threshold);
  return buf;
}

ValuePredicate ValuePredicate::parse(const std::string& text) {
  std::istringstream in(text);
  std::string sym;
  double threshold = 0.0;
  if (!(in >> sym >> threshold)) {
    throw ConfigError("malformed value predicate: '" + text + "'");
  }
  ValuePredicate p;
  p.threshold = threshold;
  if (sym == "<") p.op = CmpOp::Lt;
  else if (sym == "<=") p.op = CmpOp::Le;
  else if (sym == ">") p.op = CmpOp::Gt;
  else if (sym == ">=") p.op = CmpOp::Ge;
  else if (sym == "=" || sym == "==") p.op = CmpOp::Eq;
  else throw ConfigError("unknown comparison '" + sym + "' in predicate '" + text + "'");
  return p;
}

bool TemporalRelation::contains(const std::string& actuator, const std::string& command) const {
  return std::find(sequence.begin(), sequence.end(),
                   std::make_pair(actuator, command)) != sequence.end();
}

const ComponentSpec* Topology::find(const std::string& id) const {
  for (const auto& c : components) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const ComponentSpec& Topology::at(const std::string& id) const {
  const ComponentSpec* c = find(id);
  if (!c) throw ConfigError("undeclared component: " + id);
  return *c;
}

const LinkDelayModel& Topology::link_between(ComponentKind x, ComponentKind y) const {
  const LinkClass cx = link_class_of(x);
  const LinkClass cy = link_class_of(y);
  for (const auto& link : links) {
    if (link.connects(cx, cy)) return link;
  }
  // No dedicated trigger-action/vendor row in the delay table; treat it as
  // a generic cloud-to-vendor-cloud connection.
  const bool tac_vendor =
      (cx == LinkClass::TriggerActionCloud && cy == LinkClass::VendorCloud) ||
      (cy == LinkClass::TriggerActionCloud && cx == LinkClass::VendorCloud);
  if (tac_vendor) {
    for (const auto& link : links) {
      if (link.connects(LinkClass::UserCloud, LinkClass::VendorCloud)) return link;
    }
  }
  throw ConfigError("no delay model for link " + to_string(cx) + " <-> " + to_string(cy));
}

void Topology::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& c : components) {
    if (c.id.empty()) throw ConfigError("component with empty id");
    if (!seen.insert(c.id).second) throw ConfigError("duplicate component id: " + c.id);
  }
  for (const auto& link : links) {
    if (link.mean <= 0.0) throw ConfigError("link mean must be > 0");
    if (link.std_dev < 0.0) throw ConfigError("link std must be >= 0");
  }
}

void Topology::validate_rule(const AppRule& rule) const {
  if (rule.variants.empty()) throw ConfigError("rule " + rule.id + " has no variants");
  for (const auto& variant : rule.variants) {
    const ComponentSpec& source = at(variant.source);
    if (source.kind != ComponentKind::Sensor && source.kind != ComponentKind::MobileApp &&
        source.kind != ComponentKind::VoiceAssistant) {
      throw ConfigError("rule " + rule.id + ": source " + variant.source +
                        " is not an event source");
    }
    if (variant.actions.empty()) {
      throw ConfigError("rule " + rule.id + ": variant '" + variant.event_name +
                        "' has no actions");
    }
    for (const auto& action : variant.actions) {
      if (action.path.size() < 2) {
        throw ConfigError("rule " + rule.id + ": path of action '" + action.command +
                          "' is too short");
      }
      if (action.path.front() != variant.source) {
        throw ConfigError("rule " + rule.id + ": path must start at source " + variant.source);
      }
      if (action.path.back() != action.actuator) {
        throw ConfigError("rule " + rule.id + ": path must end at actuator " + action.actuator);
      }
      for (std::size_t i = 0; i + 1 < action.path.size(); ++i) {
        const ComponentSpec& from = at(action.path[i]);
        const ComponentSpec& to = at(action.path[i + 1]);
        link_between(from.kind, to.kind);  // throws if not covered
      }
    }
  }
}

void Topology::validate_relation(const TemporalRelation& relation) const {
  if (relation.sequence.size() < 2) {
    throw ConfigError("temporal relation " + relation.id + " needs at least two entries");
  }
  for (const auto& [actuator, command] : relation.sequence) {
    const ComponentSpec& c = at(actuator);
    if (c.kind != ComponentKind::Actuator) {
      throw ConfigError("temporal relation " + relation.id + ": " + actuator +
                        " is not an actuator");
    }
    (void)command;
  }
}

void Trace::require_complete() const {
  for (const auto& m : messages) {
    if (!m.complete()) {
      throw AnalysisError("message " + std::to_string(m.msg_id) +
                          " has no actuator arrival time");
    }
  }
}

Topology default_topology() {
  Topology topo;
  auto add = [&topo](const std::string& id, ComponentKind kind, const std::string& vendor = "") {
    topo.components.push_back({id, kind, vendor});
  };

  // Event sources
  add("temperature-sensor", ComponentKind::Sensor);
  add("motion-sensor", ComponentKind::Sensor);
  add("doorbell", ComponentKind::Sensor);
  add("smoke-sensor", ComponentKind::Sensor);
  add("presence-sensor-1", ComponentKind::Sensor);
  add("presence-sensor-2", ComponentKind::Sensor);
  add("button", ComponentKind::Sensor);
  add("contact-sensor-door", ComponentKind::Sensor);
  add("contact-sensor-window", ComponentKind::Sensor);
  add("switch", ComponentKind::Sensor);
  add("power-meter", ComponentKind::Sensor);
  add("mobile-app", ComponentKind::MobileApp);
  add("voice-assistant", ComponentKind::VoiceAssistant);

  // Actuators
  add("smart-oven", ComponentKind::Actuator);
  add("smart-plug", ComponentKind::Actuator);
  add("garage-door", ComponentKind::Actuator);
  add("garage-lock", ComponentKind::Actuator);
  add("window", ComponentKind::Actuator);
  add("smart-camera", ComponentKind::Actuator);
  add("smart-fan", ComponentKind::Actuator);
  add("hue-light", ComponentKind::Actuator, "hue");
  add("smart-alarm", ComponentKind::Actuator);
  add("smart-lock", ComponentKind::Actuator);
  add("smart-thermostat", ComponentKind::Actuator);
  add("window-shade", ComponentKind::Actuator);
  add("sprinkler-valve", ComponentKind::Actuator);
  add("irrigation-system", ComponentKind::Actuator);
  add("google-spreadsheet", ComponentKind::Actuator, "google");

  // Hub and clouds
  add("edge", ComponentKind::Edge);
  add("user-iot-cloud", ComponentKind::UserIotCloud);
  add("ifttt-cloud", ComponentKind::TriggerActionCloud);
  add("hue-cloud", ComponentKind::VendorCloud, "hue");
  add("google-cloud", ComponentKind::VendorCloud, "google");
  add("aux-iot-cloud", ComponentKind::VendorCloud);

  topo.links = {
      {LinkClass::IotDevice, LinkClass::Edge, 0.056, 0.007},
      {LinkClass::IotDevice, LinkClass::VendorCloud, 1.4, 0.3},
      {LinkClass::Edge, LinkClass::UserCloud, 1.5, 0.4},
      {LinkClass::Edge, LinkClass::VendorCloud, 1.5, 0.4},
      {LinkClass::MobileApp, LinkClass::UserCloud, 1.5, 0.4},
      {LinkClass::MobileApp, LinkClass::TriggerActionCloud, 2.5, 0.5},
      {LinkClass::UserCloud, LinkClass::TriggerActionCloud, 2.5, 0.5},
      {LinkClass::UserCloud, LinkClass::VendorCloud, 1.5, 0.4},
  };

  topo.validate();
  return topo;
}

}  // namespace ordersim
