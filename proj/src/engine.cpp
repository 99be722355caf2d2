#include "ordersim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "ordersim/apps.hpp"

namespace ordersim {

double GaussianRng::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_hop_delay(const LinkDelayModel& link, GaussianRng& rng) {
  for (int attempt = 0; attempt < 9; ++attempt) {
    const double d = link.mean + link.std_dev * rng.normal();
    if (d > 0.0) return d;
  }
  return 0.001;
}

namespace {

struct PendingDelivery {
  double due = 0.0;
  std::uint64_t tie_break = 0;  // insertion sequence
  std::size_t flow = 0;
  std::size_t position = 0;  // index into the flow's path
};

struct DeliveryLater {
  bool operator()(const PendingDelivery& a, const PendingDelivery& b) const {
    if (a.due != b.due) return a.due > b.due;
    return a.tie_break > b.tie_break;
  }
};

// One traveling unit: first the event on its way to the dispatching cloud
// (a carrier), then each spawned actuation command.
struct Flow {
  const AppRule* rule = nullptr;
  const RuleVariant* variant = nullptr;
  EventSpec event;
  std::vector<std::string> path;
  std::vector<HopArrival> hops;      // carrier only
  bool carrier = false;
  std::size_t dispatch_index = 0;    // carrier: path index of the spawn point
  std::size_t message_slot = 0;      // message flows: index into messages
};

// Path index of the cloud that evaluates the rule and issues commands:
// the trigger-action cloud when the path has one, otherwise the last user
// IoT cloud. Every component before it relays the event; everything after
// carries the actuation command.
std::size_t dispatch_index_of(const Topology& topo, const std::vector<std::string>& path) {
  std::size_t last_user_cloud = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const ComponentKind kind = topo.at(path[i]).kind;
    if (kind == ComponentKind::TriggerActionCloud) return i;
    if (kind == ComponentKind::UserIotCloud) last_user_cloud = i;
  }
  return last_user_cloud;  // 0 when no cloud: commands spawn at the source
}

class Simulator {
 public:
  explicit Simulator(const SimulationInput& input)
      : input_(input), topo_(*input.topology), rng_(input.seed) {}

  Trace execute() {
    validate();
    inject_events();
    process_queue();
    finalize();
    Trace trace;
    trace.scenario_id = input_.scenario_id;
    trace.seed = input_.seed;
    trace.messages = std::move(messages_);
    return trace;
  }

 private:
  void validate() const {
    topo_.validate();
    for (const auto& rule : input_.rules) topo_.validate_rule(rule);
    for (const auto& event : input_.events) {
      if (!topo_.find(event.source)) {
        throw ConfigError("event source not declared in topology: " + event.source);
      }
      if (event.ts < 0.0) throw ConfigError("event ts must be >= 0");
    }
  }

  void enqueue(std::size_t flow, std::size_t position, double from_time) {
    const Flow& f = flows_[flow];
    const ComponentKind from = topo_.at(f.path[position - 1]).kind;
    const ComponentKind to = topo_.at(f.path[position]).kind;
    const double delay = sample_hop_delay(topo_.link_between(from, to), rng_);
    queue_.push({quantize_us(from_time + delay), next_tie_break_++, flow, position});
  }

  void inject_events() {
    std::vector<EventSpec> events = input_.events;
    std::stable_sort(events.begin(), events.end(),
                     [](const EventSpec& a, const EventSpec& b) { return a.ts < b.ts; });
    for (EventSpec& event : events) {
      event.ts = quantize_us(event.ts);
      for (const RuleMatch& match : match_rules(event, input_.rules)) {
        start_flow(event, match);
      }
    }
  }

  void start_flow(const EventSpec& event, const RuleMatch& match) {
    // All actions of a variant share the path up to the dispatching cloud;
    // the event travels that prefix once.
    const std::vector<std::string>& first_path = match.variant->actions.front().path;
    const std::size_t dispatch = dispatch_index_of(topo_, first_path);
    for (const auto& action : match.variant->actions) {
      if (action.path.size() <= dispatch ||
          !std::equal(first_path.begin(), first_path.begin() + dispatch + 1,
                      action.path.begin())) {
        throw ConfigError("rule " + match.rule->id +
                          ": action paths diverge before the dispatching cloud");
      }
    }

    Flow flow;
    flow.rule = match.rule;
    flow.variant = match.variant;
    flow.event = event;
    flow.path = first_path;
    flow.carrier = true;
    flow.dispatch_index = dispatch;
    flows_.push_back(std::move(flow));

    if (dispatch == 0) {
      spawn_messages(flows_.size() - 1, event.ts);
    } else {
      enqueue(flows_.size() - 1, 1, event.ts);
    }
  }

  void spawn_messages(std::size_t carrier_index, double now) {
    // Copy the carrier's fields up front: spawning appends to flows_ and may
    // invalidate references.
    const Flow carrier = flows_[carrier_index];
    for (std::size_t k = 0; k < carrier.variant->actions.size(); ++k) {
      const RuleAction& action = carrier.variant->actions[k];

      MessageRecord msg;
      msg.msg_id = next_msg_id_++;
      msg.rule_id = carrier.rule->id;
      msg.source = carrier.event.source;
      msg.event_name = carrier.event.name;
      msg.event_value = carrier.event.value;
      msg.actuator = action.actuator;
      msg.command = action.command;
      msg.ts = quantize_us(carrier.event.ts + static_cast<double>(k) * kActionTsStagger);
      msg.event_leg_hops = carrier.hops.size();
      msg.hops = carrier.hops;

      Flow mflow;
      mflow.rule = carrier.rule;
      mflow.variant = carrier.variant;
      mflow.event = carrier.event;
      mflow.path = action.path;
      mflow.carrier = false;
      mflow.message_slot = messages_.size();
      messages_.push_back(std::move(msg));
      flows_.push_back(std::move(mflow));

      const std::size_t flow_index = flows_.size() - 1;
      if (carrier.dispatch_index + 1 < action.path.size()) {
        enqueue(flow_index, carrier.dispatch_index + 1, now);
      } else {
        messages_[flows_[flow_index].message_slot].ta = now;
      }
    }
  }

  void process_queue() {
    while (!queue_.empty()) {
      const PendingDelivery delivery = queue_.top();
      queue_.pop();
      clock_.now = delivery.due;

      Flow& flow = flows_[delivery.flow];
      const HopArrival arrival{flow.path[delivery.position], delivery.due};

      if (flow.carrier) {
        flow.hops.push_back(arrival);
        if (delivery.position == flow.dispatch_index) {
          spawn_messages(delivery.flow, delivery.due);
        } else {
          enqueue(delivery.flow, delivery.position + 1, delivery.due);
        }
      } else {
        MessageRecord& msg = messages_[flow.message_slot];
        msg.hops.push_back(arrival);
        if (delivery.position + 1 < flow.path.size()) {
          enqueue(delivery.flow, delivery.position + 1, delivery.due);
        } else {
          msg.ta = delivery.due;
        }
      }
    }
  }

  void finalize() const {
    for (const auto& msg : messages_) {
      if (!msg.complete()) {
        throw AnalysisError("message " + std::to_string(msg.msg_id) +
                            " never reached its actuator");
      }
    }
  }

  const SimulationInput& input_;
  const Topology& topo_;
  GaussianRng rng_;
  SimClock clock_;
  std::vector<Flow> flows_;
  std::vector<MessageRecord> messages_;
  std::priority_queue<PendingDelivery, std::vector<PendingDelivery>, DeliveryLater> queue_;
  std::uint64_t next_tie_break_ = 0;
  std::uint64_t next_msg_id_ = 0;
};

}  // namespace

Trace run(const SimulationInput& input) {
  if (!input.topology) throw ConfigError("simulation input has no topology");
  return Simulator(input).execute();
}

}  // namespace ordersim
