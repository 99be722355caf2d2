#include "ordersim/detect.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ordersim {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::P1: return "P1";
    case ViolationKind::P2: return "P2";
    case ViolationKind::P3: return "P3";
  }
  throw AnalysisError("unknown violation kind");
}

std::string to_string(RateMode mode) {
  return mode == RateMode::Adjacent ? "adjacent" : "any";
}

RateMode rate_mode_from_string(const std::string& s) {
  if (s == "adjacent") return RateMode::Adjacent;
  if (s == "any") return RateMode::AnyPredecessor;
  throw ConfigError("unknown rate mode: " + s);
}

namespace {

// True when m_i was created after m_j but its command arrived first.
bool inverted(const MessageRecord& later, const MessageRecord& earlier) {
  return later.ts > earlier.ts && *later.ta < *earlier.ta;
}

void sort_violations(std::vector<Violation>& v) {
  std::sort(v.begin(), v.end());
}

}  // namespace

std::vector<Violation> detect_p1(const Trace& trace) {
  trace.require_complete();
  std::map<std::pair<std::string, std::string>, std::vector<const MessageRecord*>> groups;
  for (const auto& m : trace.messages) groups[{m.source, m.actuator}].push_back(&m);

  std::vector<Violation> out;
  for (const auto& [key, group] : groups) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        const MessageRecord* a = group[i];
        const MessageRecord* b = group[j];
        if (a->command == b->command) continue;
        if (a->ts < b->ts) std::swap(a, b);  // a is the later-created
        if (inverted(*a, *b)) {
          out.push_back({ViolationKind::P1, a->msg_id, b->msg_id, a->actuator});
        }
      }
    }
  }
  sort_violations(out);
  return out;
}

std::vector<Violation> detect_p2(const Trace& trace) {
  trace.require_complete();
  std::map<std::string, std::vector<const MessageRecord*>> by_actuator;
  for (const auto& m : trace.messages) by_actuator[m.actuator].push_back(&m);

  std::vector<Violation> out;
  for (const auto& [actuator, group] : by_actuator) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        const MessageRecord* a = group[i];
        const MessageRecord* b = group[j];
        if (a->source == b->source || a->command == b->command) continue;
        if (a->ts < b->ts) std::swap(a, b);
        if (inverted(*a, *b)) {
          out.push_back({ViolationKind::P2, a->msg_id, b->msg_id, a->actuator});
        }
      }
    }
  }
  sort_violations(out);
  return out;
}

std::vector<Violation> detect_p3(const Trace& trace,
                                 const std::vector<TemporalRelation>& relations,
                                 const Topology& topology) {
  trace.require_complete();
  for (const auto& relation : relations) topology.validate_relation(relation);

  std::set<Violation> unique;
  for (const auto& relation : relations) {
    std::vector<const MessageRecord*> members;
    for (const auto& m : trace.messages) {
      if (relation.contains(m.actuator, m.command)) members.push_back(&m);
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const MessageRecord* a = members[i];
        const MessageRecord* b = members[j];
        if (a->actuator == b->actuator) continue;
        if (a->ts < b->ts) std::swap(a, b);
        if (inverted(*a, *b)) {
          unique.insert({ViolationKind::P3, a->msg_id, b->msg_id, a->actuator});
        }
      }
    }
  }
  return {unique.begin(), unique.end()};
}

std::vector<Violation> brute_force(const Trace& trace, ViolationKind kind,
                                   const std::vector<TemporalRelation>& relations) {
  trace.require_complete();
  const auto& msgs = trace.messages;
  std::set<Violation> unique;
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    for (std::size_t j = 0; j < msgs.size(); ++j) {
      if (i == j) continue;
      const MessageRecord& mi = msgs[i];
      const MessageRecord& mj = msgs[j];
      const bool time_inverted = mi.ts > mj.ts && *mi.ta < *mj.ta;
      bool hit = false;
      switch (kind) {
        case ViolationKind::P1:
          hit = mi.source == mj.source && mi.actuator == mj.actuator &&
                mi.command != mj.command && time_inverted;
          break;
        case ViolationKind::P2:
          hit = mi.source != mj.source && mi.actuator == mj.actuator &&
                mi.command != mj.command && time_inverted;
          break;
        case ViolationKind::P3: {
          bool related = false;
          for (const auto& relation : relations) {
            if (relation.contains(mi.actuator, mi.command) &&
                relation.contains(mj.actuator, mj.command)) {
              related = true;
              break;
            }
          }
          hit = related && mi.actuator != mj.actuator && time_inverted;
          break;
        }
      }
      if (hit) unique.insert({kind, mi.msg_id, mj.msg_id, mi.actuator});
    }
  }
  return {unique.begin(), unique.end()};
}

namespace {

struct Arrival {
  double t = 0.0;
  double ts = 0.0;
  std::uint64_t msg_id = 0;
};

template <typename AtEntity>
std::vector<Arrival> first_arrivals(const Trace& trace, AtEntity at_entity,
                                    bool event_leg_only = false) {
  std::vector<Arrival> arrivals;
  for (const auto& m : trace.messages) {
    const std::size_t limit = event_leg_only ? m.event_leg_hops : m.hops.size();
    for (std::size_t h = 0; h < limit; ++h) {
      const HopArrival& hop = m.hops[h];
      if (at_entity(hop.component)) {
        arrivals.push_back({hop.t, m.ts, m.msg_id});
        break;
      }
    }
  }
  std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.msg_id < b.msg_id;
  });
  return arrivals;
}

std::size_t count_misordered(const std::vector<Arrival>& arrivals, RateMode mode) {
  std::size_t misordered = 0;
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    bool flagged = false;
    if (mode == RateMode::Adjacent) {
      flagged = i > 0 && arrivals[i - 1].ts > arrivals[i].ts;
    } else {
      // Some earlier-created message is still on its way.
      for (std::size_t j = i + 1; j < arrivals.size() && !flagged; ++j) {
        flagged = arrivals[j].ts < arrivals[i].ts;
      }
    }
    if (flagged) ++misordered;
  }
  return misordered;
}

double rate_of(const std::vector<Arrival>& arrivals, RateMode mode) {
  return 100.0 * static_cast<double>(count_misordered(arrivals, mode)) /
         static_cast<double>(arrivals.size());
}

}  // namespace

double misordered_rate(const Trace& trace, const std::string& entity, RateMode mode) {
  const auto arrivals =
      first_arrivals(trace, [&entity](const std::string& c) { return c == entity; });
  if (arrivals.empty()) {
    throw AnalysisError("no arrivals at entity " + entity + "; rate undefined");
  }
  return rate_of(arrivals, mode);
}

double misordered_rate_at_kind(const Trace& trace, const Topology& topology,
                               ComponentKind kind, RateMode mode) {
  // Clouds are measured on the event leg only: a command relayed through a
  // cloud on its way down is not an event arriving there. Actuators and
  // edges see commands, which always count.
  const bool event_leg_only = kind == ComponentKind::UserIotCloud ||
                              kind == ComponentKind::TriggerActionCloud ||
                              kind == ComponentKind::VendorCloud;
  const auto arrivals = first_arrivals(
      trace,
      [&](const std::string& c) {
        const ComponentSpec* spec = topology.find(c);
        return spec && spec->kind == kind;
      },
      event_leg_only);
  if (arrivals.empty()) {
    throw AnalysisError("no arrivals at any " + to_string(kind) + " component; rate undefined");
  }
  return rate_of(arrivals, mode);
}

double relation_involvement_rate(const Trace& trace,
                                 const std::vector<TemporalRelation>& relations,
                                 const Topology& topology) {
  trace.require_complete();
  std::size_t covered = 0;
  for (const auto& m : trace.messages) {
    for (const auto& relation : relations) {
      if (relation.contains(m.actuator, m.command)) {
        ++covered;
        break;
      }
    }
  }
  if (covered == 0) {
    throw AnalysisError("no message is covered by the given temporal relations");
  }
  std::set<std::uint64_t> involved;
  for (const auto& v : detect_p3(trace, relations, topology)) {
    involved.insert(v.later);
    involved.insert(v.earlier);
  }
  return 100.0 * static_cast<double>(involved.size()) / static_cast<double>(covered);
}

MisorderReport build_report(const Trace& trace, const Topology& topology,
                            const std::vector<TemporalRelation>& relations, RateMode mode) {
  trace.require_complete();
  MisorderReport report;
  report.mode = mode;

  std::set<std::string> entities;
  for (const auto& m : trace.messages) {
    for (const auto& hop : m.hops) entities.insert(hop.component);
  }
  for (const auto& entity : entities) {
    const auto arrivals =
        first_arrivals(trace, [&entity](const std::string& c) { return c == entity; });
    const std::size_t misordered = count_misordered(arrivals, mode);
    const ComponentSpec* spec = topology.find(entity);
    report.entities.push_back({entity, spec ? to_string(spec->kind) : "unknown",
                               arrivals.size(), misordered, rate_of(arrivals, mode)});
  }

  report.p1 = detect_p1(trace);
  report.p2 = detect_p2(trace);
  if (!relations.empty()) report.p3 = detect_p3(trace, relations, topology);
  return report;
}

}  // namespace ordersim
