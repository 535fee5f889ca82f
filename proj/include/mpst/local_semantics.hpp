#pragma once

// Configurations (one local type per participant) evolving by synchronous
// handshakes, and the per-participant trace sets they generate.
//
// A step consumes a dual send/recv or select/offer pair and leaves every
// other entry untouched. Unfoldings of local recursion are charged to the
// same budget notion as on the global side, summing both endpoints.

#include <cassert>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "global_semantics.hpp"
#include "projection.hpp"

namespace mpst {

enum class Polarity { Send, Recv };

// One endpoint's view of a handshake. Rendered from the actor's side and
// naming the peer: in P's log, "I!PId,DId" is P sending PId,DId to I and
// "D?Prescr" is P receiving Prescr from D.
struct LocalAction {
  Participant actor;
  Polarity polarity;
  Participant peer;
  Payload payload;

  friend bool operator==(const LocalAction& a, const LocalAction& b) {
    return a.actor == b.actor && a.polarity == b.polarity && a.peer == b.peer &&
           a.payload == b.payload;
  }
  friend bool operator!=(const LocalAction& a, const LocalAction& b) { return !(a == b); }
  friend bool operator<(const LocalAction& a, const LocalAction& b) {
    if (a.actor != b.actor) return a.actor < b.actor;
    if (a.polarity != b.polarity) return a.polarity == Polarity::Send;
    if (a.peer != b.peer) return a.peer < b.peer;
    return a.payload < b.payload;
  }
};

inline std::string action_text(const LocalAction& a) {
  std::ostringstream os;
  os << a.peer.name() << (a.polarity == Polarity::Send ? '!' : '?') << payload_name(a.payload);
  return os.str();
}

// Steps a single local type can offer, before pairing. Recursion is unfolded
// transparently; `unfoldings` counts how many unfold layers were crossed.
struct LocalStep {
  Polarity polarity;
  Participant peer;
  Payload payload;
  LocalType next;
  int unfoldings = 0;
};

inline std::vector<LocalStep> local_steps(const LocalType& t) {
  switch (t.kind()) {
    case LocalType::Kind::End:
    case LocalType::Kind::Var:
      return {};
    case LocalType::Kind::Send:
      return {{Polarity::Send, t.peer(), Payload(t.sort()), t.continuation(), 0}};
    case LocalType::Kind::Recv:
      return {{Polarity::Recv, t.peer(), Payload(t.sort()), t.continuation(), 0}};
    case LocalType::Kind::Select: {
      std::vector<LocalStep> out;
      for (const auto& arm : t.arms())
        out.push_back({Polarity::Send, t.peer(), Payload(arm.label), arm.body, 0});
      return out;
    }
    case LocalType::Kind::Offer: {
      std::vector<LocalStep> out;
      for (const auto& arm : t.arms())
        out.push_back({Polarity::Recv, t.peer(), Payload(arm.label), arm.body, 0});
      return out;
    }
    case LocalType::Kind::Rec: {
      auto out = local_steps(subst(t.body(), t.rec_var(), t));
      for (auto& step : out) step.unfoldings += 1;
      return out;
    }
  }
  return {};
}

using Configuration = std::map<Participant, LocalType>;

inline Configuration project_all(const GlobalType& g) {
  Configuration c;
  for (const auto& p : participants(g)) c.emplace(p, project(g, p));
  return c;
}

inline bool is_terminated(const Configuration& c) {
  for (const auto& [p, t] : c) {
    (void)p;
    const LocalType* at = &t;
    while (at->kind() == LocalType::Kind::Rec) at = &at->body();
    if (at->kind() != LocalType::Kind::End) return false;
  }
  return true;
}

struct SyncStep {
  LocalAction send;  // sender's half
  LocalAction recv;  // receiver's half
  Configuration next;
  int unfoldings = 0;  // both endpoints' unfoldings summed
};

inline std::vector<SyncStep> config_steps(const Configuration& c) {
  std::vector<SyncStep> out;
  for (const auto& [sender, sender_type] : c) {
    for (const auto& s : local_steps(sender_type)) {
      if (s.polarity != Polarity::Send) continue;
      auto peer_entry = c.find(s.peer);
      if (peer_entry == c.end()) continue;
      for (const auto& r : local_steps(peer_entry->second)) {
        if (r.polarity != Polarity::Recv) continue;
        if (r.peer != sender || r.payload != s.payload) continue;
        Configuration next = c;
        next.at(sender) = s.next;
        next.at(s.peer) = r.next;
#ifndef NDEBUG
        // Frame property: the handshake touches exactly its two endpoints.
        for (const auto& [p, t] : c)
          assert(p == sender || p == s.peer || alpha_equal(next.at(p), t));
#endif
        out.push_back({LocalAction{sender, Polarity::Send, s.peer, s.payload},
                       LocalAction{s.peer, Polarity::Recv, sender, s.payload},
                       std::move(next), s.unfoldings + r.unfoldings});
      }
    }
  }
  return out;
}

// Per-participant action log of one run. Participants that never move are
// omitted rather than mapped to an empty sequence.
struct ConfigTrace {
  std::map<Participant, std::vector<LocalAction>> actions;

  friend bool operator==(const ConfigTrace& a, const ConfigTrace& b) {
    return a.actions == b.actions;
  }
  friend bool operator!=(const ConfigTrace& a, const ConfigTrace& b) { return !(a == b); }
  friend bool operator<(const ConfigTrace& a, const ConfigTrace& b) {
    return a.actions < b.actions;
  }
};

// Appends both halves of one global event to the trace under construction:
// the sender logs a send, the receiver logs a receive.
inline void identify(ConfigTrace& trace, const Prefix& event) {
  trace.actions[event.sender()].push_back(
      LocalAction{event.sender(), Polarity::Send, event.receiver(), event.payload()});
  trace.actions[event.receiver()].push_back(
      LocalAction{event.receiver(), Polarity::Recv, event.sender(), event.payload()});
}

struct ConfigTraceSet {
  std::set<ConfigTrace> terminated;  // every entry reached end
  std::set<ConfigTrace> truncated;   // cut short by the unroll budget
  bool deadlock_free = true;         // no stuck, non-terminated configuration reached

  friend bool operator==(const ConfigTraceSet& a, const ConfigTraceSet& b) {
    return a.terminated == b.terminated && a.truncated == b.truncated &&
           a.deadlock_free == b.deadlock_free;
  }
  friend bool operator!=(const ConfigTraceSet& a, const ConfigTraceSet& b) { return !(a == b); }
};

inline std::string configuration_key(const Configuration& c) {
  std::string key;
  for (const auto& [p, t] : c) {
    key += p.name();
    key += '=';
    key += canonical_key(t);
    key += '|';
  }
  return key;
}

inline ConfigTraceSet config_traces(const Configuration& start, UnrollBudget budget) {
  if (budget.k < 0) throw Error("unroll budget must be non-negative");
  ConfigTraceSet result;
  // Depth-first over (configuration, remaining budget); cycles cannot occur
  // because every revisit of a configuration costs at least one unfolding.
  auto walk = [&](auto&& self, const Configuration& c, ConfigTrace& log, int left) -> void {
    auto steps = config_steps(c);
    if (steps.empty()) {
      if (is_terminated(c))
        result.terminated.insert(log);
      else
        result.deadlock_free = false;
      return;
    }
    bool any_affordable = false;
    for (const auto& step : steps) {
      if (step.unfoldings > left) continue;
      any_affordable = true;
      log.actions[step.send.actor].push_back(step.send);
      log.actions[step.recv.actor].push_back(step.recv);
      self(self, step.next, log, left - step.unfoldings);
      log.actions[step.recv.actor].pop_back();
      if (log.actions[step.recv.actor].empty()) log.actions.erase(step.recv.actor);
      log.actions[step.send.actor].pop_back();
      if (log.actions[step.send.actor].empty()) log.actions.erase(step.send.actor);
    }
    if (!any_affordable) result.truncated.insert(log);
  };
  ConfigTrace log;
  walk(walk, start, log, budget.k);
  return result;
}

// The meaning of a global type on the configuration side: project every
// participant and collect the runs of the resulting configuration.
inline ConfigTraceSet denotation(const GlobalType& g, UnrollBudget budget) {
  return config_traces(project_all(g), budget);
}

}  // namespace mpst
