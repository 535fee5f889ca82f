#pragma once

// JSON encodings of the library's value types, as emitted by the CLI. All
// encoders are explicit functions; nothing here is needed to use the library
// itself.

#include <json.hpp>

#include <string>

#include "ast.hpp"
#include "combinators.hpp"
#include "equiv.hpp"
#include "global_semantics.hpp"
#include "local_semantics.hpp"
#include "parser.hpp"
#include "projection.hpp"
#include "wellformed.hpp"

namespace mpst {

inline nlohmann::json event_json(const Prefix& e) {
  return nlohmann::json{{"from", e.sender().name()},
                        {"to", e.receiver().name()},
                        {"payload", payload_name(e.payload())},
                        {"kind", is_value_payload(e.payload()) ? "value" : "label"}};
}

inline nlohmann::json trace_json(const GlobalTrace& t) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : t) out.push_back(event_json(e));
  return out;
}

inline nlohmann::json trace_set_json(const TraceSet& ts) {
  nlohmann::json maximal = nlohmann::json::array();
  for (const auto& t : ts.maximal) maximal.push_back(trace_json(t));
  nlohmann::json truncated = nlohmann::json::array();
  for (const auto& t : ts.truncated) truncated.push_back(trace_json(t));
  return nlohmann::json{{"maximal", maximal}, {"truncated", truncated}};
}

inline nlohmann::json config_trace_json(const ConfigTrace& ct) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [p, actions] : ct.actions) {
    nlohmann::json seq = nlohmann::json::array();
    for (const auto& a : actions) seq.push_back(action_text(a));
    out[p.name()] = seq;
  }
  return out;
}

inline nlohmann::json config_trace_set_json(const ConfigTraceSet& cs) {
  nlohmann::json terminated = nlohmann::json::array();
  for (const auto& t : cs.terminated) terminated.push_back(config_trace_json(t));
  nlohmann::json truncated = nlohmann::json::array();
  for (const auto& t : cs.truncated) truncated.push_back(config_trace_json(t));
  return nlohmann::json{
      {"terminated", terminated}, {"truncated", truncated}, {"deadlock_free", cs.deadlock_free}};
}

inline std::string family_name(Family f) {
  switch (f) {
    case Family::SwapPrefix:
      return "swap-prefix";
    case Family::ContrExp:
      return "contr-exp";
    case Family::BranchDistrib:
      return "branch-distrib";
  }
  return "";
}

inline std::string direction_name(Direction d) {
  return d == Direction::Forward ? "forward" : "inverse";
}

inline nlohmann::json site_json(const RewriteSite& s) {
  return nlohmann::json{{"family", family_name(s.family)},
                        {"path", s.path},
                        {"direction", direction_name(s.direction)},
                        {"index", s.index}};
}

inline nlohmann::json witness_json(const Witness& w) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : w) out.push_back(site_json(s));
  return out;
}

inline nlohmann::json violation_json(const Violation& v) {
  return nlohmann::json{{"rule", v.rule}, {"path", v.path}, {"message", v.message}};
}

inline nlohmann::json local_type_json(const LocalType& t) {
  using Kind = LocalType::Kind;
  switch (t.kind()) {
    case Kind::End:
      return nlohmann::json{{"kind", "end"}};
    case Kind::Var:
      return nlohmann::json{{"kind", "var"}, {"name", t.rec_var().name()}};
    case Kind::Rec:
      return nlohmann::json{
          {"kind", "rec"}, {"name", t.rec_var().name()}, {"body", local_type_json(t.body())}};
    case Kind::Send:
    case Kind::Recv:
      return nlohmann::json{{"kind", t.kind() == Kind::Send ? "send" : "recv"},
                            {"peer", t.peer().name()},
                            {"sort", t.sort().name()},
                            {"cont", local_type_json(t.continuation())}};
    case Kind::Select:
    case Kind::Offer: {
      nlohmann::json arms = nlohmann::json::array();
      for (const auto& arm : t.arms())
        arms.push_back(
            nlohmann::json{{"label", arm.label.name()}, {"body", local_type_json(arm.body)}});
      return nlohmann::json{{"kind", t.kind() == Kind::Select ? "select" : "offer"},
                            {"peer", t.peer().name()},
                            {"arms", arms}};
    }
  }
  return nlohmann::json();
}

inline nlohmann::json verdict_json(const IsoVerdict& v) {
  nlohmann::json out{{"bound", v.bound}, {"unroll", v.unroll}, {"detail", v.detail}};
  switch (v.status) {
    case IsoStatus::Isomorphic:
      out["status"] = "isomorphic";
      out["witness"] = witness_json(v.witness);
      break;
    case IsoStatus::Mismatch:
      out["status"] = "mismatch";
      out["counterexample"] =
          nlohmann::json{{"trace", trace_json(*v.counterexample)},
                         {"side", v.counterexample_in_left ? "first" : "second"},
                         {"set", v.counterexample_truncated ? "truncated" : "maximal"}};
      break;
    case IsoStatus::Inconclusive:
      out["status"] = "unknown";
      break;
  }
  return out;
}

inline nlohmann::json check_result_json(const CheckResult& r) {
  return nlohmann::json{{"name", r.name}, {"ok", r.ok}, {"detail", r.detail}};
}

inline nlohmann::json projection_failure_json(const Participant& p, const ProjectionFailure& f) {
  return nlohmann::json{{"participant", p.name()},
                        {"path", f.path},
                        {"left", print_local(f.left)},
                        {"right", print_local(f.right)}};
}

}  // namespace mpst
