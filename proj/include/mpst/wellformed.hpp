#pragma once

// Formation-rule review of a GlobalType, and the projectability report built
// on top of projection. check_formation revalidates everything the checked
// constructors enforce, so trees arriving from any builder get one verdict.

#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "projection.hpp"

namespace mpst {

struct Violation {
  std::string rule;  // formation rule name
  NodePath path;
  std::string message;
};

namespace detail {

inline void check_atom(bool ok, const char* rule, const std::string& what, const NodePath& path,
                       std::vector<Violation>& out) {
  if (!ok) out.push_back({rule, path, what});
}

inline void check_formation_impl(const GlobalType& g, NodePath& path,
                                 std::vector<std::string>& scope, std::vector<Violation>& out) {
  switch (g.kind()) {
    case GlobalType::Kind::End:
      return;
    case GlobalType::Kind::Var: {
      const std::string& name = g.rec_var().name();
      check_atom(is_identifier(name), "Recursion", "'" + name + "' is not an identifier", path, out);
      if (std::find(scope.rbegin(), scope.rend(), name) == scope.rend())
        out.push_back({"Recursion", path, "recursion variable '" + name + "' is not bound"});
      return;
    }
    case GlobalType::Kind::Seq: {
      const Prefix& head = g.head();
      check_atom(is_identifier(head.sender().name()), "Participant",
                 "'" + head.sender().name() + "' is not an identifier", path, out);
      check_atom(is_identifier(head.receiver().name()), "Participant",
                 "'" + head.receiver().name() + "' is not an identifier", path, out);
      if (head.sender() == head.receiver())
        out.push_back({"Global Prefix", path,
                       "participant '" + head.sender().name() + "' talks to itself"});
      if (!is_value_payload(head.payload()))
        out.push_back({"Global type", path, "sequencing prefix must carry a value, not a label"});
      else
        check_atom(ValueSort::valid(payload_name(head.payload())), "Exchange Values",
                   "'" + payload_name(head.payload()) + "' is not a sort name", path, out);
      path.push_back(0);
      check_formation_impl(g.continuation(), path, scope, out);
      path.pop_back();
      return;
    }
    case GlobalType::Kind::Branch: {
      check_atom(is_identifier(g.sender().name()), "Participant",
                 "'" + g.sender().name() + "' is not an identifier", path, out);
      check_atom(is_identifier(g.receiver().name()), "Participant",
                 "'" + g.receiver().name() + "' is not an identifier", path, out);
      if (g.sender() == g.receiver())
        out.push_back({"Global Prefix", path,
                       "participant '" + g.sender().name() + "' talks to itself"});
      if (g.arms().empty())
        out.push_back({"Branching", path, "branch needs at least one arm"});
      std::set<std::string> seen;
      for (size_t i = 0; i < g.arms().size(); ++i) {
        const auto& arm = g.arms()[i];
        check_atom(is_identifier(arm.label.name()), "Labels",
                   "'" + arm.label.name() + "' is not an identifier", path, out);
        if (!seen.insert(arm.label.name()).second)
          out.push_back({"Branching", path, "duplicate label '" + arm.label.name() + "'"});
        path.push_back(static_cast<int>(i));
        check_formation_impl(arm.body, path, scope, out);
        path.pop_back();
      }
      return;
    }
    case GlobalType::Kind::Rec: {
      const std::string& name = g.rec_var().name();
      check_atom(is_identifier(name), "Recursion", "'" + name + "' is not an identifier", path, out);
      if (!is_guarded_in(g.rec_var(), g.body()))
        out.push_back({"Recursion", path, "recursion variable '" + name + "' is unguarded"});
      scope.push_back(name);
      path.push_back(0);
      check_formation_impl(g.body(), path, scope, out);
      path.pop_back();
      scope.pop_back();
      return;
    }
  }
}

}  // namespace detail

// Empty result means g is derivable from the formation rules (and closed).
inline std::vector<Violation> check_formation(const GlobalType& g) {
  std::vector<Violation> out;
  NodePath path;
  std::vector<std::string> scope;
  detail::check_formation_impl(g, path, scope, out);
  return out;
}

// Per-participant projection failures, sorted by participant. Empty result
// means project(g, p) is defined for every p in participants(g).
inline std::vector<std::pair<Participant, ProjectionFailure>> check_projectable(
    const GlobalType& g) {
  std::vector<std::pair<Participant, ProjectionFailure>> out;
  for (const Participant& p : participants(g)) {
    try {
      (void)project(g, p);
    } catch (const UnmergeableError& e) {
      out.emplace_back(p, e.failure());
    }
  }
  return out;
}

}  // namespace mpst
