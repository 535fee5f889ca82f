#pragma once

// Synchronous small-step semantics of global types and the bounded trace sets
// they generate.
//
// Steps are labelled with the communicated Prefix. Besides consuming the head
// event, a type may step under a prefix or under a whole branching when the
// stepping event shares no participant with what it jumps over, and recursion
// unfolds on demand. Each step carries the number of unfoldings its
// derivation used.
//
// Step enumeration is fuel-bounded: only derivations using at most `fuel`
// unfoldings are produced. Without the bound the permutation rules would
// chase unfoldings forever on recursive types; with it, every recursive call
// either burns fuel or descends into a subterm, so enumeration terminates.
// Nothing is lost because trace enumeration could never afford a costlier
// step anyway.

#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ast.hpp"

namespace mpst {

struct UnrollBudget {
  int k = 0;  // max unfoldings along one run
};

using GlobalTrace = std::vector<Prefix>;

struct GlobalStep {
  Prefix event;
  GlobalType next;
  int unfoldings = 0;
};

// Guarded recursion makes the binder chain at the head finite, so this
// always lands on End, Seq, or Branch for closed types.
inline const GlobalType& strip_recs(const GlobalType& g) {
  const GlobalType* at = &g;
  while (at->kind() == GlobalType::Kind::Rec) at = &at->body();
  return *at;
}

// A closed type can communicate, now or after unfolding, iff a prefix or a
// branching sits under its binder chain.
inline bool can_communicate(const GlobalType& g) {
  auto kind = strip_recs(g).kind();
  return kind == GlobalType::Kind::Seq || kind == GlobalType::Kind::Branch;
}

// All steps whose derivation uses at most `fuel` unfoldings.
inline std::vector<GlobalStep> global_steps(const GlobalType& g, int fuel) {
  switch (g.kind()) {
    case GlobalType::Kind::End:
    case GlobalType::Kind::Var:
      return {};
    case GlobalType::Kind::Seq: {
      std::vector<GlobalStep> out;
      out.push_back({g.head(), g.continuation(), 0});
      for (const auto& step : global_steps(g.continuation(), fuel)) {
        if (!pid_disjoint(g.head(), step.event)) continue;
        out.push_back({step.event, GlobalType::seq(g.head(), step.next), step.unfoldings});
      }
      return out;
    }
    case GlobalType::Kind::Branch: {
      std::vector<GlobalStep> out;
      for (const auto& arm : g.arms())
        out.push_back({Prefix(g.sender(), g.receiver(), arm.label), arm.body, 0});
      // A step below the choice needs the identical event enabled in every
      // arm, not touching the choosing pair; its cost is the sum over arms.
      std::vector<std::vector<GlobalStep>> arm_steps;
      arm_steps.reserve(g.arms().size());
      for (const auto& arm : g.arms()) arm_steps.push_back(global_steps(arm.body, fuel));
      for (const auto& candidate : arm_steps.front()) {
        if (candidate.event.involves(g.sender()) || candidate.event.involves(g.receiver()))
          continue;
        std::vector<GlobalType::Arm> next_arms;
        int unfoldings = 0;
        bool everywhere = true;
        for (size_t i = 0; i < arm_steps.size() && everywhere; ++i) {
          everywhere = false;
          for (const auto& step : arm_steps[i]) {
            if (step.event != candidate.event) continue;
            next_arms.push_back({g.arms()[i].label, step.next});
            unfoldings += step.unfoldings;
            everywhere = true;
            break;
          }
        }
        if (everywhere && unfoldings <= fuel)
          out.push_back({candidate.event,
                         GlobalType::branch(g.sender(), g.receiver(), std::move(next_arms)),
                         unfoldings});
      }
      return out;
    }
    case GlobalType::Kind::Rec: {
      if (fuel <= 0) return {};
      auto out = global_steps(subst(g.body(), g.rec_var(), g), fuel - 1);
      for (auto& step : out) step.unfoldings += 1;
      return out;
    }
  }
  return {};
}

struct TraceSet {
  std::set<GlobalTrace> maximal;    // runs ending in a type that cannot step
  std::set<GlobalTrace> truncated;  // runs cut short by the unroll budget

  std::set<GlobalTrace> prefix_closed() const {
    std::set<GlobalTrace> out;
    auto add = [&](const GlobalTrace& t) {
      for (size_t n = 0; n <= t.size(); ++n) out.insert(GlobalTrace(t.begin(), t.begin() + n));
    };
    for (const auto& t : maximal) add(t);
    for (const auto& t : truncated) add(t);
    return out;
  }

  friend bool operator==(const TraceSet& a, const TraceSet& b) {
    return a.maximal == b.maximal && a.truncated == b.truncated;
  }
  friend bool operator!=(const TraceSet& a, const TraceSet& b) { return !(a == b); }
};

// All maximal runs reachable with at most budget.k unfoldings. Runs stopped
// only by the budget land in `truncated`, not in `maximal`.
inline TraceSet traces(const GlobalType& g, UnrollBudget budget) {
  if (budget.k < 0) throw Error("unroll budget must be non-negative");
  struct Part {
    std::set<GlobalTrace> maximal;
    std::set<GlobalTrace> truncated;
  };
  std::unordered_map<std::string, Part> memo;

  auto enumerate = [&](auto&& self, const GlobalType& node, int left) -> const Part& {
    std::string key = canonical_key(node) + '#' + std::to_string(left);
    auto found = memo.find(key);
    if (found != memo.end()) return found->second;

    Part part;
    auto steps = global_steps(node, left);
    if (steps.empty()) {
      if (can_communicate(node))
        part.truncated.insert(GlobalTrace{});
      else
        part.maximal.insert(GlobalTrace{});
    } else {
      for (const auto& step : steps) {
        const Part& sub = self(self, step.next, left - step.unfoldings);
        for (const auto& t : sub.maximal) {
          GlobalTrace run{step.event};
          run.insert(run.end(), t.begin(), t.end());
          part.maximal.insert(std::move(run));
        }
        for (const auto& t : sub.truncated) {
          GlobalTrace run{step.event};
          run.insert(run.end(), t.begin(), t.end());
          part.truncated.insert(std::move(run));
        }
      }
    }
    return memo.emplace(std::move(key), std::move(part)).first->second;
  };

  const Part& root = enumerate(enumerate, g, budget.k);
  return TraceSet{root.maximal, root.truncated};
}

}  // namespace mpst
