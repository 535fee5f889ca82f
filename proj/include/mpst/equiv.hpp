#pragma once

// Deciding whether two global types are the same protocol up to the
// invertible rewrites, and certifying the answer.
//
//   mismatch     the bounded trace sets differ; carries a replayed
//                counterexample trace, so this verdict is a proof
//   isomorphic   a rewrite sequence from one type to the other was found and
//                replayed in both directions; the witness is the certificate
//   inconclusive traces agree but no witness was found within the search
//                bound; says nothing either way
//
// Also hosts the semantic sanity checks the CLI exposes: trace
// correspondence between a global type and its projected configuration, and
// preservation of both trace sets by every applicable rewrite.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"
#include "combinators.hpp"
#include "global_semantics.hpp"
#include "local_semantics.hpp"
#include "projection.hpp"
#include "wellformed.hpp"

namespace mpst {

enum class IsoStatus { Isomorphic, Mismatch, Inconclusive };

struct IsoVerdict {
  IsoStatus status = IsoStatus::Inconclusive;
  Witness witness;                            // filled when Isomorphic
  std::optional<GlobalTrace> counterexample;  // filled when Mismatch
  bool counterexample_in_left = false;        // which side exhibits it
  bool counterexample_truncated = false;      // from the truncated set, not maximal
  std::string detail;
  int explored = 0;  // types expanded during the search
  int bound = 0;
  int unroll = 0;
};

namespace detail {

// Direct replay, independent of the set-based enumeration: does g admit a
// run producing exactly `t` within the budget, ending unable to communicate
// at all (maximal) or able only beyond the remaining budget (truncated)?
inline bool replay(const GlobalType& g, const GlobalTrace& t, int left, size_t pos,
                   bool want_truncated) {
  if (pos == t.size()) {
    if (!can_communicate(g)) return !want_truncated;
    return want_truncated && global_steps(g, left).empty();
  }
  for (const auto& s : global_steps(g, left)) {
    if (s.event != t[pos]) continue;
    if (replay(s.next, t, left - s.unfoldings, pos + 1, want_truncated)) return true;
  }
  return false;
}

inline bool replay_maximal(const GlobalType& g, const GlobalTrace& t, UnrollBudget budget) {
  return replay(g, t, budget.k, 0, false);
}

inline bool replay_truncated(const GlobalType& g, const GlobalTrace& t, UnrollBudget budget) {
  return replay(g, t, budget.k, 0, true);
}

inline std::optional<GlobalTrace> first_diff(const std::set<GlobalTrace>& a,
                                             const std::set<GlobalTrace>& b) {
  for (const auto& t : a)
    if (!b.count(t)) return t;
  for (const auto& t : b)
    if (!a.count(t)) return t;
  return std::nullopt;
}

}  // namespace detail

inline void require_projectable(const GlobalType& g) {
  auto violations = check_formation(g);
  if (!violations.empty())
    throw FormationError(violations.front().rule, violations.front().message);
  auto failures = check_projectable(g);
  if (!failures.empty()) throw UnmergeableError(failures.front().second);
}

inline IsoVerdict check_iso(const GlobalType& left, const GlobalType& right,
                            UnrollBudget unroll = {2}, int bound = 8) {
  require_projectable(left);
  require_projectable(right);

  IsoVerdict verdict;
  verdict.bound = bound;
  verdict.unroll = unroll.k;

  // Trace screening. Rewrites preserve both trace sets, so any difference is
  // a sound disproof; the counterexample is re-validated by direct replay
  // before we commit to it.
  TraceSet lt = traces(left, unroll);
  TraceSet rt = traces(right, unroll);
  if (lt != rt) {
    bool from_truncated = false;
    auto ce = detail::first_diff(lt.maximal, rt.maximal);
    if (!ce) {
      ce = detail::first_diff(lt.truncated, rt.truncated);
      from_truncated = true;
    }
    bool in_left = from_truncated ? lt.truncated.count(*ce) > 0 : lt.maximal.count(*ce) > 0;
    const GlobalType& has = in_left ? left : right;
    const GlobalType& lacks = in_left ? right : left;
    bool confirmed =
        from_truncated
            ? detail::replay_truncated(has, *ce, unroll) &&
                  !detail::replay_truncated(lacks, *ce, unroll)
            : detail::replay_maximal(has, *ce, unroll) && !detail::replay_maximal(lacks, *ce, unroll);
    if (!confirmed) {
      verdict.status = IsoStatus::Inconclusive;
      verdict.detail = "trace sets differ but the counterexample did not replay";
      return verdict;
    }
    verdict.status = IsoStatus::Mismatch;
    verdict.counterexample = std::move(*ce);
    verdict.counterexample_in_left = in_left;
    verdict.counterexample_truncated = from_truncated;
    std::ostringstream os;
    os << (from_truncated ? "truncated" : "maximal") << " trace of the "
       << (in_left ? "first" : "second") << " type is not a trace of the other";
    verdict.detail = os.str();
    return verdict;
  }

  if (alpha_equal(left, right)) {
    verdict.status = IsoStatus::Isomorphic;
    verdict.detail = "types are equal up to renaming of recursion variables";
    return verdict;
  }

  // Breadth-first search through the rewrite graph. Every reached type is
  // isomorphic to `left` by construction; the parent map reconstructs the
  // rewrite sequence once `right` is reached.
  struct Visit {
    std::string parent_key;
    RewriteSite via;
  };
  std::string target = canonical_key(right);
  std::map<std::string, Visit> parents;
  std::map<std::string, GlobalType> types;
  std::deque<std::pair<std::string, int>> frontier;

  std::string start = canonical_key(left);
  types.emplace(start, left);
  parents.emplace(start, Visit{});
  frontier.emplace_back(start, 0);

  std::optional<std::string> found;
  while (!frontier.empty() && !found) {
    auto [key, depth] = frontier.front();
    frontier.pop_front();
    verdict.explored += 1;
    if (depth >= bound) continue;
    const GlobalType& here = types.at(key);
    for (const auto& site : applicable_sites(here)) {
      GlobalType next = apply_site(here, site);
      std::string next_key = canonical_key(next);
      if (parents.count(next_key)) continue;
      parents.emplace(next_key, Visit{key, site});
      types.emplace(next_key, std::move(next));
      if (next_key == target) {
        found = next_key;
        break;
      }
      frontier.emplace_back(next_key, depth + 1);
    }
  }

  if (!found) {
    verdict.status = IsoStatus::Inconclusive;
    std::ostringstream os;
    os << "no rewrite sequence of length at most " << bound << " found (explored "
       << verdict.explored << " types)";
    verdict.detail = os.str();
    return verdict;
  }

  Witness witness;
  for (std::string at = *found; at != start;) {
    const Visit& v = parents.at(at);
    witness.push_back(v.via);
    at = v.parent_key;
  }
  std::reverse(witness.begin(), witness.end());

  // The certificate must replay in both directions before we trust it.
  if (!alpha_equal(apply_witness(left, witness), right) ||
      !alpha_equal(apply_witness(right, inverted(witness)), left)) {
    verdict.status = IsoStatus::Inconclusive;
    verdict.detail = "candidate witness failed replay";
    return verdict;
  }

  verdict.status = IsoStatus::Isomorphic;
  verdict.witness = std::move(witness);
  std::ostringstream os;
  os << "witness of length " << verdict.witness.size() << " replayed in both directions";
  verdict.detail = os.str();
  return verdict;
}

// One named semantic check with its outcome, as reported by the CLI.
struct CheckResult {
  std::string name;
  bool ok = true;
  std::string detail;
};

// The identified image of the bounded global runs must coincide with the
// terminated runs of the projected configuration. Exact for recursion-free
// types; under recursion the two sides charge unfoldings differently, so a
// nonzero budget can make them diverge and the check honestly reports that.
inline CheckResult check_trace_correspondence(const GlobalType& g, UnrollBudget budget) {
  CheckResult r{"trace-correspondence", true, ""};
  TraceSet ts = traces(g, budget);
  std::set<ConfigTrace> identified;
  for (const auto& t : ts.maximal) {
    ConfigTrace ct;
    for (const auto& event : t) identify(ct, event);
    identified.insert(std::move(ct));
  }
  ConfigTraceSet den = denotation(g, budget);
  if (identified != den.terminated) {
    r.ok = false;
    std::ostringstream os;
    os << "identified global runs (" << identified.size()
       << ") differ from terminated configuration runs (" << den.terminated.size() << ")";
    r.detail = os.str();
  }
  return r;
}

inline CheckResult check_site_preserves_traces(const GlobalType& g, const RewriteSite& site,
                                               UnrollBudget budget) {
  CheckResult r{"trace-preservation", true, ""};
  if (traces(apply_site(g, site), budget) != traces(g, budget)) {
    r.ok = false;
    r.detail = "rewrite changed the bounded global trace sets";
  }
  return r;
}

inline CheckResult check_site_preserves_denotation(const GlobalType& g, const RewriteSite& site,
                                                   UnrollBudget budget) {
  CheckResult r{"denotation-preservation", true, ""};
  if (denotation(apply_site(g, site), budget) != denotation(g, budget)) {
    r.ok = false;
    r.detail = "rewrite changed the configuration denotation";
  }
  return r;
}

}  // namespace mpst
