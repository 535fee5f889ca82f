#pragma once

// Invertible rewrites on global types and the machinery to apply, invert,
// and enumerate them.
//
// Three families:
//   SwapPrefix    exchanges two adjacent independent exchanges in a chain
//   ContrExp      hoists a common independent head out of all branch arms
//                 (forward) or pushes a head into every arm (inverse)
//   BranchDistrib flips the nesting order of two independent branchings
//
// Every family is total: when its side condition fails the input comes back
// unchanged. The only exception is a malformed swap index, which is a usage
// error and throws IndexOutOfChainError.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"

namespace mpst {

// Swaps the exchanges at chain positions index-1 and index (1-based) when
// they share no participant. Valid indices are 2..seq_chain_length(g).
inline GlobalType swap_prefix(const GlobalType& g, int index) {
  if (index < 2 || index > seq_chain_length(g))
    throw IndexOutOfChainError("swap index " + std::to_string(index) +
                               " not inside a chain of length " +
                               std::to_string(seq_chain_length(g)));
  if (index > 2)
    return GlobalType::seq(g.head(), swap_prefix(g.continuation(), index - 1));
  const GlobalType& inner = g.continuation();
  if (!pid_disjoint(g.head(), inner.head())) return g;
  return GlobalType::seq(inner.head(),
                         GlobalType::seq(g.head(), inner.continuation()));
}

namespace detail {

// The common head all arms of a branching start with, provided it exists and
// does not involve the choosing pair. Empty when the contraction guard fails.
inline std::optional<Prefix> contractible_head(const GlobalType& g) {
  if (g.kind() != GlobalType::Kind::Branch) return std::nullopt;
  const auto& arms = g.arms();
  if (arms.front().body.kind() != GlobalType::Kind::Seq) return std::nullopt;
  const Prefix& head = arms.front().body.head();
  if (head.involves(g.sender()) || head.involves(g.receiver())) return std::nullopt;
  for (const auto& arm : arms) {
    if (arm.body.kind() != GlobalType::Kind::Seq) return std::nullopt;
    if (arm.body.head() != head) return std::nullopt;
  }
  return head;
}

}  // namespace detail

// Forward direction: Branch(p->q:{l_i: e;G_i}) becomes e; Branch(p->q:{l_i: G_i})
// when e involves neither p nor q.
inline GlobalType contr(const GlobalType& g) {
  auto head = detail::contractible_head(g);
  if (!head) return g;
  std::vector<GlobalType::Arm> arms;
  arms.reserve(g.arms().size());
  for (const auto& arm : g.arms()) arms.push_back({arm.label, arm.body.continuation()});
  return GlobalType::seq(*head, GlobalType::branch(g.sender(), g.receiver(), std::move(arms)));
}

// Inverse direction: e; Branch(p->q:{l_i: G_i}) becomes Branch(p->q:{l_i: e;G_i})
// when e involves neither p nor q.
inline GlobalType exp(const GlobalType& g) {
  if (g.kind() != GlobalType::Kind::Seq) return g;
  const GlobalType& inner = g.continuation();
  if (inner.kind() != GlobalType::Kind::Branch) return g;
  if (g.head().involves(inner.sender()) || g.head().involves(inner.receiver())) return g;
  std::vector<GlobalType::Arm> arms;
  arms.reserve(inner.arms().size());
  for (const auto& arm : inner.arms())
    arms.push_back({arm.label, GlobalType::seq(g.head(), arm.body)});
  return GlobalType::branch(inner.sender(), inner.receiver(), std::move(arms));
}

enum class Family { SwapPrefix, ContrExp, BranchDistrib };
enum class Direction { Forward, Inverse };

namespace detail {

// Shape check shared by both distribution directions: every arm of `g` is a
// branching on the same independent pair with the same label set. Returns
// the continuation of outer arm i, inner label l.
struct NestedBranch {
  Participant inner_sender;
  Participant inner_receiver;
  std::vector<Label> inner_labels;  // order taken from the first outer arm
  // lookup[i] maps inner label index to the continuation in outer arm i,
  // following inner_labels order.
  std::vector<std::vector<const GlobalType*>> lookup;
};

inline std::optional<NestedBranch> nested_branch(const GlobalType& g) {
  if (g.kind() != GlobalType::Kind::Branch) return std::nullopt;
  const auto& arms = g.arms();
  const GlobalType& first = arms.front().body;
  if (first.kind() != GlobalType::Kind::Branch) return std::nullopt;
  NestedBranch nb{first.sender(), first.receiver(), {}, {}};
  if (first.sender().name() == g.sender().name() || first.sender().name() == g.receiver().name() ||
      first.receiver().name() == g.sender().name() ||
      first.receiver().name() == g.receiver().name())
    return std::nullopt;
  for (const auto& inner_arm : first.arms()) nb.inner_labels.push_back(inner_arm.label);
  for (const auto& arm : arms) {
    if (arm.body.kind() != GlobalType::Kind::Branch) return std::nullopt;
    if (arm.body.sender() != nb.inner_sender || arm.body.receiver() != nb.inner_receiver)
      return std::nullopt;
    if (arm.body.arms().size() != nb.inner_labels.size()) return std::nullopt;
    std::vector<const GlobalType*> row;
    for (const auto& want : nb.inner_labels) {
      const GlobalType* hit = nullptr;
      for (const auto& inner_arm : arm.body.arms())
        if (inner_arm.label == want) {
          hit = &inner_arm.body;
          break;
        }
      if (!hit) return std::nullopt;
      row.push_back(hit);
    }
    nb.lookup.push_back(std::move(row));
  }
  return nb;
}

}  // namespace detail

// Flips Branch(p->q:{l_i: Branch(r->s:{m_j: G_ij})}) into
// Branch(r->s:{m_j: Branch(p->q:{l_i: G_ij})}) and back.
//
// Forward requires each continuation to depend only on the inner label:
// G_ij alpha-equal across i. Inverse requires continuations constant within
// each outer arm: G_ij alpha-equal across j. Both require {p,q} and {r,s}
// disjoint; the guards are what make one round trip restore the input.
inline GlobalType branch_distrib(const GlobalType& g, Direction direction) {
  auto nb = detail::nested_branch(g);
  if (!nb) return g;
  const auto& arms = g.arms();
  size_t outer_n = arms.size();
  size_t inner_n = nb->inner_labels.size();
  if (direction == Direction::Forward) {
    for (size_t j = 0; j < inner_n; ++j)
      for (size_t i = 1; i < outer_n; ++i)
        if (!alpha_equal(*nb->lookup[i][j], *nb->lookup[0][j])) return g;
  } else {
    for (size_t i = 0; i < outer_n; ++i)
      for (size_t j = 1; j < inner_n; ++j)
        if (!alpha_equal(*nb->lookup[i][j], *nb->lookup[i][0])) return g;
  }
  std::vector<GlobalType::Arm> flipped;
  flipped.reserve(inner_n);
  for (size_t j = 0; j < inner_n; ++j) {
    std::vector<GlobalType::Arm> inner_arms;
    inner_arms.reserve(outer_n);
    for (size_t i = 0; i < outer_n; ++i)
      inner_arms.push_back({arms[i].label, *nb->lookup[i][j]});
    flipped.push_back({nb->inner_labels[j],
                       GlobalType::branch(g.sender(), g.receiver(), std::move(inner_arms))});
  }
  return GlobalType::branch(nb->inner_sender, nb->inner_receiver, std::move(flipped));
}

// One rewrite application: which family, in which direction, at which node.
// `index` is only meaningful for SwapPrefix; other families keep it at 0.
struct RewriteSite {
  NodePath path;
  Family family = Family::SwapPrefix;
  Direction direction = Direction::Forward;
  int index = 0;

  friend bool operator==(const RewriteSite& a, const RewriteSite& b) {
    return a.path == b.path && a.family == b.family && a.direction == b.direction &&
           a.index == b.index;
  }
  friend bool operator!=(const RewriteSite& a, const RewriteSite& b) { return !(a == b); }
  friend bool operator<(const RewriteSite& a, const RewriteSite& b) {
    if (a.path != b.path) return a.path < b.path;
    if (a.family != b.family) return static_cast<int>(a.family) < static_cast<int>(b.family);
    if (a.direction != b.direction)
      return static_cast<int>(a.direction) < static_cast<int>(b.direction);
    return a.index < b.index;
  }
};

using Witness = std::vector<RewriteSite>;

// Swap is its own inverse; the other families flip direction in place. The
// path stays valid because each rewrite keeps a node of the rewritten shape
// at the same address.
inline RewriteSite inverted(const RewriteSite& site) {
  RewriteSite out = site;
  if (site.family != Family::SwapPrefix)
    out.direction = site.direction == Direction::Forward ? Direction::Inverse : Direction::Forward;
  return out;
}

inline Witness inverted(const Witness& w) {
  Witness out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverted(*it));
  return out;
}

inline GlobalType apply_site(const GlobalType& g, const RewriteSite& site) {
  const GlobalType* target = node_at(g, site.path);
  if (!target) throw Error("rewrite path does not address a node");
  GlobalType rewritten = [&] {
    switch (site.family) {
      case Family::SwapPrefix:
        return swap_prefix(*target, site.index);
      case Family::ContrExp:
        return site.direction == Direction::Forward ? contr(*target) : exp(*target);
      case Family::BranchDistrib:
        return branch_distrib(*target, site.direction);
    }
    return *target;
  }();
  return replace_at(g, site.path, rewritten);
}

inline GlobalType apply_witness(const GlobalType& g, const Witness& w) {
  GlobalType out = g;
  for (const auto& site : w) out = apply_site(out, site);
  return out;
}

namespace detail {

inline void collect_sites(const GlobalType& g, NodePath& path, bool chain_head,
                          std::vector<RewriteSite>& out) {
  switch (g.kind()) {
    case GlobalType::Kind::End:
    case GlobalType::Kind::Var:
      return;
    case GlobalType::Kind::Seq: {
      if (chain_head) {
        int len = seq_chain_length(g);
        for (int i = 2; i <= len; ++i)
          if (pid_disjoint(prefix_at(g, i - 1), prefix_at(g, i)))
            out.push_back({path, Family::SwapPrefix, Direction::Forward, i});
      }
      if (g.continuation().kind() == GlobalType::Kind::Branch) {
        const GlobalType& b = g.continuation();
        if (!g.head().involves(b.sender()) && !g.head().involves(b.receiver()))
          out.push_back({path, Family::ContrExp, Direction::Inverse, 0});
      }
      path.push_back(0);
      collect_sites(g.continuation(), path, false, out);
      path.pop_back();
      return;
    }
    case GlobalType::Kind::Branch: {
      if (contractible_head(g))
        out.push_back({path, Family::ContrExp, Direction::Forward, 0});
      if (nested_branch(g)) {
        GlobalType fwd = branch_distrib(g, Direction::Forward);
        if (!alpha_equal(fwd, g))
          out.push_back({path, Family::BranchDistrib, Direction::Forward, 0});
        GlobalType inv = branch_distrib(g, Direction::Inverse);
        if (!alpha_equal(inv, g))
          out.push_back({path, Family::BranchDistrib, Direction::Inverse, 0});
      }
      for (size_t i = 0; i < g.arms().size(); ++i) {
        path.push_back(static_cast<int>(i));
        collect_sites(g.arms()[i].body, path, true, out);
        path.pop_back();
      }
      return;
    }
    case GlobalType::Kind::Rec: {
      path.push_back(0);
      collect_sites(g.body(), path, true, out);
      path.pop_back();
      return;
    }
  }
}

}  // namespace detail

// Every guarded rewrite available anywhere in the type, without duplicates:
// swaps are listed once per chain (at its head node), hoists at the branch
// node, pushes at the prefix node, flips at the outer branch node. Sorted by
// path, then family, direction, index.
inline std::vector<RewriteSite> applicable_sites(const GlobalType& g) {
  std::vector<RewriteSite> out;
  NodePath path;
  detail::collect_sites(g, path, true, out);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mpst
