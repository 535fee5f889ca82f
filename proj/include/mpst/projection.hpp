#pragma once

// Endpoint projection of global types, and the merge operator it leans on for
// branches the projected participant does not take part in.
//
// Merge is the standard full merge: equal Send/Recv heads merge their tails,
// Selects on the same peer with the same label set merge pointwise, Offers on
// the same peer union their arms (shared labels merge recursively), rec
// binders are aligned and merged pointwise. Everything else is undefined.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ast.hpp"

namespace mpst {

struct ProjectionFailure {
  NodePath path;   // branch node whose arms would not merge
  LocalType left;  // the two offending projections; never mergeable
  LocalType right;
};

class UnmergeableError : public Error {
 public:
  explicit UnmergeableError(ProjectionFailure failure)
      : Error("unmergeable branch projections"), failure_(std::move(failure)) {}
  const ProjectionFailure& failure() const noexcept { return failure_; }

 private:
  ProjectionFailure failure_;
};

namespace detail {

struct MergeFailure {
  LocalType left;
  LocalType right;
};

inline std::optional<LocalType> try_merge(const LocalType& a, const LocalType& b,
                                          std::optional<MergeFailure>& failure) {
  auto fail = [&]() -> std::optional<LocalType> {
    if (!failure) failure = MergeFailure{a, b};
    return std::nullopt;
  };
  if (a.kind() != b.kind()) return fail();
  switch (a.kind()) {
    case LocalType::Kind::End:
      return a;
    case LocalType::Kind::Var:
      return a.rec_var() == b.rec_var() ? std::optional<LocalType>(a) : fail();
    case LocalType::Kind::Send:
    case LocalType::Kind::Recv: {
      if (a.peer() != b.peer() || a.sort() != b.sort()) return fail();
      auto cont = try_merge(a.continuation(), b.continuation(), failure);
      if (!cont) return std::nullopt;
      return a.kind() == LocalType::Kind::Send
                 ? LocalType::send(a.peer(), a.sort(), std::move(*cont))
                 : LocalType::recv(a.peer(), a.sort(), std::move(*cont));
    }
    case LocalType::Kind::Select: {
      // Internal choice: the chooser must have identical options on both sides.
      if (a.peer() != b.peer() || a.arms().size() != b.arms().size()) return fail();
      std::vector<LocalType::Arm> arms;
      for (const auto& arm : a.arms()) {
        const LocalType::Arm* other = nullptr;
        for (const auto& cand : b.arms())
          if (cand.label == arm.label) {
            other = &cand;
            break;
          }
        if (!other) return fail();
        auto merged = try_merge(arm.body, other->body, failure);
        if (!merged) return std::nullopt;
        arms.push_back({arm.label, std::move(*merged)});
      }
      return LocalType::select(a.peer(), std::move(arms));
    }
    case LocalType::Kind::Offer: {
      if (a.peer() != b.peer()) return fail();
      std::vector<LocalType::Arm> arms;
      for (const auto& arm : a.arms()) {
        const LocalType::Arm* other = nullptr;
        for (const auto& cand : b.arms())
          if (cand.label == arm.label) {
            other = &cand;
            break;
          }
        if (!other) {
          arms.push_back(arm);
          continue;
        }
        auto merged = try_merge(arm.body, other->body, failure);
        if (!merged) return std::nullopt;
        arms.push_back({arm.label, std::move(*merged)});
      }
      for (const auto& arm : b.arms()) {
        bool shared = false;
        for (const auto& mine : a.arms())
          if (mine.label == arm.label) {
            shared = true;
            break;
          }
        if (!shared) arms.push_back(arm);
      }
      return LocalType::offer(a.peer(), std::move(arms));
    }
    case LocalType::Kind::Rec: {
      if (a.rec_var() == b.rec_var()) {
        auto body = try_merge(a.body(), b.body(), failure);
        if (!body) return std::nullopt;
        return LocalType::rec(a.rec_var(), std::move(*body));
      }
      // Align binders; renaming is safe only when the target name is not
      // already free in the renamed body.
      auto fv_b = free_vars(b.body());
      if (!fv_b.count(a.rec_var())) {
        auto renamed = subst(b.body(), b.rec_var(), LocalType::var(a.rec_var()));
        auto body = try_merge(a.body(), renamed, failure);
        if (!body) return std::nullopt;
        return LocalType::rec(a.rec_var(), std::move(*body));
      }
      auto fv_a = free_vars(a.body());
      if (!fv_a.count(b.rec_var())) {
        auto renamed = subst(a.body(), a.rec_var(), LocalType::var(b.rec_var()));
        auto body = try_merge(renamed, b.body(), failure);
        if (!body) return std::nullopt;
        return LocalType::rec(b.rec_var(), std::move(*body));
      }
      return fail();
    }
  }
  return fail();
}

}  // namespace detail

inline bool mergeable(const LocalType& a, const LocalType& b) {
  std::optional<detail::MergeFailure> failure;
  return detail::try_merge(a, b, failure).has_value();
}

inline LocalType merge(const LocalType& a, const LocalType& b) {
  std::optional<detail::MergeFailure> failure;
  auto merged = detail::try_merge(a, b, failure);
  if (!merged) throw UnmergeableError({{}, failure->left, failure->right});
  return *merged;
}

namespace detail {

inline LocalType project_impl(const GlobalType& g, const Participant& role, NodePath& path) {
  switch (g.kind()) {
    case GlobalType::Kind::End:
      return LocalType::end();
    case GlobalType::Kind::Var:
      return LocalType::var(g.rec_var());
    case GlobalType::Kind::Seq: {
      const Prefix& head = g.head();
      path.push_back(0);
      LocalType cont = project_impl(g.continuation(), role, path);
      path.pop_back();
      const ValueSort& sort = std::get<ValueSort>(head.payload());
      if (role == head.sender()) return LocalType::send(head.receiver(), sort, std::move(cont));
      if (role == head.receiver()) return LocalType::recv(head.sender(), sort, std::move(cont));
      return cont;
    }
    case GlobalType::Kind::Branch: {
      std::vector<LocalType> bodies;
      bodies.reserve(g.arms().size());
      for (size_t i = 0; i < g.arms().size(); ++i) {
        path.push_back(static_cast<int>(i));
        bodies.push_back(project_impl(g.arms()[i].body, role, path));
        path.pop_back();
      }
      if (role == g.sender() || role == g.receiver()) {
        std::vector<LocalType::Arm> arms;
        arms.reserve(bodies.size());
        for (size_t i = 0; i < bodies.size(); ++i)
          arms.push_back({g.arms()[i].label, std::move(bodies[i])});
        return role == g.sender() ? LocalType::select(g.receiver(), std::move(arms))
                                  : LocalType::offer(g.sender(), std::move(arms));
      }
      LocalType acc = std::move(bodies.front());
      for (size_t i = 1; i < bodies.size(); ++i) {
        std::optional<MergeFailure> failure;
        auto merged = try_merge(acc, bodies[i], failure);
        if (!merged) throw UnmergeableError({path, failure->left, failure->right});
        acc = std::move(*merged);
      }
      return acc;
    }
    case GlobalType::Kind::Rec: {
      path.push_back(0);
      LocalType body = project_impl(g.body(), role, path);
      path.pop_back();
      if (body.kind() == LocalType::Kind::Var && body.rec_var() == g.rec_var())
        return LocalType::end();
      // Binder dropped when unused; covers the participant-absent case.
      if (!free_vars(body).count(g.rec_var())) return body;
      return LocalType::rec(g.rec_var(), std::move(body));
    }
  }
  return LocalType::end();
}

}  // namespace detail

// Behaviour of `role` inside g. A participant absent from g projects to end.
// Throws UnmergeableError when a branch the role does not follow cannot be
// merged into one local type.
inline LocalType project(const GlobalType& g, const Participant& role) {
  NodePath path;
  return detail::project_impl(g, role, path);
}

}  // namespace mpst
