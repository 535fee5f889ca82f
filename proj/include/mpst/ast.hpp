#pragma once

// Syntax trees for multiparty session types: global types, local types and
// the small value types they are built from. Trees are immutable and share
// structure; all mutation-like operations return new values.
//
// Equality on GlobalType/LocalType is alpha-equivalence with order-insensitive
// branch arms. Printed source order of arms is preserved separately.

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace mpst {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by checked constructors when a value would break a formation rule.
// rule() uses the same rule names check_formation reports.
class FormationError : public Error {
 public:
  FormationError(std::string rule, const std::string& message)
      : Error(rule + ": " + message), rule_(std::move(rule)) {}
  const std::string& rule() const noexcept { return rule_; }

 private:
  std::string rule_;
};

class IndexOutOfChainError : public Error {
 public:
  using Error::Error;
};

inline bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

namespace detail {
// Tag for the unchecked constructors used by the formation-rule tests.
struct Unchecked {};
inline constexpr Unchecked unchecked{};
}  // namespace detail

class Participant {
 public:
  explicit Participant(std::string name) : name_(std::move(name)) {
    if (!is_identifier(name_))
      throw FormationError("Participant", "'" + name_ + "' is not an identifier");
  }
  Participant(detail::Unchecked, std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const Participant& a, const Participant& b) { return a.name_ == b.name_; }
  friend bool operator!=(const Participant& a, const Participant& b) { return !(a == b); }
  friend bool operator<(const Participant& a, const Participant& b) { return a.name_ < b.name_; }

 private:
  std::string name_;
};

class Label {
 public:
  explicit Label(std::string name) : name_(std::move(name)) {
    if (!is_identifier(name_))
      throw FormationError("Labels", "'" + name_ + "' is not an identifier");
  }
  Label(detail::Unchecked, std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const Label& a, const Label& b) { return a.name_ == b.name_; }
  friend bool operator!=(const Label& a, const Label& b) { return !(a == b); }
  friend bool operator<(const Label& a, const Label& b) { return a.name_ < b.name_; }

 private:
  std::string name_;
};

class RecVar {
 public:
  explicit RecVar(std::string name) : name_(std::move(name)) {
    if (!is_identifier(name_))
      throw FormationError("Recursion", "'" + name_ + "' is not an identifier");
  }
  RecVar(detail::Unchecked, std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const RecVar& a, const RecVar& b) { return a.name_ == b.name_; }
  friend bool operator!=(const RecVar& a, const RecVar& b) { return !(a == b); }
  friend bool operator<(const RecVar& a, const RecVar& b) { return a.name_ < b.name_; }

 private:
  std::string name_;
};

// A tuple payload <PId, DId> is one composite sort named by the comma-joined
// segment list, so the name is one or more identifiers separated by ','.
class ValueSort {
 public:
  explicit ValueSort(std::string name) : name_(std::move(name)) {
    if (!valid(name_))
      throw FormationError("Exchange Values", "'" + name_ + "' is not a sort name");
  }
  ValueSort(detail::Unchecked, std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

  static bool valid(std::string_view s) {
    size_t start = 0;
    while (true) {
      size_t comma = s.find(',', start);
      std::string_view seg = s.substr(start, comma == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : comma - start);
      if (!is_identifier(seg)) return false;
      if (comma == std::string_view::npos) return true;
      start = comma + 1;
    }
  }

  friend bool operator==(const ValueSort& a, const ValueSort& b) { return a.name_ == b.name_; }
  friend bool operator!=(const ValueSort& a, const ValueSort& b) { return !(a == b); }
  friend bool operator<(const ValueSort& a, const ValueSort& b) { return a.name_ < b.name_; }

 private:
  std::string name_;
};

using Payload = std::variant<ValueSort, Label>;

inline bool is_value_payload(const Payload& p) { return std::holds_alternative<ValueSort>(p); }
inline bool is_label_payload(const Payload& p) { return std::holds_alternative<Label>(p); }

inline const std::string& payload_name(const Payload& p) {
  return is_value_payload(p) ? std::get<ValueSort>(p).name() : std::get<Label>(p).name();
}

inline bool operator==(const Payload& a, const Payload& b) {
  return a.index() == b.index() && payload_name(a) == payload_name(b);
}
inline bool operator!=(const Payload& a, const Payload& b) { return !(a == b); }
inline bool operator<(const Payload& a, const Payload& b) {
  if (a.index() != b.index()) return a.index() < b.index();
  return payload_name(a) < payload_name(b);
}

// One communication event: sender -> receiver carrying either a value sort or
// a branch label. Doubles as the transition label of the global LTS.
class Prefix {
 public:
  Prefix(Participant sender, Participant receiver, Payload payload)
      : sender_(std::move(sender)), receiver_(std::move(receiver)), payload_(std::move(payload)) {
    if (sender_ == receiver_)
      throw FormationError("Global Prefix",
                           "participant '" + sender_.name() + "' talks to itself");
  }
  Prefix(detail::Unchecked, Participant sender, Participant receiver, Payload payload)
      : sender_(std::move(sender)), receiver_(std::move(receiver)), payload_(std::move(payload)) {}

  const Participant& sender() const noexcept { return sender_; }
  const Participant& receiver() const noexcept { return receiver_; }
  const Payload& payload() const noexcept { return payload_; }

  bool involves(const Participant& p) const { return p == sender_ || p == receiver_; }

  friend bool operator==(const Prefix& a, const Prefix& b) {
    return a.sender_ == b.sender_ && a.receiver_ == b.receiver_ && a.payload_ == b.payload_;
  }
  friend bool operator!=(const Prefix& a, const Prefix& b) { return !(a == b); }
  // Event ordering inside canonical trace sets: (sender, receiver, payload).
  friend bool operator<(const Prefix& a, const Prefix& b) {
    if (a.sender_ != b.sender_) return a.sender_ < b.sender_;
    if (a.receiver_ != b.receiver_) return a.receiver_ < b.receiver_;
    return a.payload_ < b.payload_;
  }

 private:
  Participant sender_;
  Participant receiver_;
  Payload payload_;
};

// pid(a) and pid(b) share no participant.
inline bool pid_disjoint(const Prefix& a, const Prefix& b) {
  return !a.involves(b.sender()) && !a.involves(b.receiver());
}

class GlobalType {
 public:
  enum class Kind { Seq, Branch, Rec, Var, End };
  struct Arm;

  static GlobalType end();
  static GlobalType var(RecVar v);
  static GlobalType rec(RecVar v, GlobalType body);
  static GlobalType seq(Prefix head, GlobalType continuation);
  static GlobalType branch(Participant sender, Participant receiver, std::vector<Arm> arms);

  // Unchecked variants; only the formation tests should want these.
  static GlobalType rec(detail::Unchecked, RecVar v, GlobalType body);
  static GlobalType seq(detail::Unchecked, Prefix head, GlobalType continuation);
  static GlobalType branch(detail::Unchecked, Participant sender, Participant receiver,
                           std::vector<Arm> arms);

  Kind kind() const noexcept;

  const Prefix& head() const;              // Seq
  const GlobalType& continuation() const;  // Seq
  const Participant& sender() const;       // Branch
  const Participant& receiver() const;     // Branch
  const std::vector<Arm>& arms() const;    // Branch
  const RecVar& rec_var() const;           // Rec | Var
  const GlobalType& body() const;          // Rec

 private:
  struct Node;
  explicit GlobalType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct GlobalType::Arm {
  Label label;
  GlobalType body;
};

struct GlobalType::Node {
  Kind kind;
  std::optional<Prefix> head;              // Seq
  std::optional<GlobalType> child;         // Seq continuation | Rec body
  std::optional<Participant> sender;       // Branch
  std::optional<Participant> receiver;     // Branch
  std::vector<Arm> arms;                   // Branch
  std::optional<RecVar> var;               // Rec | Var
};

inline GlobalType::Kind GlobalType::kind() const noexcept { return node_->kind; }
inline const Prefix& GlobalType::head() const {
  assert(kind() == Kind::Seq);
  return *node_->head;
}
inline const GlobalType& GlobalType::continuation() const {
  assert(kind() == Kind::Seq);
  return *node_->child;
}
inline const Participant& GlobalType::sender() const {
  assert(kind() == Kind::Branch);
  return *node_->sender;
}
inline const Participant& GlobalType::receiver() const {
  assert(kind() == Kind::Branch);
  return *node_->receiver;
}
inline const std::vector<GlobalType::Arm>& GlobalType::arms() const {
  assert(kind() == Kind::Branch);
  return node_->arms;
}
inline const RecVar& GlobalType::rec_var() const {
  assert(kind() == Kind::Rec || kind() == Kind::Var);
  return *node_->var;
}
inline const GlobalType& GlobalType::body() const {
  assert(kind() == Kind::Rec);
  return *node_->child;
}

inline GlobalType GlobalType::end() {
  static const auto node = std::make_shared<const Node>(Node{Kind::End, {}, {}, {}, {}, {}, {}});
  return GlobalType(node);
}

inline GlobalType GlobalType::var(RecVar v) {
  return GlobalType(std::make_shared<const Node>(
      Node{Kind::Var, {}, {}, {}, {}, {}, std::move(v)}));
}

inline GlobalType GlobalType::seq(detail::Unchecked, Prefix head, GlobalType continuation) {
  return GlobalType(std::make_shared<const Node>(
      Node{Kind::Seq, std::move(head), std::move(continuation), {}, {}, {}, {}}));
}

inline GlobalType GlobalType::seq(Prefix head, GlobalType continuation) {
  if (!is_value_payload(head.payload()))
    throw FormationError("Global type", "sequencing prefix must carry a value, not a label");
  return seq(detail::unchecked, std::move(head), std::move(continuation));
}

inline GlobalType GlobalType::branch(detail::Unchecked, Participant sender, Participant receiver,
                                     std::vector<Arm> arms) {
  return GlobalType(std::make_shared<const Node>(Node{
      Kind::Branch, {}, {}, std::move(sender), std::move(receiver), std::move(arms), {}}));
}

inline GlobalType GlobalType::branch(Participant sender, Participant receiver,
                                     std::vector<Arm> arms) {
  if (arms.empty()) throw FormationError("Branching", "branch needs at least one arm");
  if (sender == receiver)
    throw FormationError("Global Prefix",
                         "participant '" + sender.name() + "' talks to itself");
  std::set<std::string> seen;
  for (const auto& arm : arms)
    if (!seen.insert(arm.label.name()).second)
      throw FormationError("Branching", "duplicate label '" + arm.label.name() + "'");
  return branch(detail::unchecked, std::move(sender), std::move(receiver), std::move(arms));
}

// True when every occurrence of v bound by an enclosing rec v sits under at
// least one communication. Occurrences shadowed by an inner rec v do not count.
inline bool is_guarded_in(const RecVar& v, const GlobalType& body) {
  switch (body.kind()) {
    case GlobalType::Kind::End:
      return true;
    case GlobalType::Kind::Var:
      return body.rec_var() != v;
    case GlobalType::Kind::Seq:
    case GlobalType::Kind::Branch:
      return true;  // everything below is guarded by this node
    case GlobalType::Kind::Rec:
      if (body.rec_var() == v) return true;  // shadowed
      return is_guarded_in(v, body.body());
  }
  return true;
}

inline GlobalType GlobalType::rec(detail::Unchecked, RecVar v, GlobalType body) {
  return GlobalType(std::make_shared<const Node>(
      Node{Kind::Rec, {}, std::move(body), {}, {}, {}, std::move(v)}));
}

inline GlobalType GlobalType::rec(RecVar v, GlobalType body) {
  if (!is_guarded_in(v, body))
    throw FormationError("Recursion", "recursion variable '" + v.name() + "' is unguarded");
  return rec(detail::unchecked, std::move(v), std::move(body));
}

class LocalType {
 public:
  enum class Kind { Send, Recv, Select, Offer, Rec, Var, End };
  struct Arm;

  static LocalType end();
  static LocalType var(RecVar v);
  static LocalType rec(RecVar v, LocalType body);
  static LocalType send(Participant peer, ValueSort sort, LocalType continuation);
  static LocalType recv(Participant peer, ValueSort sort, LocalType continuation);
  static LocalType select(Participant peer, std::vector<Arm> arms);
  static LocalType offer(Participant peer, std::vector<Arm> arms);

  Kind kind() const noexcept;

  const Participant& peer() const;         // Send | Recv | Select | Offer
  const ValueSort& sort() const;           // Send | Recv
  const LocalType& continuation() const;   // Send | Recv
  const std::vector<Arm>& arms() const;    // Select | Offer
  const RecVar& rec_var() const;           // Rec | Var
  const LocalType& body() const;           // Rec

 private:
  struct Node;
  explicit LocalType(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct LocalType::Arm {
  Label label;
  LocalType body;
};

struct LocalType::Node {
  Kind kind;
  std::optional<Participant> peer;
  std::optional<ValueSort> sort;
  std::optional<LocalType> child;  // Send/Recv continuation | Rec body
  std::vector<Arm> arms;
  std::optional<RecVar> var;
};

inline LocalType::Kind LocalType::kind() const noexcept { return node_->kind; }
inline const Participant& LocalType::peer() const {
  assert(node_->peer.has_value());
  return *node_->peer;
}
inline const ValueSort& LocalType::sort() const {
  assert(kind() == Kind::Send || kind() == Kind::Recv);
  return *node_->sort;
}
inline const LocalType& LocalType::continuation() const {
  assert(kind() == Kind::Send || kind() == Kind::Recv);
  return *node_->child;
}
inline const std::vector<LocalType::Arm>& LocalType::arms() const {
  assert(kind() == Kind::Select || kind() == Kind::Offer);
  return node_->arms;
}
inline const RecVar& LocalType::rec_var() const {
  assert(kind() == Kind::Rec || kind() == Kind::Var);
  return *node_->var;
}
inline const LocalType& LocalType::body() const {
  assert(kind() == Kind::Rec);
  return *node_->child;
}

inline LocalType LocalType::end() {
  static const auto node = std::make_shared<const Node>(Node{Kind::End, {}, {}, {}, {}, {}});
  return LocalType(node);
}
inline LocalType LocalType::var(RecVar v) {
  return LocalType(std::make_shared<const Node>(Node{Kind::Var, {}, {}, {}, {}, std::move(v)}));
}
inline LocalType LocalType::send(Participant peer, ValueSort sort, LocalType continuation) {
  return LocalType(std::make_shared<const Node>(
      Node{Kind::Send, std::move(peer), std::move(sort), std::move(continuation), {}, {}}));
}
inline LocalType LocalType::recv(Participant peer, ValueSort sort, LocalType continuation) {
  return LocalType(std::make_shared<const Node>(
      Node{Kind::Recv, std::move(peer), std::move(sort), std::move(continuation), {}, {}}));
}

namespace detail {
inline void check_local_arms(const std::vector<LocalType::Arm>& arms) {
  if (arms.empty()) throw FormationError("Branching", "choice needs at least one arm");
  std::set<std::string> seen;
  for (const auto& arm : arms)
    if (!seen.insert(arm.label.name()).second)
      throw FormationError("Branching", "duplicate label '" + arm.label.name() + "'");
}
}  // namespace detail

inline LocalType LocalType::select(Participant peer, std::vector<Arm> arms) {
  detail::check_local_arms(arms);
  return LocalType(std::make_shared<const Node>(
      Node{Kind::Select, std::move(peer), {}, {}, std::move(arms), {}}));
}
inline LocalType LocalType::offer(Participant peer, std::vector<Arm> arms) {
  detail::check_local_arms(arms);
  return LocalType(std::make_shared<const Node>(
      Node{Kind::Offer, std::move(peer), {}, {}, std::move(arms), {}}));
}

inline bool is_guarded_in(const RecVar& v, const LocalType& body) {
  switch (body.kind()) {
    case LocalType::Kind::End:
      return true;
    case LocalType::Kind::Var:
      return body.rec_var() != v;
    case LocalType::Kind::Send:
    case LocalType::Kind::Recv:
    case LocalType::Kind::Select:
    case LocalType::Kind::Offer:
      return true;
    case LocalType::Kind::Rec:
      if (body.rec_var() == v) return true;
      return is_guarded_in(v, body.body());
  }
  return true;
}

inline LocalType LocalType::rec(RecVar v, LocalType body) {
  if (!is_guarded_in(v, body))
    throw FormationError("Recursion", "recursion variable '" + v.name() + "' is unguarded");
  return LocalType(std::make_shared<const Node>(
      Node{Kind::Rec, {}, {}, std::move(body), {}, std::move(v)}));
}

// --- traversals ------------------------------------------------------------

inline void collect_participants(const GlobalType& g, std::set<Participant>& out) {
  switch (g.kind()) {
    case GlobalType::Kind::End:
    case GlobalType::Kind::Var:
      return;
    case GlobalType::Kind::Seq:
      out.insert(g.head().sender());
      out.insert(g.head().receiver());
      collect_participants(g.continuation(), out);
      return;
    case GlobalType::Kind::Branch:
      out.insert(g.sender());
      out.insert(g.receiver());
      for (const auto& arm : g.arms()) collect_participants(arm.body, out);
      return;
    case GlobalType::Kind::Rec:
      collect_participants(g.body(), out);
      return;
  }
}

inline std::set<Participant> participants(const GlobalType& g) {
  std::set<Participant> out;
  collect_participants(g, out);
  return out;
}

inline void collect_free_vars(const GlobalType& g, std::set<RecVar>& bound,
                              std::set<RecVar>& out) {
  switch (g.kind()) {
    case GlobalType::Kind::End:
      return;
    case GlobalType::Kind::Var:
      if (!bound.count(g.rec_var())) out.insert(g.rec_var());
      return;
    case GlobalType::Kind::Seq:
      collect_free_vars(g.continuation(), bound, out);
      return;
    case GlobalType::Kind::Branch:
      for (const auto& arm : g.arms()) collect_free_vars(arm.body, bound, out);
      return;
    case GlobalType::Kind::Rec: {
      bool inserted = bound.insert(g.rec_var()).second;
      collect_free_vars(g.body(), bound, out);
      if (inserted) bound.erase(g.rec_var());
      return;
    }
  }
}

inline std::set<RecVar> free_vars(const GlobalType& g) {
  std::set<RecVar> bound, out;
  collect_free_vars(g, bound, out);
  return out;
}

inline bool is_closed(const GlobalType& g) { return free_vars(g).empty(); }

inline void collect_free_vars(const LocalType& t, std::set<RecVar>& bound, std::set<RecVar>& out) {
  switch (t.kind()) {
    case LocalType::Kind::End:
      return;
    case LocalType::Kind::Var:
      if (!bound.count(t.rec_var())) out.insert(t.rec_var());
      return;
    case LocalType::Kind::Send:
    case LocalType::Kind::Recv:
      collect_free_vars(t.continuation(), bound, out);
      return;
    case LocalType::Kind::Select:
    case LocalType::Kind::Offer:
      for (const auto& arm : t.arms()) collect_free_vars(arm.body, bound, out);
      return;
    case LocalType::Kind::Rec: {
      bool inserted = bound.insert(t.rec_var()).second;
      collect_free_vars(t.body(), bound, out);
      if (inserted) bound.erase(t.rec_var());
      return;
    }
  }
}

inline std::set<RecVar> free_vars(const LocalType& t) {
  std::set<RecVar> bound, out;
  collect_free_vars(t, bound, out);
  return out;
}

inline bool is_closed(const LocalType& t) { return free_vars(t).empty(); }

// Substitute replacement for every free occurrence of v. Callers substitute
// closed types (LTS unfolding), so no capture avoidance beyond shadowing.
inline GlobalType subst(const GlobalType& g, const RecVar& v, const GlobalType& replacement) {
  switch (g.kind()) {
    case GlobalType::Kind::End:
      return g;
    case GlobalType::Kind::Var:
      return g.rec_var() == v ? replacement : g;
    case GlobalType::Kind::Seq:
      return GlobalType::seq(g.head(), subst(g.continuation(), v, replacement));
    case GlobalType::Kind::Branch: {
      std::vector<GlobalType::Arm> arms;
      arms.reserve(g.arms().size());
      for (const auto& arm : g.arms())
        arms.push_back({arm.label, subst(arm.body, v, replacement)});
      return GlobalType::branch(g.sender(), g.receiver(), std::move(arms));
    }
    case GlobalType::Kind::Rec:
      if (g.rec_var() == v) return g;
      return GlobalType::rec(g.rec_var(), subst(g.body(), v, replacement));
  }
  return g;
}

inline LocalType subst(const LocalType& t, const RecVar& v, const LocalType& replacement) {
  switch (t.kind()) {
    case LocalType::Kind::End:
      return t;
    case LocalType::Kind::Var:
      return t.rec_var() == v ? replacement : t;
    case LocalType::Kind::Send:
      return LocalType::send(t.peer(), t.sort(), subst(t.continuation(), v, replacement));
    case LocalType::Kind::Recv:
      return LocalType::recv(t.peer(), t.sort(), subst(t.continuation(), v, replacement));
    case LocalType::Kind::Select:
    case LocalType::Kind::Offer: {
      std::vector<LocalType::Arm> arms;
      arms.reserve(t.arms().size());
      for (const auto& arm : t.arms()) arms.push_back({arm.label, subst(arm.body, v, replacement)});
      return t.kind() == LocalType::Kind::Select ? LocalType::select(t.peer(), std::move(arms))
                                                 : LocalType::offer(t.peer(), std::move(arms));
    }
    case LocalType::Kind::Rec:
      if (t.rec_var() == v) return t;
      return LocalType::rec(t.rec_var(), subst(t.body(), v, replacement));
  }
  return t;
}

// --- head chain ------------------------------------------------------------

inline int seq_chain_length(const GlobalType& g) {
  int n = 0;
  const GlobalType* cur = &g;
  while (cur->kind() == GlobalType::Kind::Seq) {
    ++n;
    cur = &cur->continuation();
  }
  return n;
}

// 1-based position in the head Seq chain.
inline const Prefix& prefix_at(const GlobalType& g, int position) {
  if (position < 1)
    throw IndexOutOfChainError("chain position " + std::to_string(position) + " is not positive");
  const GlobalType* cur = &g;
  for (int i = 1; cur->kind() == GlobalType::Kind::Seq; ++i) {
    if (i == position) return cur->head();
    cur = &cur->continuation();
  }
  throw IndexOutOfChainError("chain position " + std::to_string(position) +
                             " exceeds head chain of length " + std::to_string(seq_chain_length(g)));
}

// Continuation after the first `position` prefixes of the head chain.
inline GlobalType tail_at(const GlobalType& g, int position) {
  if (position < 1)
    throw IndexOutOfChainError("chain position " + std::to_string(position) + " is not positive");
  const GlobalType* cur = &g;
  for (int i = 1; cur->kind() == GlobalType::Kind::Seq; ++i) {
    if (i == position) return cur->continuation();
    cur = &cur->continuation();
  }
  throw IndexOutOfChainError("chain position " + std::to_string(position) +
                             " exceeds head chain of length " + std::to_string(seq_chain_length(g)));
}

// --- node paths ------------------------------------------------------------

// A path addresses a subterm: Seq continuation and Rec body are child 0, a
// Branch arm's body is child i. The empty path is the root.
using NodePath = std::vector<int>;

inline const GlobalType* node_at(const GlobalType& g, const NodePath& path, size_t from = 0) {
  if (from == path.size()) return &g;
  int step = path[from];
  switch (g.kind()) {
    case GlobalType::Kind::Seq:
      return step == 0 ? node_at(g.continuation(), path, from + 1) : nullptr;
    case GlobalType::Kind::Rec:
      return step == 0 ? node_at(g.body(), path, from + 1) : nullptr;
    case GlobalType::Kind::Branch:
      if (step < 0 || static_cast<size_t>(step) >= g.arms().size()) return nullptr;
      return node_at(g.arms()[static_cast<size_t>(step)].body, path, from + 1);
    default:
      return nullptr;
  }
}

inline GlobalType replace_at(const GlobalType& g, const NodePath& path,
                             const GlobalType& replacement, size_t from = 0) {
  if (from == path.size()) return replacement;
  int step = path[from];
  switch (g.kind()) {
    case GlobalType::Kind::Seq:
      if (step != 0) throw Error("path step does not address a node");
      return GlobalType::seq(g.head(), replace_at(g.continuation(), path, replacement, from + 1));
    case GlobalType::Kind::Rec:
      if (step != 0) throw Error("path step does not address a node");
      return GlobalType::rec(g.rec_var(), replace_at(g.body(), path, replacement, from + 1));
    case GlobalType::Kind::Branch: {
      if (step < 0 || static_cast<size_t>(step) >= g.arms().size())
        throw Error("path step does not address a node");
      std::vector<GlobalType::Arm> arms = g.arms();
      auto& slot = arms[static_cast<size_t>(step)];
      slot = {slot.label, replace_at(slot.body, path, replacement, from + 1)};
      return GlobalType::branch(g.sender(), g.receiver(), std::move(arms));
    }
    default:
      throw Error("path step does not address a node");
  }
}

// --- alpha equivalence -----------------------------------------------------

namespace detail {

using BinderEnv = std::vector<std::string>;  // stack of binder names; index = level

inline int binder_level(const BinderEnv& env, const std::string& name) {
  for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i)
    if (env[static_cast<size_t>(i)] == name) return i;
  return -1;
}

template <typename Arm>
inline std::vector<size_t> arm_order(const std::vector<Arm>& arms) {
  std::vector<size_t> idx(arms.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return arms[a].label < arms[b].label; });
  return idx;
}

inline bool alpha_eq(const GlobalType& a, const GlobalType& b, BinderEnv& ea, BinderEnv& eb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case GlobalType::Kind::End:
      return true;
    case GlobalType::Kind::Var: {
      int la = binder_level(ea, a.rec_var().name());
      int lb = binder_level(eb, b.rec_var().name());
      if (la != lb) return false;
      return la >= 0 || a.rec_var() == b.rec_var();  // both free: names must agree
    }
    case GlobalType::Kind::Seq:
      return a.head() == b.head() && alpha_eq(a.continuation(), b.continuation(), ea, eb);
    case GlobalType::Kind::Branch: {
      if (a.sender() != b.sender() || a.receiver() != b.receiver()) return false;
      if (a.arms().size() != b.arms().size()) return false;
      auto oa = arm_order(a.arms());
      auto ob = arm_order(b.arms());
      for (size_t i = 0; i < oa.size(); ++i) {
        const auto& armA = a.arms()[oa[i]];
        const auto& armB = b.arms()[ob[i]];
        if (armA.label != armB.label) return false;
        if (!alpha_eq(armA.body, armB.body, ea, eb)) return false;
      }
      return true;
    }
    case GlobalType::Kind::Rec: {
      ea.push_back(a.rec_var().name());
      eb.push_back(b.rec_var().name());
      bool ok = alpha_eq(a.body(), b.body(), ea, eb);
      ea.pop_back();
      eb.pop_back();
      return ok;
    }
  }
  return false;
}

inline bool alpha_eq(const LocalType& a, const LocalType& b, BinderEnv& ea, BinderEnv& eb) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case LocalType::Kind::End:
      return true;
    case LocalType::Kind::Var: {
      int la = binder_level(ea, a.rec_var().name());
      int lb = binder_level(eb, b.rec_var().name());
      if (la != lb) return false;
      return la >= 0 || a.rec_var() == b.rec_var();
    }
    case LocalType::Kind::Send:
    case LocalType::Kind::Recv:
      return a.peer() == b.peer() && a.sort() == b.sort() &&
             alpha_eq(a.continuation(), b.continuation(), ea, eb);
    case LocalType::Kind::Select:
    case LocalType::Kind::Offer: {
      if (a.peer() != b.peer() || a.arms().size() != b.arms().size()) return false;
      auto oa = arm_order(a.arms());
      auto ob = arm_order(b.arms());
      for (size_t i = 0; i < oa.size(); ++i) {
        const auto& armA = a.arms()[oa[i]];
        const auto& armB = b.arms()[ob[i]];
        if (armA.label != armB.label) return false;
        if (!alpha_eq(armA.body, armB.body, ea, eb)) return false;
      }
      return true;
    }
    case LocalType::Kind::Rec: {
      ea.push_back(a.rec_var().name());
      eb.push_back(b.rec_var().name());
      bool ok = alpha_eq(a.body(), b.body(), ea, eb);
      ea.pop_back();
      eb.pop_back();
      return ok;
    }
  }
  return false;
}

// Injective flat encoding with de-Bruijn-levelled binders and label-sorted
// arms; equal strings exactly for alpha-equal types.
inline void encode(const GlobalType& g, BinderEnv& env, std::string& out) {
  switch (g.kind()) {
    case GlobalType::Kind::End:
      out += 'e';
      return;
    case GlobalType::Kind::Var: {
      int level = binder_level(env, g.rec_var().name());
      out += "v(";
      out += level >= 0 ? std::to_string(level) : "?" + g.rec_var().name();
      out += ')';
      return;
    }
    case GlobalType::Kind::Seq:
      out += "s(";
      out += g.head().sender().name();
      out += ';';
      out += g.head().receiver().name();
      out += ';';
      out += is_value_payload(g.head().payload()) ? 'v' : 'l';
      out += payload_name(g.head().payload());
      out += ')';
      encode(g.continuation(), env, out);
      return;
    case GlobalType::Kind::Branch: {
      out += "b(";
      out += g.sender().name();
      out += ';';
      out += g.receiver().name();
      for (size_t i : arm_order(g.arms())) {
        out += '[';
        out += g.arms()[i].label.name();
        out += ';';
        encode(g.arms()[i].body, env, out);
        out += ']';
      }
      out += ')';
      return;
    }
    case GlobalType::Kind::Rec:
      out += "r(";
      out += std::to_string(env.size());
      out += ')';
      env.push_back(g.rec_var().name());
      encode(g.body(), env, out);
      env.pop_back();
      return;
  }
}

inline void encode(const LocalType& t, BinderEnv& env, std::string& out) {
  switch (t.kind()) {
    case LocalType::Kind::End:
      out += 'e';
      return;
    case LocalType::Kind::Var: {
      int level = binder_level(env, t.rec_var().name());
      out += "v(";
      out += level >= 0 ? std::to_string(level) : "?" + t.rec_var().name();
      out += ')';
      return;
    }
    case LocalType::Kind::Send:
    case LocalType::Kind::Recv:
      out += t.kind() == LocalType::Kind::Send ? "o(" : "i(";
      out += t.peer().name();
      out += ';';
      out += t.sort().name();
      out += ')';
      encode(t.continuation(), env, out);
      return;
    case LocalType::Kind::Select:
    case LocalType::Kind::Offer: {
      out += t.kind() == LocalType::Kind::Select ? "c(" : "a(";
      out += t.peer().name();
      for (size_t i : arm_order(t.arms())) {
        out += '[';
        out += t.arms()[i].label.name();
        out += ';';
        encode(t.arms()[i].body, env, out);
        out += ']';
      }
      out += ')';
      return;
    }
    case LocalType::Kind::Rec:
      out += "r(";
      out += std::to_string(env.size());
      out += ')';
      env.push_back(t.rec_var().name());
      encode(t.body(), env, out);
      env.pop_back();
      return;
  }
}

}  // namespace detail

inline bool alpha_equal(const GlobalType& a, const GlobalType& b) {
  detail::BinderEnv ea, eb;
  return detail::alpha_eq(a, b, ea, eb);
}

inline bool alpha_equal(const LocalType& a, const LocalType& b) {
  detail::BinderEnv ea, eb;
  return detail::alpha_eq(a, b, ea, eb);
}

inline std::string canonical_key(const GlobalType& g) {
  std::string out;
  detail::BinderEnv env;
  detail::encode(g, env, out);
  return out;
}

inline std::string canonical_key(const LocalType& t) {
  std::string out;
  detail::BinderEnv env;
  detail::encode(t, env, out);
  return out;
}

inline bool operator==(const GlobalType& a, const GlobalType& b) { return alpha_equal(a, b); }
inline bool operator!=(const GlobalType& a, const GlobalType& b) { return !alpha_equal(a, b); }
inline bool operator==(const LocalType& a, const LocalType& b) { return alpha_equal(a, b); }
inline bool operator!=(const LocalType& a, const LocalType& b) { return !alpha_equal(a, b); }

}  // namespace mpst
