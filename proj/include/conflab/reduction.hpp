#pragma once

// One-step beta / eta reduction as finite reduct-set functions, plus the
// budgeted closure searches built on any BasicRelation: reachable sets,
// joinability, and leftmost-outermost normalization.

#include <deque>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "conflab/relation.hpp"
#include "conflab/term.hpp"

namespace conflab {

using Relation = BasicRelation<Term>;
using Trace = BasicTrace<Term>;
using Join = BasicJoin<Term>;
using Counterexample = BasicCounterexample<Term>;

// ---------------------------------------------------------------------------
// One-step reduct sets (pre-order: a redex at a node is contracted before
// redexes inside its children; fun before arg).

namespace detail {

// rule selector bits for the combined traversal
inline constexpr unsigned kBetaRule = 1u;
inline constexpr unsigned kEtaRule = 2u;

inline void one_step_reducts(const Term& t, unsigned rules,
                             std::vector<Term>& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return;
    case Term::Kind::Lam: {
      // eta redex: Lam (App m (Var 0)) with 0 not free in m.
      if ((rules & kEtaRule) && t.body().is_app() &&
          t.body().arg().is_var() && t.body().arg().var_index() == 0) {
        const Term& m = t.body().fun();
        if (auto peeled = strengthen(m, 0)) out.push_back(std::move(*peeled));
      }
      std::vector<Term> inner;
      one_step_reducts(t.body(), rules, inner);
      for (auto& b : inner) out.push_back(Term::lam(std::move(b)));
      return;
    }
    case Term::Kind::App: {
      // beta redex: App (Lam b) a  |->  subst(b, 0, a).
      if ((rules & kBetaRule) && t.fun().is_lam())
        out.push_back(subst(t.fun().body(), 0, t.arg()));
      std::vector<Term> fs;
      one_step_reducts(t.fun(), rules, fs);
      for (auto& f : fs) out.push_back(Term::app(std::move(f), t.arg()));
      std::vector<Term> as;
      one_step_reducts(t.arg(), rules, as);
      for (auto& a : as) out.push_back(Term::app(t.fun(), std::move(a)));
      return;
    }
  }
}

inline std::vector<Term> reducts_for(const Term& t, unsigned rules) {
  std::vector<Term> out;
  one_step_reducts(t, rules, out);
  dedup_keep_first(out);
  return out;
}

}  // namespace detail

// All one-step beta reducts of t, outermost-leftmost first, duplicate-free.
inline std::vector<Term> beta_reducts(const Term& t) {
  return detail::reducts_for(t, detail::kBetaRule);
}

// All one-step eta reducts:  Lam (App m (Var 0))  |->  strengthen(m, 0)
// wherever index 0 does not occur in m.
inline std::vector<Term> eta_reducts(const Term& t) {
  return detail::reducts_for(t, detail::kEtaRule);
}

// One-step beta-or-eta. A single traversal fires eta at Lam nodes and beta
// at App nodes (the two redex shapes never collide on one node), so the
// result is the set union of beta_reducts and eta_reducts in redex order.
inline std::vector<Term> betaeta_reducts(const Term& t) {
  return detail::reducts_for(t, detail::kBetaRule | detail::kEtaRule);
}

inline Relation beta_relation() {
  return Relation{"beta", [](const Term& t) { return beta_reducts(t); }};
}
inline Relation eta_relation() {
  return Relation{"eta", [](const Term& t) { return eta_reducts(t); }};
}
inline Relation betaeta_relation() {
  return Relation{"betaeta", [](const Term& t) { return betaeta_reducts(t); }};
}

// ---------------------------------------------------------------------------
// Budgeted closures

// Everything reachable from `start` in at most depth_budget steps, found by
// breadth-first search in canonical reduct order. `terms` is in discovery
// order and always begins with `start` itself.
//   truncated: the node budget cut the search (some successor was dropped).
//   saturated: the full closure was computed — no cut, and the frontier
//              emptied before the depth budget ran out.
template <class T>
struct ReachResult {
  std::vector<T> terms;
  bool truncated = false;
  bool saturated = false;
};

template <class T>
ReachResult<T> reachable(const T& start, const BasicRelation<T>& rel,
                         int depth_budget, int node_budget) {
  ReachResult<T> res;
  std::unordered_set<T> seen;
  seen.insert(start);
  res.terms.push_back(start);
  std::vector<T> frontier{start};
  for (int d = 0; d < depth_budget && !frontier.empty(); ++d) {
    std::vector<T> next;
    for (const T& t : frontier) {
      for (T& n : rel.reducts(t)) {
        if (seen.count(n)) continue;
        if (static_cast<int>(res.terms.size()) >= node_budget) {
          res.truncated = true;
          return res;
        }
        seen.insert(n);
        res.terms.push_back(n);
        next.push_back(std::move(n));
      }
    }
    frontier = std::move(next);
  }
  res.saturated = frontier.empty();
  return res;
}

namespace detail {

// Breadth-first closure that remembers how each term was first reached, so
// shortest traces can be read back. Same budgets/flags as `reachable`.
template <class T>
struct ParentClosure {
  std::vector<T> order;                // discovery order, starts with source
  std::unordered_map<T, T> parent;     // first-discovery predecessor
  bool truncated = false;
  bool saturated = false;

  BasicTrace<T> trace_to(const T& target) const {
    BasicTrace<T> back{target};
    T cur = target;
    auto it = parent.find(cur);
    while (it != parent.end()) {
      cur = it->second;
      back.push_back(cur);
      it = parent.find(cur);
    }
    return BasicTrace<T>(back.rbegin(), back.rend());
  }
};

template <class T>
ParentClosure<T> parent_closure(const T& start, const BasicRelation<T>& rel,
                                int depth_budget, int node_budget) {
  ParentClosure<T> res;
  std::unordered_set<T> seen{start};
  res.order.push_back(start);
  std::vector<T> frontier{start};
  for (int d = 0; d < depth_budget && !frontier.empty(); ++d) {
    std::vector<T> next;
    for (const T& t : frontier) {
      for (T& n : rel.reducts(t)) {
        if (seen.count(n)) continue;
        if (static_cast<int>(res.order.size()) >= node_budget) {
          res.truncated = true;
          return res;
        }
        seen.insert(n);
        res.parent.emplace(n, t);
        res.order.push_back(n);
        next.push_back(std::move(n));
      }
    }
    frontier = std::move(next);
  }
  res.saturated = frontier.empty();
  return res;
}

// Join search exposing saturation, for checkers that must distinguish a
// definitive miss from budget exhaustion.
template <class T>
struct JoinSearch {
  std::optional<BasicJoin<T>> join;
  bool left_saturated = false;
  bool right_saturated = false;
};

template <class T>
JoinSearch<T> join_search(const T& t1, const T& t2, const BasicRelation<T>& rel,
                          int depth_budget, int node_budget) {
  JoinSearch<T> out;
  auto left = parent_closure(t1, rel, depth_budget, node_budget);
  auto right = parent_closure(t2, rel, depth_budget, node_budget);
  out.left_saturated = left.saturated;
  out.right_saturated = right.saturated;
  std::unordered_set<T> right_set(right.order.begin(), right.order.end());
  // First common term in the left closure's discovery order.
  for (const T& w : left.order) {
    if (right_set.count(w)) {
      out.join = BasicJoin<T>{w, left.trace_to(w), right.trace_to(w)};
      break;
    }
  }
  return out;
}

}  // namespace detail

// Do t1 and t2 have a common reduct within the budgets? Returns the first
// common term in the left-hand closure's discovery order, with shortest
// traces from each side. nullopt means "not found within budget" — never a
// claim of non-joinability.
template <class T>
std::optional<BasicJoin<T>> joinable(const T& t1, const T& t2,
                                     const BasicRelation<T>& rel,
                                     int depth_budget, int node_budget) {
  return detail::join_search(t1, t2, rel, depth_budget, node_budget).join;
}

// ---------------------------------------------------------------------------
// Normalization

template <class T>
struct NormalizeResult {
  T term;            // the normal form, or the last term reached
  bool normal_form;  // false iff the fuel ran out first
  int steps;
};

// Leftmost-outermost normalization: repeatedly contract the first reduct in
// canonical order, at most `fuel` steps.
template <class T>
NormalizeResult<T> normalize(const T& t, const BasicRelation<T>& rel,
                             int fuel) {
  T cur = t;
  for (int i = 0; i < fuel; ++i) {
    auto rs = rel.reducts(cur);
    if (rs.empty()) return {cur, true, i};
    cur = std::move(rs.front());
  }
  return {cur, rel.reducts(cur).empty(), fuel};
}

}  // namespace conflab
