#pragma once

// Parallel (simultaneous) reduction and the Takahashi complete development.
// Two independent views of the parallel step are provided and cross-checked
// by the tests: par_reducts enumerates the full reduct set bottom-up, while
// par_step_check decides a single pair (m, n) by syntax-directed recursion,
// inverting the beta-substitution instead of enumerating reduct sets.

#include <optional>

#include "conflab/reduction.hpp"
#include "conflab/relation.hpp"
#include "conflab/term.hpp"

namespace conflab {

// Raised when an operation's stated precondition fails.
struct PreconditionError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Enumeration

// Every parallel reduct of t: any subset of the currently-visible redexes is
// contracted simultaneously. The set always contains t itself (contract
// nothing) as its first element; ordered, duplicate-free.
inline std::vector<Term> par_reducts(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return {t};
    case Term::Kind::Lam: {
      std::vector<Term> out;
      for (auto& b : par_reducts(t.body())) out.push_back(Term::lam(std::move(b)));
      return out;
    }
    case Term::Kind::App: {
      std::vector<Term> as = par_reducts(t.arg());
      std::vector<Term> out;
      if (t.fun().is_lam()) {
        std::vector<Term> bs = par_reducts(t.fun().body());
        // congruence products first (so t itself stays first), then the
        // simultaneous-beta products
        for (const auto& b : bs)
          for (const auto& a : as) out.push_back(Term::app(Term::lam(b), a));
        for (const auto& b : bs)
          for (const auto& a : as) out.push_back(subst(b, 0, a));
      } else {
        std::vector<Term> fs = par_reducts(t.fun());
        for (const auto& f : fs)
          for (const auto& a : as) out.push_back(Term::app(f, a));
      }
      dedup_keep_first(out);
      return out;
    }
  }
  return {};
}

inline Relation par_relation() {
  return Relation{"par", [](const Term& t) { return par_reducts(t); }};
}

// ---------------------------------------------------------------------------
// Decision procedure

namespace detail {

// shift(t, -d, cutoff) if every free index in [cutoff, cutoff+d) is absent,
// nullopt otherwise.
inline std::optional<Term> try_unshift(const Term& t, int d, int cutoff = 0) {
  if (d == 0) return t;
  switch (t.kind()) {
    case Term::Kind::Var: {
      int k = t.var_index();
      if (k < cutoff) return t;
      if (k - d < cutoff) return std::nullopt;
      return Term::var(k - d);
    }
    case Term::Kind::Lam: {
      auto b = try_unshift(t.body(), d, cutoff + 1);
      if (!b) return std::nullopt;
      return Term::lam(std::move(*b));
    }
    case Term::Kind::App: {
      auto f = try_unshift(t.fun(), d, cutoff);
      if (!f) return std::nullopt;
      auto a = try_unshift(t.arg(), d, cutoff);
      if (!a) return std::nullopt;
      return Term::app(std::move(*f), std::move(*a));
    }
  }
  return std::nullopt;
}

// Candidate substituted values for inverting  n == subst(b', 0, a'):
// every subterm of n unshifted past the binders above it.
inline void collect_unshifted_subterms(const Term& n, int depth,
                                       std::vector<Term>& out) {
  if (auto c = try_unshift(n, depth)) out.push_back(std::move(*c));
  switch (n.kind()) {
    case Term::Kind::Var:
      return;
    case Term::Kind::Lam:
      collect_unshifted_subterms(n.body(), depth + 1, out);
      return;
    case Term::Kind::App:
      collect_unshifted_subterms(n.fun(), depth, out);
      collect_unshifted_subterms(n.arg(), depth, out);
      return;
  }
}

// Every b' with subst(b', j, cand) == n. At each position either the whole
// subtree is abstracted to the bound variable (when it equals cand lifted
// by j) or the node is kept and its free indices >= j are bumped back up —
// the exact inverse of subst's bookkeeping.
inline std::vector<Term> all_abstractions(const Term& n, const Term& cand,
                                          int j) {
  std::vector<Term> out;
  if (auto down = try_unshift(n, j); down && *down == cand)
    out.push_back(Term::var(j));
  switch (n.kind()) {
    case Term::Kind::Var: {
      int k = n.var_index();
      out.push_back(Term::var(k >= j ? k + 1 : k));
      break;
    }
    case Term::Kind::Lam: {
      for (auto& b : all_abstractions(n.body(), cand, j + 1))
        out.push_back(Term::lam(std::move(b)));
      break;
    }
    case Term::Kind::App: {
      auto fs = all_abstractions(n.fun(), cand, j);
      auto as = all_abstractions(n.arg(), cand, j);
      for (const auto& f : fs)
        for (const auto& a : as) out.push_back(Term::app(f, a));
      break;
    }
  }
  dedup_keep_first(out);
  return out;
}

}  // namespace detail

// Does m parallel-reduce to n in one step? Decided by recursion on m:
//   Var:  n must be the same variable (a parallel step never invents work).
//   Lam:  n must be a Lam whose body follows.
//   App:  either the congruence case (both components step), or m is a
//         redex (Lam b) a and n == subst(b', 0, a') for some b', a' with
//         b => b' and a => a'. The pair (b', a') is recovered from n by
//         anti-substitution: a' must be a depth-unshifted subterm of n (or
//         a itself, for vacuous substitutions), and b' one of the finitely
//         many abstractions of n over it.
inline bool par_step_check(const Term& m, const Term& n) {
  switch (m.kind()) {
    case Term::Kind::Var:
      return n == m;
    case Term::Kind::Lam:
      return n.is_lam() && par_step_check(m.body(), n.body());
    case Term::Kind::App: {
      if (n.is_app() && par_step_check(m.fun(), n.fun()) &&
          par_step_check(m.arg(), n.arg()))
        return true;
      if (!m.fun().is_lam()) return false;
      const Term& b = m.fun().body();
      const Term& a = m.arg();
      std::vector<Term> candidates{a};
      detail::collect_unshifted_subterms(n, 0, candidates);
      dedup_keep_first(candidates);
      for (const Term& cand : candidates) {
        if (!par_step_check(a, cand)) continue;
        for (const Term& bp : detail::all_abstractions(n, cand, 0)) {
          if (par_step_check(b, bp)) return true;
        }
      }
      return false;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Complete development

// Contract every visible redex of t, innermost results substituted through:
//   cd(x) = x;  cd(Lam b) = Lam (cd b);
//   cd((Lam b) a) = subst(cd b, 0, cd a);
//   cd(f a) = cd(f) cd(a) when f is not a Lam.
// For every n with m => n, also n => cd(m) (the triangle property).
inline Term complete_dev(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t;
    case Term::Kind::Lam:
      return Term::lam(complete_dev(t.body()));
    case Term::Kind::App:
      if (t.fun().is_lam())
        return subst(complete_dev(t.fun().body()), 0, complete_dev(t.arg()));
      return Term::app(complete_dev(t.fun()), complete_dev(t.arg()));
  }
  throw IndexError("unreachable");
}

// Substitutivity probe: given m => m' and n => n' (checked; throws
// PreconditionError otherwise), does subst(m,0,n) => subst(m',0,n')?
// The substitution lemma says this is always true; the checker computes it
// rather than assuming it.
inline bool par_subst_check(const Term& m, const Term& m1, const Term& n,
                            const Term& n1) {
  if (!par_step_check(m, m1) || !par_step_check(n, n1))
    throw PreconditionError(
        "par_subst_check: arguments are not parallel steps");
  return par_step_check(subst(m, 0, n), subst(m1, 0, n1));
}

}  // namespace conflab
