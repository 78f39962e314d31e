#pragma once

// Bounded exhaustive term generation and counterexample search.
//
// Untyped corpora enumerate every term up to a height bound over a given
// number of free variables; typed corpora enumerate well-typed terms by
// building them type-directedly, drawing cut types (application arguments,
// projection partners, type-application heads) from a bounded type pool.
// Both enumerations are deterministic; corpora are listed height-major, and
// within one height class intro forms come before elim forms.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "conflab/reduction.hpp"
#include "conflab/relation.hpp"
#include "conflab/systemf.hpp"
#include "conflab/systemf_syntax.hpp"
#include "conflab/term.hpp"

namespace conflab {

enum class Calculus { Untyped, SystemF };

// What to generate. Untyped runs use height_bound and free_context_size;
// typed runs additionally fix the ambient context, the bound on pool types,
// and optionally a single target type (default: every pool type).
struct CorpusSpec {
  int height_bound = 3;
  int free_context_size = 0;
  Calculus calculus = Calculus::Untyped;
  std::optional<Ty> target_type;
  TypedContext typed_context;
  int type_height_bound = 1;
};

// ---------------------------------------------------------------------------
// Structural diff

enum class ChildSel { Body, Fun, Arg };
enum class MismatchKind { Constructor, VarIndex };

// Path (root-down) to the first mismatching node, pre-order, fun before arg.
struct DiffWitness {
  std::vector<ChildSel> path;
  MismatchKind kind;
};

inline std::optional<DiffWitness> diff(const Term& a, const Term& b) {
  std::vector<ChildSel> path;
  std::optional<DiffWitness> found;
  std::function<bool(const Term&, const Term&)> go = [&](const Term& a,
                                                         const Term& b) {
    if (a.kind() != b.kind()) {
      found = DiffWitness{path, MismatchKind::Constructor};
      return true;
    }
    switch (a.kind()) {
      case Term::Kind::Var:
        if (a.var_index() != b.var_index()) {
          found = DiffWitness{path, MismatchKind::VarIndex};
          return true;
        }
        return false;
      case Term::Kind::Lam: {
        path.push_back(ChildSel::Body);
        bool hit = go(a.body(), b.body());
        path.pop_back();
        return hit;
      }
      case Term::Kind::App: {
        path.push_back(ChildSel::Fun);
        bool hit = go(a.fun(), b.fun());
        path.pop_back();
        if (hit) return true;
        path.push_back(ChildSel::Arg);
        hit = go(a.arg(), b.arg());
        path.pop_back();
        return hit;
      }
    }
    return false;
  };
  go(a, b);
  return found;
}

// ---------------------------------------------------------------------------
// One-step joinability (shared by the diamond checker and the search)

// True iff the peak legs m1, m2 refute the diamond property outright: they
// are distinct terms, neither reaches the other in one step, and they have
// no common one-step reduct. (Equal legs, or legs one step apart, close the
// diamond degenerately; rel is a single-step relation, so its reduct sets
// are complete and a miss here is a genuine refutation.)
template <class T>
bool not_one_step_joinable(const T& m1, const T& m2,
                           const BasicRelation<T>& rel) {
  if (m1 == m2) return false;
  std::vector<T> r1 = rel.reducts(m1);
  for (const T& x : r1)
    if (x == m2) return false;
  std::vector<T> r2 = rel.reducts(m2);
  for (const T& x : r2)
    if (x == m1) return false;
  std::unordered_set<T> set1(r1.begin(), r1.end());
  for (const T& x : r2)
    if (set1.count(x)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Untyped enumeration

namespace detail {

// Memoized exact-height classes: exact(k, c) lists every term of height
// exactly k with free indices < c. Order within a class: lambdas first
// (over exact(k-1, c+1)), then applications by (fun height, arg height)
// lexicographically with the fun component major.
class UntypedEnum {
 public:
  const std::vector<Term>& exact(int k, int c) {
    auto key = std::make_pair(k, c);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (k == 0) {
      for (int v = 0; v < c; ++v) out.push_back(Term::var(v));
    } else {
      for (const Term& b : exact(k - 1, c + 1)) out.push_back(Term::lam(b));
      for (int hf = 0; hf < k; ++hf) {
        for (int ha = 0; ha < k; ++ha) {
          if (std::max(hf, ha) != k - 1) continue;
          const std::vector<Term>& fs = exact(hf, c);
          const std::vector<Term>& as = exact(ha, c);
          for (const Term& f : fs)
            for (const Term& a : as) out.push_back(Term::app(f, a));
        }
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  std::map<std::pair<int, int>, std::vector<Term>> memo_;
};

}  // namespace detail

// Every untyped term of height <= spec.height_bound with free indices
// < spec.free_context_size, height-major, deterministic, duplicate-free.
inline std::vector<Term> gen_terms(const CorpusSpec& spec) {
  if (spec.calculus != Calculus::Untyped)
    throw Error("gen_terms expects an untyped corpus spec");
  if (spec.height_bound < 0 || spec.free_context_size < 0)
    throw Error("corpus bounds must be non-negative");
  detail::UntypedEnum e;
  std::vector<Term> out;
  for (int k = 0; k <= spec.height_bound; ++k) {
    const std::vector<Term>& cls = e.exact(k, spec.free_context_size);
    out.insert(out.end(), cls.begin(), cls.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Type pool and typed enumeration

namespace detail {

// Every type of height exactly k over m type variables: variables then Unit
// at height 0; arrows, then products (each minor-component-major pairs as in
// the term enumeration), then foralls at height k.
inline std::vector<Ty> ty_exact(int k, int m) {
  std::vector<Ty> out;
  if (k == 0) {
    for (int v = 0; v < m; ++v) out.push_back(Ty::tvar(v));
    out.push_back(Ty::unit());
    return out;
  }
  for (int hd = 0; hd < k; ++hd) {
    for (int hc = 0; hc < k; ++hc) {
      if (std::max(hd, hc) != k - 1) continue;
      for (const Ty& d : ty_exact(hd, m))
        for (const Ty& c : ty_exact(hc, m)) out.push_back(Ty::arr(d, c));
    }
  }
  for (int hl = 0; hl < k; ++hl) {
    for (int hr = 0; hr < k; ++hr) {
      if (std::max(hl, hr) != k - 1) continue;
      for (const Ty& l : ty_exact(hl, m))
        for (const Ty& r : ty_exact(hr, m)) out.push_back(Ty::prod(l, r));
    }
  }
  for (const Ty& b : ty_exact(k - 1, m + 1)) out.push_back(Ty::all(b));
  return out;
}

}  // namespace detail

// The bounded type pool for a typed corpus: every type of height
// <= spec.type_height_bound over the context's type variables.
inline std::vector<Ty> type_pool(const CorpusSpec& spec) {
  if (spec.type_height_bound < 0)
    throw Error("corpus bounds must be non-negative");
  int m = spec.typed_context.ctx.type_count();
  std::vector<Ty> out;
  for (int k = 0; k <= spec.type_height_bound; ++k) {
    std::vector<Ty> cls = detail::ty_exact(k, m);
    out.insert(out.end(), cls.begin(), cls.end());
  }
  return out;
}

namespace detail {

// Memoized type-directed enumeration. exact(ctx, a, k) lists every term of
// type a with height exactly k in ctx, intro forms first, then eliminations
// (applications, type applications, first, second projections), cut types
// drawn from the ambient pool lifted into the local type scope.
class TypedEnum {
 public:
  TypedEnum(TyCtx ambient, std::vector<Ty> pool) : ctx_(std::move(ambient)) {
    pools_.push_back(std::move(pool));
  }

  // Every term of type `target` with height exactly k in the ambient
  // context.
  const std::vector<TTerm>& exact_class(const Ty& target, int k) {
    return exact(target, k);
  }

 private:
  const std::vector<Ty>& pool_at(int extra_tybinds) {
    while (static_cast<int>(pools_.size()) <= extra_tybinds) {
      std::vector<Ty> lifted;
      for (const Ty& a : pools_.back()) lifted.push_back(ty_shift(a, 1, 0));
      pools_.push_back(std::move(lifted));
    }
    return pools_[static_cast<std::size_t>(extra_tybinds)];
  }

  std::string ctx_key() const {
    std::string s;
    for (std::size_t i = 0; i < ctx_.size(); ++i) {
      const TyCtx::Entry& e = ctx_.entry(i);
      s += e.is_type ? "T|" : "V" + ty_debug(*e.ty) + "|";
    }
    return s;
  }

  const std::vector<TTerm>& exact(const Ty& a, int k) {
    std::string key = ctx_key() + "@" + ty_debug(a) + "#" + std::to_string(k);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::vector<TTerm> out;
    if (k == 0) {
      int tc = ctx_.term_count();
      for (int v = 0; v < tc; ++v)
        if (*ctx_.lookup_term(v) == a) out.push_back(TTerm::var(v));
      if (a.is_unit()) out.push_back(TTerm::unit());
    } else {
      // intro forms
      if (a.is_arr()) {
        ctx_.push_term(a.dom());
        std::vector<TTerm> bodies = exact(a.cod(), k - 1);
        ctx_.pop();
        for (const TTerm& b : bodies) out.push_back(TTerm::lam(a.dom(), b));
      }
      if (a.is_all()) {
        ctx_.push_type();
        ++extra_tybinds_;
        std::vector<TTerm> bodies = exact(a.body(), k - 1);
        --extra_tybinds_;
        ctx_.pop();
        for (const TTerm& b : bodies) out.push_back(TTerm::tlam(b));
      }
      if (a.is_prod()) {
        for (int hl = 0; hl < k; ++hl) {
          for (int hr = 0; hr < k; ++hr) {
            if (std::max(hl, hr) != k - 1) continue;
            std::vector<TTerm> ls = exact(a.left(), hl);
            std::vector<TTerm> rs = exact(a.right(), hr);
            for (const TTerm& l : ls)
              for (const TTerm& r : rs) out.push_back(TTerm::pair(l, r));
          }
        }
      }
      // eliminations; copy the pool so recursion can't invalidate it
      std::vector<Ty> pool = pool_at(extra_tybinds_);
      for (const Ty& d : pool) {
        Ty fty = Ty::arr(d, a);
        for (int hf = 0; hf < k; ++hf) {
          for (int ha = 0; ha < k; ++ha) {
            if (std::max(hf, ha) != k - 1) continue;
            std::vector<TTerm> fs = exact(fty, hf);
            std::vector<TTerm> as = exact(d, ha);
            for (const TTerm& f : fs)
              for (const TTerm& arg : as)
                out.push_back(TTerm::app(f, arg));
          }
        }
      }
      for (const Ty& s : pool) {
        if (!s.is_all()) continue;
        for (const Ty& arg : pool) {
          if (ty_subst(s.body(), 0, arg) != a) continue;
          std::vector<TTerm> fs = exact(s, k - 1);
          for (const TTerm& f : fs) out.push_back(TTerm::tapp(f, arg));
        }
      }
      for (const Ty& r : pool) {
        std::vector<TTerm> ps = exact(Ty::prod(a, r), k - 1);
        for (const TTerm& p : ps) out.push_back(TTerm::fst(p));
      }
      for (const Ty& l : pool) {
        std::vector<TTerm> ps = exact(Ty::prod(l, a), k - 1);
        for (const TTerm& p : ps) out.push_back(TTerm::snd(p));
      }
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  int extra_tybinds_ = 0;
  TyCtx ctx_;
  std::vector<std::vector<Ty>> pools_;  // pools_[d] = ambient pool shifted d
  std::unordered_map<std::string, std::vector<TTerm>> memo_;
};

}  // namespace detail

// Every well-typed term of height <= spec.height_bound in the ambient
// context, at spec.target_type if set and at every pool type otherwise;
// height-major, then pool order, duplicate-free (distinct classes have
// distinct types, and enumeration within a class is injective).
inline std::vector<TTerm> gen_typed_terms(const CorpusSpec& spec) {
  if (spec.calculus != Calculus::SystemF)
    throw Error("gen_typed_terms expects a typed corpus spec");
  if (spec.height_bound < 0)
    throw Error("corpus bounds must be non-negative");
  std::vector<Ty> pool = type_pool(spec);
  detail::TypedEnum e(spec.typed_context.ctx, pool);
  std::vector<TTerm> out;
  // Height-major keeps the smallest witnesses first; within one height the
  // classes follow pool order.
  for (int k = 0; k <= spec.height_bound; ++k) {
    if (spec.target_type) {
      const std::vector<TTerm>& cls = e.exact_class(*spec.target_type, k);
      out.insert(out.end(), cls.begin(), cls.end());
    } else {
      for (const Ty& a : pool) {
        const std::vector<TTerm>& cls = e.exact_class(a, k);
        out.insert(out.end(), cls.begin(), cls.end());
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counterexample search

// Scan the corpus in order; for each peak, scan ordered pairs of its
// one-step reducts and report the first pair that cannot be rejoined.
inline std::optional<Counterexample> find_diamond_cex(const CorpusSpec& spec,
                                                      const Relation& rel) {
  for (const Term& m : gen_terms(spec)) {
    std::vector<Term> rs = rel.reducts(m);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      for (std::size_t j = i + 1; j < rs.size(); ++j) {
        if (not_one_step_joinable(rs[i], rs[j], rel)) {
          return Counterexample{
              m,
              rs[i],
              rs[j],
              {m, rs[i]},
              {m, rs[j]},
              "the two reducts are distinct, are not related by a single "
              "step, and share no one-step reduct"};
        }
      }
    }
  }
  return std::nullopt;
}

// The same search over a typed corpus with the eta-extension relation
// restricted to the selected rules.
inline std::optional<BasicCounterexample<TTerm>> find_typed_eta_diamond_cex(
    const CorpusSpec& spec, unsigned rules = kAllEtaRules) {
  TypedRelation rel = typed_eta_ext_relation(spec.typed_context.ctx, rules);
  for (const TTerm& m : gen_typed_terms(spec)) {
    std::vector<TTerm> rs = rel.reducts(m);
    for (std::size_t i = 0; i < rs.size(); ++i) {
      for (std::size_t j = i + 1; j < rs.size(); ++j) {
        if (not_one_step_joinable(rs[i], rs[j], rel)) {
          return BasicCounterexample<TTerm>{
              m,
              rs[i],
              rs[j],
              {m, rs[i]},
              {m, rs[j]},
              "the two reducts are distinct, are not related by a single "
              "step, and share no one-step reduct"};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace conflab
