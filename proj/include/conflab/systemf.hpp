#pragma once

// System F with an eta-extension fragment: unit and binary products. Types
// and typed terms are immutable values like the untyped Term. Type-level and
// term-level de Bruijn indices live in separate namespaces, both resolved
// against one interleaved context (TyCtx): a term variable counts enclosing
// term binders only, a type variable counts enclosing type binders only.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conflab/relation.hpp"
#include "conflab/term.hpp"

namespace conflab {

struct TypeError : Error {
  TypeError(std::string loc, std::string exp, std::string fnd)
      : Error("type error at " + loc + ": expected " + exp + ", found " + fnd),
        location(std::move(loc)),
        expected(std::move(exp)),
        found(std::move(fnd)) {}
  std::string location;
  std::string expected;
  std::string found;
};

// ---------------------------------------------------------------------------
// Types

class Ty {
 public:
  enum class Kind { TVar, Arr, All, Unit, Prod };

  static Ty tvar(int index) {
    if (index < 0) throw IndexError("negative type index");
    return Ty(std::make_shared<Node>(Node{
        Kind::TVar, index, nullptr, nullptr, 0,
        mix(0xd6e8feb86659fd93ull, static_cast<std::uint64_t>(index))}));
  }
  static Ty arr(Ty dom, Ty cod) {
    int h = 1 + std::max(dom.height(), cod.height());
    std::size_t hh = mix(mix(0xa0761d6478bd642full, dom.hash()), cod.hash());
    return Ty(std::make_shared<Node>(
        Node{Kind::Arr, 0, std::move(dom.node_), std::move(cod.node_), h, hh}));
  }
  static Ty all(Ty body) {
    int h = 1 + body.height();
    std::size_t hh = mix(0xe7037ed1a0b428dbull, body.hash());
    return Ty(std::make_shared<Node>(
        Node{Kind::All, 0, std::move(body.node_), nullptr, h, hh}));
  }
  static Ty unit() {
    return Ty(std::make_shared<Node>(
        Node{Kind::Unit, 0, nullptr, nullptr, 0, 0x8ebc6af09c88c6e3ull}));
  }
  static Ty prod(Ty a, Ty b) {
    int h = 1 + std::max(a.height(), b.height());
    std::size_t hh = mix(mix(0x589965cc75374cc3ull, a.hash()), b.hash());
    return Ty(std::make_shared<Node>(
        Node{Kind::Prod, 0, std::move(a.node_), std::move(b.node_), h, hh}));
  }

  Kind kind() const noexcept { return node_->kind; }
  bool is_tvar() const noexcept { return node_->kind == Kind::TVar; }
  bool is_arr() const noexcept { return node_->kind == Kind::Arr; }
  bool is_all() const noexcept { return node_->kind == Kind::All; }
  bool is_unit() const noexcept { return node_->kind == Kind::Unit; }
  bool is_prod() const noexcept { return node_->kind == Kind::Prod; }

  int tvar_index() const { return node_->index; }
  Ty dom() const { return Ty(node_->child0); }    // Arr
  Ty cod() const { return Ty(node_->child1); }    // Arr
  Ty body() const { return Ty(node_->child0); }   // All
  Ty left() const { return Ty(node_->child0); }   // Prod
  Ty right() const { return Ty(node_->child1); }  // Prod

  int height() const noexcept { return node_->height; }
  std::size_t hash() const noexcept { return node_->hash; }

  friend bool operator==(const Ty& a, const Ty& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash) return false;
    if (a.node_->kind != b.node_->kind) return false;
    switch (a.node_->kind) {
      case Kind::TVar: return a.node_->index == b.node_->index;
      case Kind::Unit: return true;
      case Kind::All:  return a.body() == b.body();
      case Kind::Arr:  return a.dom() == b.dom() && a.cod() == b.cod();
      case Kind::Prod: return a.left() == b.left() && a.right() == b.right();
    }
    return false;
  }
  friend bool operator!=(const Ty& a, const Ty& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    int index;
    std::shared_ptr<const Node> child0;
    std::shared_ptr<const Node> child1;
    int height;
    std::size_t hash;
  };
  explicit Ty(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t v) {
    std::uint64_t x = seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    return x;
  }
  std::shared_ptr<const Node> node_;
};

// Compact structural rendering for error messages; the concrete syntax
// printer lives with the parser.
inline std::string ty_debug(const Ty& a) {
  switch (a.kind()) {
    case Ty::Kind::TVar: return "TVar " + std::to_string(a.tvar_index());
    case Ty::Kind::Unit: return "Unit";
    case Ty::Kind::Arr:  return "(" + ty_debug(a.dom()) + " -> " + ty_debug(a.cod()) + ")";
    case Ty::Kind::Prod: return "(" + ty_debug(a.left()) + " * " + ty_debug(a.right()) + ")";
    case Ty::Kind::All:  return "(forall. " + ty_debug(a.body()) + ")";
  }
  return "?";
}

// Add `amount` to every free type index >= cutoff.
inline Ty ty_shift(const Ty& a, int amount, int cutoff = 0) {
  switch (a.kind()) {
    case Ty::Kind::TVar: {
      int k = a.tvar_index();
      if (k < cutoff) return a;
      if (k + amount < 0) throw IndexError("type shift drove an index negative");
      return Ty::tvar(k + amount);
    }
    case Ty::Kind::Unit: return a;
    case Ty::Kind::Arr:
      return Ty::arr(ty_shift(a.dom(), amount, cutoff),
                     ty_shift(a.cod(), amount, cutoff));
    case Ty::Kind::Prod:
      return Ty::prod(ty_shift(a.left(), amount, cutoff),
                      ty_shift(a.right(), amount, cutoff));
    case Ty::Kind::All:
      return Ty::all(ty_shift(a.body(), amount, cutoff + 1));
  }
  throw IndexError("unreachable");
}

// Substitute type b for free type index j in a, removing j from the context
// (same convention as the term-level subst: indices above j drop by one).
inline Ty ty_subst(const Ty& a, int j, const Ty& b) {
  switch (a.kind()) {
    case Ty::Kind::TVar: {
      int k = a.tvar_index();
      if (k == j) return b;
      if (k > j) return Ty::tvar(k - 1);
      return a;
    }
    case Ty::Kind::Unit: return a;
    case Ty::Kind::Arr:
      return Ty::arr(ty_subst(a.dom(), j, b), ty_subst(a.cod(), j, b));
    case Ty::Kind::Prod:
      return Ty::prod(ty_subst(a.left(), j, b), ty_subst(a.right(), j, b));
    case Ty::Kind::All:
      return Ty::all(ty_subst(a.body(), j + 1, ty_shift(b, 1, 0)));
  }
  throw IndexError("unreachable");
}

// Every free type index < n_tyvars?
inline bool ty_wellformed(const Ty& a, int n_tyvars) {
  switch (a.kind()) {
    case Ty::Kind::TVar: return a.tvar_index() < n_tyvars;
    case Ty::Kind::Unit: return true;
    case Ty::Kind::Arr:
      return ty_wellformed(a.dom(), n_tyvars) && ty_wellformed(a.cod(), n_tyvars);
    case Ty::Kind::Prod:
      return ty_wellformed(a.left(), n_tyvars) &&
             ty_wellformed(a.right(), n_tyvars);
    case Ty::Kind::All: return ty_wellformed(a.body(), n_tyvars + 1);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Typed terms

class TTerm {
 public:
  enum class Kind { Var, Lam, App, TLam, TApp, Unit, Pair, Fst, Snd };

  static TTerm var(int index) {
    if (index < 0) throw IndexError("negative term index");
    return TTerm(std::make_shared<Node>(Node{
        Kind::Var, index, std::nullopt, nullptr, nullptr, 0,
        mix(0x2545f4914f6cdd1dull, static_cast<std::uint64_t>(index))}));
  }
  static TTerm lam(Ty annot, TTerm body) {
    int h = 1 + body.height();
    std::size_t hh = mix(mix(0x9e6c63d0876a9a99ull, annot.hash()), body.hash());
    return TTerm(std::make_shared<Node>(Node{Kind::Lam, 0, std::move(annot),
                                             std::move(body.node_), nullptr, h,
                                             hh}));
  }
  static TTerm app(TTerm f, TTerm a) {
    int h = 1 + std::max(f.height(), a.height());
    std::size_t hh = mix(mix(0xaf251af3b0f025b5ull, f.hash()), a.hash());
    return TTerm(std::make_shared<Node>(Node{Kind::App, 0, std::nullopt,
                                             std::move(f.node_),
                                             std::move(a.node_), h, hh}));
  }
  static TTerm tlam(TTerm body) {
    int h = 1 + body.height();
    std::size_t hh = mix(0xb564ef22ec7aece8ull, body.hash());
    return TTerm(std::make_shared<Node>(Node{
        Kind::TLam, 0, std::nullopt, std::move(body.node_), nullptr, h, hh}));
  }
  static TTerm tapp(TTerm f, Ty b) {
    int h = 1 + f.height();
    std::size_t hh = mix(mix(0x63652b4f7ef4f4d1ull, f.hash()), b.hash());
    return TTerm(std::make_shared<Node>(Node{
        Kind::TApp, 0, std::move(b), std::move(f.node_), nullptr, h, hh}));
  }
  static TTerm unit() {
    return TTerm(std::make_shared<Node>(Node{Kind::Unit, 0, std::nullopt,
                                             nullptr, nullptr, 0,
                                             0x1c69b3f74ac4ae35ull}));
  }
  static TTerm pair(TTerm a, TTerm b) {
    int h = 1 + std::max(a.height(), b.height());
    std::size_t hh = mix(mix(0x8cb92ba72f3d8dd7ull, a.hash()), b.hash());
    return TTerm(std::make_shared<Node>(Node{Kind::Pair, 0, std::nullopt,
                                             std::move(a.node_),
                                             std::move(b.node_), h, hh}));
  }
  static TTerm fst(TTerm p) {
    int h = 1 + p.height();
    std::size_t hh = mix(0xd4b2f2f6dd4309a1ull, p.hash());
    return TTerm(std::make_shared<Node>(Node{
        Kind::Fst, 0, std::nullopt, std::move(p.node_), nullptr, h, hh}));
  }
  static TTerm snd(TTerm p) {
    int h = 1 + p.height();
    std::size_t hh = mix(0xf7b8a2c55e9ac381ull, p.hash());
    return TTerm(std::make_shared<Node>(Node{
        Kind::Snd, 0, std::nullopt, std::move(p.node_), nullptr, h, hh}));
  }

  Kind kind() const noexcept { return node_->kind; }
  bool is_var() const noexcept { return node_->kind == Kind::Var; }
  bool is_lam() const noexcept { return node_->kind == Kind::Lam; }
  bool is_app() const noexcept { return node_->kind == Kind::App; }
  bool is_tlam() const noexcept { return node_->kind == Kind::TLam; }
  bool is_tapp() const noexcept { return node_->kind == Kind::TApp; }
  bool is_unit() const noexcept { return node_->kind == Kind::Unit; }
  bool is_pair() const noexcept { return node_->kind == Kind::Pair; }
  bool is_fst() const noexcept { return node_->kind == Kind::Fst; }
  bool is_snd() const noexcept { return node_->kind == Kind::Snd; }

  int var_index() const { return node_->index; }
  const Ty& annot() const { return *node_->ty; }        // Lam annotation
  const Ty& ty_arg() const { return *node_->ty; }       // TApp argument
  TTerm body() const { return TTerm(node_->c0); }       // Lam / TLam
  TTerm fun() const { return TTerm(node_->c0); }        // App / TApp
  TTerm arg() const { return TTerm(node_->c1); }        // App
  TTerm pair_l() const { return TTerm(node_->c0); }     // Pair
  TTerm pair_r() const { return TTerm(node_->c1); }     // Pair
  TTerm proj() const { return TTerm(node_->c0); }       // Fst / Snd

  // Term height: type annotations and type arguments do not count.
  int height() const noexcept { return node_->height; }
  std::size_t hash() const noexcept { return node_->hash; }

  friend bool operator==(const TTerm& a, const TTerm& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash) return false;
    if (a.node_->kind != b.node_->kind) return false;
    switch (a.node_->kind) {
      case Kind::Var:  return a.node_->index == b.node_->index;
      case Kind::Unit: return true;
      case Kind::Lam:  return a.annot() == b.annot() && a.body() == b.body();
      case Kind::App:  return a.fun() == b.fun() && a.arg() == b.arg();
      case Kind::TLam: return a.body() == b.body();
      case Kind::TApp: return a.ty_arg() == b.ty_arg() && a.fun() == b.fun();
      case Kind::Pair: return a.pair_l() == b.pair_l() && a.pair_r() == b.pair_r();
      case Kind::Fst:  return a.proj() == b.proj();
      case Kind::Snd:  return a.proj() == b.proj();
    }
    return false;
  }
  friend bool operator!=(const TTerm& a, const TTerm& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    int index;
    std::optional<Ty> ty;  // Lam annotation / TApp type argument
    std::shared_ptr<const Node> c0;
    std::shared_ptr<const Node> c1;
    int height;
    std::size_t hash;
  };
  explicit TTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t v) {
    std::uint64_t x = seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    return x;
  }
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Contexts

// Interleaved binding context; entries run outermost-first, the innermost
// binder sits at the back. Term index k resolves to the k-th term binding
// counting inward from the use site, type index k likewise over type
// bindings.
class TyCtx {
 public:
  struct Entry {
    bool is_type;
    std::optional<Ty> ty;  // set iff a term binding
  };

  TyCtx() = default;

  void push_type() { entries_.push_back(Entry{true, std::nullopt}); }
  void push_term(Ty a) { entries_.push_back(Entry{false, std::move(a)}); }
  void pop() { entries_.pop_back(); }

  int type_count() const {
    int n = 0;
    for (const auto& e : entries_)
      if (e.is_type) ++n;
    return n;
  }
  int term_count() const {
    int n = 0;
    for (const auto& e : entries_)
      if (!e.is_type) ++n;
    return n;
  }
  std::size_t size() const { return entries_.size(); }
  const Entry& entry(std::size_t i) const { return entries_[i]; }

  // Type of term variable k, adjusted to the full context: the stored type
  // is lifted past every type binder bound inside of it.
  std::optional<Ty> lookup_term(int k) const {
    int seen = 0;
    int tybinds_inside = 0;
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
      if (it->is_type) {
        ++tybinds_inside;
        continue;
      }
      if (seen == k) return ty_shift(*it->ty, tybinds_inside, 0);
      ++seen;
    }
    return std::nullopt;
  }

 private:
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Index arithmetic on typed terms (two independent namespaces)

// Shift term indices >= cutoff by amount; types are untouched (types never
// mention term variables).
inline TTerm tm_shift(const TTerm& t, int amount, int cutoff = 0) {
  switch (t.kind()) {
    case TTerm::Kind::Var: {
      int k = t.var_index();
      if (k < cutoff) return t;
      if (k + amount < 0) throw IndexError("term shift drove an index negative");
      return TTerm::var(k + amount);
    }
    case TTerm::Kind::Lam:
      return TTerm::lam(t.annot(), tm_shift(t.body(), amount, cutoff + 1));
    case TTerm::Kind::App:
      return TTerm::app(tm_shift(t.fun(), amount, cutoff),
                        tm_shift(t.arg(), amount, cutoff));
    case TTerm::Kind::TLam:  // binds a type variable, not a term variable
      return TTerm::tlam(tm_shift(t.body(), amount, cutoff));
    case TTerm::Kind::TApp:
      return TTerm::tapp(tm_shift(t.fun(), amount, cutoff), t.ty_arg());
    case TTerm::Kind::Unit:
      return t;
    case TTerm::Kind::Pair:
      return TTerm::pair(tm_shift(t.pair_l(), amount, cutoff),
                         tm_shift(t.pair_r(), amount, cutoff));
    case TTerm::Kind::Fst:
      return TTerm::fst(tm_shift(t.proj(), amount, cutoff));
    case TTerm::Kind::Snd:
      return TTerm::snd(tm_shift(t.proj(), amount, cutoff));
  }
  throw IndexError("unreachable");
}

// Shift type indices >= cutoff by amount, throughout annotations and type
// arguments; term indices are untouched.
inline TTerm tm_ty_shift(const TTerm& t, int amount, int cutoff = 0) {
  switch (t.kind()) {
    case TTerm::Kind::Var:
    case TTerm::Kind::Unit:
      return t;
    case TTerm::Kind::Lam:
      return TTerm::lam(ty_shift(t.annot(), amount, cutoff),
                        tm_ty_shift(t.body(), amount, cutoff));
    case TTerm::Kind::App:
      return TTerm::app(tm_ty_shift(t.fun(), amount, cutoff),
                        tm_ty_shift(t.arg(), amount, cutoff));
    case TTerm::Kind::TLam:
      return TTerm::tlam(tm_ty_shift(t.body(), amount, cutoff + 1));
    case TTerm::Kind::TApp:
      return TTerm::tapp(tm_ty_shift(t.fun(), amount, cutoff),
                         ty_shift(t.ty_arg(), amount, cutoff));
    case TTerm::Kind::Pair:
      return TTerm::pair(tm_ty_shift(t.pair_l(), amount, cutoff),
                         tm_ty_shift(t.pair_r(), amount, cutoff));
    case TTerm::Kind::Fst:
      return TTerm::fst(tm_ty_shift(t.proj(), amount, cutoff));
    case TTerm::Kind::Snd:
      return TTerm::snd(tm_ty_shift(t.proj(), amount, cutoff));
  }
  throw IndexError("unreachable");
}

// Substitute term s for term index j in t (beta). Crossing a term binder
// bumps j and term-shifts s; crossing a type binder type-shifts s.
inline TTerm tm_subst(const TTerm& t, int j, const TTerm& s) {
  switch (t.kind()) {
    case TTerm::Kind::Var: {
      int k = t.var_index();
      if (k == j) return s;
      if (k > j) return TTerm::var(k - 1);
      return t;
    }
    case TTerm::Kind::Lam:
      return TTerm::lam(t.annot(), tm_subst(t.body(), j + 1, tm_shift(s, 1, 0)));
    case TTerm::Kind::App:
      return TTerm::app(tm_subst(t.fun(), j, s), tm_subst(t.arg(), j, s));
    case TTerm::Kind::TLam:
      return TTerm::tlam(tm_subst(t.body(), j, tm_ty_shift(s, 1, 0)));
    case TTerm::Kind::TApp:
      return TTerm::tapp(tm_subst(t.fun(), j, s), t.ty_arg());
    case TTerm::Kind::Unit:
      return t;
    case TTerm::Kind::Pair:
      return TTerm::pair(tm_subst(t.pair_l(), j, s), tm_subst(t.pair_r(), j, s));
    case TTerm::Kind::Fst:
      return TTerm::fst(tm_subst(t.proj(), j, s));
    case TTerm::Kind::Snd:
      return TTerm::snd(tm_subst(t.proj(), j, s));
  }
  throw IndexError("unreachable");
}

// Substitute type b for type index j throughout a term (type beta).
inline TTerm tm_ty_subst(const TTerm& t, int j, const Ty& b) {
  switch (t.kind()) {
    case TTerm::Kind::Var:
    case TTerm::Kind::Unit:
      return t;
    case TTerm::Kind::Lam:
      return TTerm::lam(ty_subst(t.annot(), j, b), tm_ty_subst(t.body(), j, b));
    case TTerm::Kind::App:
      return TTerm::app(tm_ty_subst(t.fun(), j, b), tm_ty_subst(t.arg(), j, b));
    case TTerm::Kind::TLam:
      return TTerm::tlam(tm_ty_subst(t.body(), j + 1, ty_shift(b, 1, 0)));
    case TTerm::Kind::TApp:
      return TTerm::tapp(tm_ty_subst(t.fun(), j, b), ty_subst(t.ty_arg(), j, b));
    case TTerm::Kind::Pair:
      return TTerm::pair(tm_ty_subst(t.pair_l(), j, b),
                         tm_ty_subst(t.pair_r(), j, b));
    case TTerm::Kind::Fst:
      return TTerm::fst(tm_ty_subst(t.proj(), j, b));
    case TTerm::Kind::Snd:
      return TTerm::snd(tm_ty_subst(t.proj(), j, b));
  }
  throw IndexError("unreachable");
}

// Does term index j occur free in t?
inline bool tm_occurs(const TTerm& t, int j) {
  switch (t.kind()) {
    case TTerm::Kind::Var:  return t.var_index() == j;
    case TTerm::Kind::Unit: return false;
    case TTerm::Kind::Lam:  return tm_occurs(t.body(), j + 1);
    case TTerm::Kind::App:  return tm_occurs(t.fun(), j) || tm_occurs(t.arg(), j);
    case TTerm::Kind::TLam: return tm_occurs(t.body(), j);
    case TTerm::Kind::TApp: return tm_occurs(t.fun(), j);
    case TTerm::Kind::Pair:
      return tm_occurs(t.pair_l(), j) || tm_occurs(t.pair_r(), j);
    case TTerm::Kind::Fst:
    case TTerm::Kind::Snd:
      return tm_occurs(t.proj(), j);
  }
  return false;
}

// Remove term index j (which must not occur): indices above j drop by one.
inline std::optional<TTerm> tm_strengthen(const TTerm& t, int j) {
  switch (t.kind()) {
    case TTerm::Kind::Var: {
      int k = t.var_index();
      if (k == j) return std::nullopt;
      return k > j ? TTerm::var(k - 1) : t;
    }
    case TTerm::Kind::Unit:
      return t;
    case TTerm::Kind::Lam: {
      auto b = tm_strengthen(t.body(), j + 1);
      if (!b) return std::nullopt;
      return TTerm::lam(t.annot(), std::move(*b));
    }
    case TTerm::Kind::App: {
      auto f = tm_strengthen(t.fun(), j);
      auto a = f ? tm_strengthen(t.arg(), j) : std::nullopt;
      if (!f || !a) return std::nullopt;
      return TTerm::app(std::move(*f), std::move(*a));
    }
    case TTerm::Kind::TLam: {
      auto b = tm_strengthen(t.body(), j);
      if (!b) return std::nullopt;
      return TTerm::tlam(std::move(*b));
    }
    case TTerm::Kind::TApp: {
      auto f = tm_strengthen(t.fun(), j);
      if (!f) return std::nullopt;
      return TTerm::tapp(std::move(*f), t.ty_arg());
    }
    case TTerm::Kind::Pair: {
      auto a = tm_strengthen(t.pair_l(), j);
      auto b = a ? tm_strengthen(t.pair_r(), j) : std::nullopt;
      if (!a || !b) return std::nullopt;
      return TTerm::pair(std::move(*a), std::move(*b));
    }
    case TTerm::Kind::Fst: {
      auto p = tm_strengthen(t.proj(), j);
      if (!p) return std::nullopt;
      return TTerm::fst(std::move(*p));
    }
    case TTerm::Kind::Snd: {
      auto p = tm_strengthen(t.proj(), j);
      if (!p) return std::nullopt;
      return TTerm::snd(std::move(*p));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Typechecking (syntax-directed; annotations make types unique)

inline Ty typecheck(TyCtx& ctx, const TTerm& t) {
  switch (t.kind()) {
    case TTerm::Kind::Var: {
      auto a = ctx.lookup_term(t.var_index());
      if (!a)
        throw TypeError("variable " + std::to_string(t.var_index()),
                        "a bound term variable", "no such binding");
      return *a;
    }
    case TTerm::Kind::Lam: {
      if (!ty_wellformed(t.annot(), ctx.type_count()))
        throw TypeError("lambda annotation", "a well-scoped type",
                        ty_debug(t.annot()));
      ctx.push_term(t.annot());
      Ty b = typecheck(ctx, t.body());
      ctx.pop();
      return Ty::arr(t.annot(), std::move(b));
    }
    case TTerm::Kind::App: {
      Ty f = typecheck(ctx, t.fun());
      Ty a = typecheck(ctx, t.arg());
      if (!f.is_arr())
        throw TypeError("application head", "an arrow type", ty_debug(f));
      if (f.dom() != a)
        throw TypeError("application argument", ty_debug(f.dom()), ty_debug(a));
      return f.cod();
    }
    case TTerm::Kind::TLam: {
      ctx.push_type();
      Ty b = typecheck(ctx, t.body());
      ctx.pop();
      return Ty::all(std::move(b));
    }
    case TTerm::Kind::TApp: {
      Ty f = typecheck(ctx, t.fun());
      if (!f.is_all())
        throw TypeError("type application head", "a forall type", ty_debug(f));
      if (!ty_wellformed(t.ty_arg(), ctx.type_count()))
        throw TypeError("type argument", "a well-scoped type",
                        ty_debug(t.ty_arg()));
      return ty_subst(f.body(), 0, t.ty_arg());
    }
    case TTerm::Kind::Unit:
      return Ty::unit();
    case TTerm::Kind::Pair: {
      Ty a = typecheck(ctx, t.pair_l());
      Ty b = typecheck(ctx, t.pair_r());
      return Ty::prod(std::move(a), std::move(b));
    }
    case TTerm::Kind::Fst: {
      Ty p = typecheck(ctx, t.proj());
      if (!p.is_prod())
        throw TypeError("first projection", "a product type", ty_debug(p));
      return p.left();
    }
    case TTerm::Kind::Snd: {
      Ty p = typecheck(ctx, t.proj());
      if (!p.is_prod())
        throw TypeError("second projection", "a product type", ty_debug(p));
      return p.right();
    }
  }
  throw TypeError("term", "a well-formed term", "unknown constructor");
}

inline Ty typecheck(const TyCtx& ctx, const TTerm& t) {
  TyCtx scratch = ctx;
  return typecheck(scratch, t);
}

inline std::optional<Ty> try_typecheck(const TyCtx& ctx, const TTerm& t) {
  try {
    return typecheck(ctx, t);
  } catch (const Error&) {
    return std::nullopt;
  }
}

namespace detail {
inline void require_welltyped(const TyCtx& ctx, const TTerm& t,
                              const char* who) {
  if (!try_typecheck(ctx, t))
    throw TypeError(who, "a well-typed input term", "an ill-typed term");
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Typed reduction

using TypedRelation = BasicRelation<TTerm>;

namespace detail {

inline void typed_beta_steps(const TTerm& t, std::vector<TTerm>& out) {
  // term-level redex
  if (t.is_app() && t.fun().is_lam())
    out.push_back(tm_subst(t.fun().body(), 0, t.arg()));
  // type-level redex
  if (t.is_tapp() && t.fun().is_tlam())
    out.push_back(tm_ty_subst(t.fun().body(), 0, t.ty_arg()));
  // congruence, pre-order
  switch (t.kind()) {
    case TTerm::Kind::Var:
    case TTerm::Kind::Unit:
      return;
    case TTerm::Kind::Lam: {
      std::vector<TTerm> inner;
      typed_beta_steps(t.body(), inner);
      for (auto& b : inner) out.push_back(TTerm::lam(t.annot(), std::move(b)));
      return;
    }
    case TTerm::Kind::App: {
      std::vector<TTerm> fs, as;
      typed_beta_steps(t.fun(), fs);
      for (auto& f : fs) out.push_back(TTerm::app(std::move(f), t.arg()));
      typed_beta_steps(t.arg(), as);
      for (auto& a : as) out.push_back(TTerm::app(t.fun(), std::move(a)));
      return;
    }
    case TTerm::Kind::TLam: {
      std::vector<TTerm> inner;
      typed_beta_steps(t.body(), inner);
      for (auto& b : inner) out.push_back(TTerm::tlam(std::move(b)));
      return;
    }
    case TTerm::Kind::TApp: {
      std::vector<TTerm> fs;
      typed_beta_steps(t.fun(), fs);
      for (auto& f : fs) out.push_back(TTerm::tapp(std::move(f), t.ty_arg()));
      return;
    }
    case TTerm::Kind::Pair: {
      std::vector<TTerm> ls, rs;
      typed_beta_steps(t.pair_l(), ls);
      for (auto& l : ls) out.push_back(TTerm::pair(std::move(l), t.pair_r()));
      typed_beta_steps(t.pair_r(), rs);
      for (auto& r : rs) out.push_back(TTerm::pair(t.pair_l(), std::move(r)));
      return;
    }
    case TTerm::Kind::Fst: {
      std::vector<TTerm> ps;
      typed_beta_steps(t.proj(), ps);
      for (auto& p : ps) out.push_back(TTerm::fst(std::move(p)));
      return;
    }
    case TTerm::Kind::Snd: {
      std::vector<TTerm> ps;
      typed_beta_steps(t.proj(), ps);
      for (auto& p : ps) out.push_back(TTerm::snd(std::move(p)));
      return;
    }
  }
}

}  // namespace detail

// One-step typed beta (term-level and type-level redexes, compatible
// closure). Input must typecheck; subject reduction then guarantees every
// reduct has the same type.
inline std::vector<TTerm> typed_beta_reducts(const TyCtx& ctx, const TTerm& t) {
  detail::require_welltyped(ctx, t, "typed_beta_reducts");
  std::vector<TTerm> out;
  detail::typed_beta_steps(t, out);
  dedup_keep_first(out);
  return out;
}

// Parallel reduction on typed terms: congruence everywhere plus the two
// simultaneous beta rules. Always contains t itself, first.
inline std::vector<TTerm> typed_par_reducts(const TyCtx& ctx, const TTerm& t) {
  detail::require_welltyped(ctx, t, "typed_par_reducts");
  struct Rec {
    static std::vector<TTerm> go(const TTerm& t) {
      switch (t.kind()) {
        case TTerm::Kind::Var:
        case TTerm::Kind::Unit:
          return {t};
        case TTerm::Kind::Lam: {
          std::vector<TTerm> out;
          for (auto& b : go(t.body()))
            out.push_back(TTerm::lam(t.annot(), std::move(b)));
          return out;
        }
        case TTerm::Kind::App: {
          std::vector<TTerm> as = go(t.arg());
          std::vector<TTerm> out;
          if (t.fun().is_lam()) {
            std::vector<TTerm> bs = go(t.fun().body());
            for (const auto& b : bs)
              for (const auto& a : as)
                out.push_back(TTerm::app(TTerm::lam(t.fun().annot(), b), a));
            for (const auto& b : bs)
              for (const auto& a : as) out.push_back(tm_subst(b, 0, a));
          } else {
            for (const auto& f : go(t.fun()))
              for (const auto& a : as) out.push_back(TTerm::app(f, a));
          }
          dedup_keep_first(out);
          return out;
        }
        case TTerm::Kind::TLam: {
          std::vector<TTerm> out;
          for (auto& b : go(t.body())) out.push_back(TTerm::tlam(std::move(b)));
          return out;
        }
        case TTerm::Kind::TApp: {
          std::vector<TTerm> out;
          if (t.fun().is_tlam()) {
            std::vector<TTerm> bs = go(t.fun().body());
            for (const auto& b : bs)
              out.push_back(TTerm::tapp(TTerm::tlam(b), t.ty_arg()));
            for (const auto& b : bs)
              out.push_back(tm_ty_subst(b, 0, t.ty_arg()));
          } else {
            for (auto& f : go(t.fun()))
              out.push_back(TTerm::tapp(std::move(f), t.ty_arg()));
          }
          dedup_keep_first(out);
          return out;
        }
        case TTerm::Kind::Pair: {
          std::vector<TTerm> rs = go(t.pair_r());
          std::vector<TTerm> out;
          for (const auto& l : go(t.pair_l()))
            for (const auto& r : rs) out.push_back(TTerm::pair(l, r));
          return out;
        }
        case TTerm::Kind::Fst: {
          std::vector<TTerm> out;
          for (auto& p : go(t.proj())) out.push_back(TTerm::fst(std::move(p)));
          return out;
        }
        case TTerm::Kind::Snd: {
          std::vector<TTerm> out;
          for (auto& p : go(t.proj())) out.push_back(TTerm::snd(std::move(p)));
          return out;
        }
      }
      return {};
    }
  };
  return Rec::go(t);
}

// Typed complete development: contract every visible (term- and type-level)
// redex simultaneously.
inline TTerm typed_complete_dev(const TyCtx& ctx, const TTerm& t) {
  detail::require_welltyped(ctx, t, "typed_complete_dev");
  struct Rec {
    static TTerm go(const TTerm& t) {
      switch (t.kind()) {
        case TTerm::Kind::Var:
        case TTerm::Kind::Unit:
          return t;
        case TTerm::Kind::Lam:
          return TTerm::lam(t.annot(), go(t.body()));
        case TTerm::Kind::App:
          if (t.fun().is_lam())
            return tm_subst(go(t.fun().body()), 0, go(t.arg()));
          return TTerm::app(go(t.fun()), go(t.arg()));
        case TTerm::Kind::TLam:
          return TTerm::tlam(go(t.body()));
        case TTerm::Kind::TApp:
          if (t.fun().is_tlam())
            return tm_ty_subst(go(t.fun().body()), 0, t.ty_arg());
          return TTerm::tapp(go(t.fun()), t.ty_arg());
        case TTerm::Kind::Pair:
          return TTerm::pair(go(t.pair_l()), go(t.pair_r()));
        case TTerm::Kind::Fst:
          return TTerm::fst(go(t.proj()));
        case TTerm::Kind::Snd:
          return TTerm::snd(go(t.proj()));
      }
      return t;
    }
  };
  return Rec::go(t);
}

// ---------------------------------------------------------------------------
// Typed eta extension

// Rule selection for the eta-extension relation.
enum EtaRules : unsigned {
  kFunctionEta = 1u,        // Lam A (App m (Var 0)) -> m   (0 not free in m)
  kSurjectivePairing = 2u,  // Pair (Fst m) (Snd m) -> m
  kUnitEta = 4u,            // m -> unit   for m : Unit, m != unit
  kAllEtaRules = 7u,
};

// One-step eta on typed terms, pre-order, rules selectable. unit-eta is
// type-directed, so the input must typecheck in ctx.
inline std::vector<TTerm> typed_eta_reducts(const TyCtx& ctx, const TTerm& t,
                                            unsigned rules = kAllEtaRules) {
  detail::require_welltyped(ctx, t, "typed_eta_reducts");
  struct Rec {
    unsigned rules;
    void go(TyCtx& ctx, const TTerm& t, std::vector<TTerm>& out) {
      // unit-eta: any Unit-typed subterm other than unit itself
      if ((rules & kUnitEta) && !t.is_unit()) {
        if (typecheck(ctx, t).is_unit()) out.push_back(TTerm::unit());
      }
      // function-eta at a lambda node
      if ((rules & kFunctionEta) && t.is_lam() && t.body().is_app() &&
          t.body().arg().is_var() && t.body().arg().var_index() == 0) {
        if (auto m = tm_strengthen(t.body().fun(), 0))
          out.push_back(std::move(*m));
      }
      // surjective pairing at a pair node
      if ((rules & kSurjectivePairing) && t.is_pair() && t.pair_l().is_fst() &&
          t.pair_r().is_snd() && t.pair_l().proj() == t.pair_r().proj()) {
        out.push_back(t.pair_l().proj());
      }
      // congruence, after the root rules
      switch (t.kind()) {
        case TTerm::Kind::Var:
        case TTerm::Kind::Unit:
          return;
        case TTerm::Kind::Lam: {
          std::vector<TTerm> inner;
          ctx.push_term(t.annot());
          go(ctx, t.body(), inner);
          ctx.pop();
          for (auto& b : inner)
            out.push_back(TTerm::lam(t.annot(), std::move(b)));
          return;
        }
        case TTerm::Kind::App: {
          std::vector<TTerm> fs, as;
          go(ctx, t.fun(), fs);
          for (auto& f : fs) out.push_back(TTerm::app(std::move(f), t.arg()));
          go(ctx, t.arg(), as);
          for (auto& a : as) out.push_back(TTerm::app(t.fun(), std::move(a)));
          return;
        }
        case TTerm::Kind::TLam: {
          std::vector<TTerm> inner;
          ctx.push_type();
          go(ctx, t.body(), inner);
          ctx.pop();
          for (auto& b : inner) out.push_back(TTerm::tlam(std::move(b)));
          return;
        }
        case TTerm::Kind::TApp: {
          std::vector<TTerm> fs;
          go(ctx, t.fun(), fs);
          for (auto& f : fs)
            out.push_back(TTerm::tapp(std::move(f), t.ty_arg()));
          return;
        }
        case TTerm::Kind::Pair: {
          std::vector<TTerm> ls, rs;
          go(ctx, t.pair_l(), ls);
          for (auto& l : ls) out.push_back(TTerm::pair(std::move(l), t.pair_r()));
          go(ctx, t.pair_r(), rs);
          for (auto& r : rs) out.push_back(TTerm::pair(t.pair_l(), std::move(r)));
          return;
        }
        case TTerm::Kind::Fst: {
          std::vector<TTerm> ps;
          go(ctx, t.proj(), ps);
          for (auto& p : ps) out.push_back(TTerm::fst(std::move(p)));
          return;
        }
        case TTerm::Kind::Snd: {
          std::vector<TTerm> ps;
          go(ctx, t.proj(), ps);
          for (auto& p : ps) out.push_back(TTerm::snd(std::move(p)));
          return;
        }
      }
    }
  };
  Rec rec{rules};
  TyCtx scratch = ctx;
  std::vector<TTerm> out;
  rec.go(scratch, t, out);
  dedup_keep_first(out);
  return out;
}

// ---------------------------------------------------------------------------
// Erasure

// Drop the typed superstructure: annotations vanish, type abstraction and
// application erase to their bodies (term indices are unaffected — the two
// namespaces are separate). The unit/product fragment has no untyped image,
// so erasure returns nullopt there.
inline std::optional<Term> erase(const TTerm& t) {
  switch (t.kind()) {
    case TTerm::Kind::Var:
      return Term::var(t.var_index());
    case TTerm::Kind::Lam: {
      auto b = erase(t.body());
      if (!b) return std::nullopt;
      return Term::lam(std::move(*b));
    }
    case TTerm::Kind::App: {
      auto f = erase(t.fun());
      auto a = f ? erase(t.arg()) : std::nullopt;
      if (!f || !a) return std::nullopt;
      return Term::app(std::move(*f), std::move(*a));
    }
    case TTerm::Kind::TLam:
      return erase(t.body());
    case TTerm::Kind::TApp:
      return erase(t.fun());
    case TTerm::Kind::Unit:
    case TTerm::Kind::Pair:
    case TTerm::Kind::Fst:
    case TTerm::Kind::Snd:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Relation factories (capture the context by value)

inline TypedRelation typed_beta_relation(TyCtx ctx) {
  return TypedRelation{"typed-beta", [ctx](const TTerm& t) {
                         return typed_beta_reducts(ctx, t);
                       }};
}

inline TypedRelation typed_par_relation(TyCtx ctx) {
  return TypedRelation{"typed-par", [ctx](const TTerm& t) {
                         return typed_par_reducts(ctx, t);
                       }};
}

inline TypedRelation typed_eta_ext_relation(TyCtx ctx,
                                            unsigned rules = kAllEtaRules) {
  return TypedRelation{"typed-eta-ext", [ctx, rules](const TTerm& t) {
                         return typed_eta_reducts(ctx, t, rules);
                       }};
}

}  // namespace conflab

template <>
struct std::hash<conflab::Ty> {
  std::size_t operator()(const conflab::Ty& a) const noexcept {
    return a.hash();
  }
};
template <>
struct std::hash<conflab::TTerm> {
  std::size_t operator()(const conflab::TTerm& t) const noexcept {
    return t.hash();
  }
};
