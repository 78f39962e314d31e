#pragma once

// Untyped lambda terms in de Bruijn (nameless) form, plus the index
// arithmetic everything else is built on: shift, substitution, occurs,
// strengthening, and a concrete syntax (parser / pretty-printer) for the
// CLI boundary. Terms are immutable values with structural sharing; copying
// a Term copies one refcounted pointer.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace conflab {

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Concrete-syntax error; `position` is a byte offset into the input.
struct ParseError : Error {
  ParseError(std::string msg, std::size_t pos)
      : Error(std::move(msg) + " at position " + std::to_string(pos)),
        position(pos) {}
  std::size_t position;
};

// A name in the input does not appear in the naming context or any binder.
struct UnboundNameError : Error {
  explicit UnboundNameError(std::string n)
      : Error("unbound name: " + n), name(std::move(n)) {}
  std::string name;
};

// A de Bruijn index fell outside the context it was interpreted in, or an
// index adjustment would produce a negative index.
struct IndexError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Term

class Term {
 public:
  enum class Kind { Var, Lam, App };

  static Term var(int index) {
    if (index < 0) throw IndexError("negative de Bruijn index");
    return Term(std::make_shared<Node>(Node{
        Kind::Var, index, nullptr, nullptr, 0, 1,
        mix(0x9e3779b97f4a7c15ull, static_cast<std::uint64_t>(index))}));
  }

  static Term lam(Term body) {
    int h = 1 + body.height();
    int s = 1 + body.size();
    std::size_t hash = mix(0xbf58476d1ce4e5b9ull, body.hash());
    return Term(std::make_shared<Node>(
        Node{Kind::Lam, 0, std::move(body.node_), nullptr, h, s, hash}));
  }

  static Term app(Term fun, Term arg) {
    int h = 1 + std::max(fun.height(), arg.height());
    int s = 1 + fun.size() + arg.size();
    std::size_t hash = mix(mix(0x94d049bb133111ebull, fun.hash()), arg.hash());
    return Term(std::make_shared<Node>(Node{
        Kind::App, 0, std::move(fun.node_), std::move(arg.node_), h, s, hash}));
  }

  Kind kind() const noexcept { return node_->kind; }
  bool is_var() const noexcept { return node_->kind == Kind::Var; }
  bool is_lam() const noexcept { return node_->kind == Kind::Lam; }
  bool is_app() const noexcept { return node_->kind == Kind::App; }

  int var_index() const { return node_->index; }
  Term body() const { return Term(node_->child0); }  // Lam
  Term fun() const { return Term(node_->child0); }   // App
  Term arg() const { return Term(node_->child1); }   // App

  // height(Var) = 0, height(Lam b) = 1 + height(b),
  // height(App f a) = 1 + max(height(f), height(a)).
  int height() const noexcept { return node_->height; }
  // Number of constructors.
  int size() const noexcept { return node_->size; }
  std::size_t hash() const noexcept { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash) return false;
    return structural_eq(a, b);
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    Kind kind;
    int index;
    std::shared_ptr<const Node> child0;  // Lam body / App fun
    std::shared_ptr<const Node> child1;  // App arg
    int height;
    int size;
    std::size_t hash;
  };

  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::uint64_t mix(std::uint64_t seed, std::uint64_t v) {
    std::uint64_t x = seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    return x;
  }

  static bool structural_eq(const Term& a, const Term& b) {
    if (a.node_->kind != b.node_->kind) return false;
    switch (a.node_->kind) {
      case Kind::Var:
        return a.node_->index == b.node_->index;
      case Kind::Lam:
        return a.body() == b.body();
      case Kind::App:
        return a.fun() == b.fun() && a.arg() == b.arg();
    }
    return false;  // unreachable
  }

  std::shared_ptr<const Node> node_;
};

// Names for the free variables: entry k names free index k (as seen from the
// top of the term, i.e. under zero enclosing binders).
using NamingContext = std::vector<std::string>;

// ---------------------------------------------------------------------------
// Index arithmetic

// Add `amount` to every free index >= cutoff. `amount` may be negative;
// driving any index below zero raises IndexError.
inline Term shift(const Term& t, int amount, int cutoff = 0) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      int k = t.var_index();
      if (k < cutoff) return t;
      if (k + amount < 0) throw IndexError("shift drove an index negative");
      return Term::var(k + amount);
    }
    case Term::Kind::Lam:
      return Term::lam(shift(t.body(), amount, cutoff + 1));
    case Term::Kind::App:
      return Term::app(shift(t.fun(), amount, cutoff),
                       shift(t.arg(), amount, cutoff));
  }
  throw IndexError("unreachable");
}

// Capture-avoiding substitution of `s` for free index `j` in `t`, removing
// that index from the context: occurrences of j become s (lifted past the
// binders crossed), and every free index above j drops by one. This is the
// beta-contraction substitution: (Lam b) a  |->  subst(b, 0, a).
inline Term subst(const Term& t, int j, const Term& s) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      int k = t.var_index();
      if (k == j) return s;
      if (k > j) return Term::var(k - 1);
      return t;
    }
    case Term::Kind::Lam:
      return Term::lam(subst(t.body(), j + 1, shift(s, 1, 0)));
    case Term::Kind::App:
      return Term::app(subst(t.fun(), j, s), subst(t.arg(), j, s));
  }
  throw IndexError("unreachable");
}

// True iff free index j occurs in t.
inline bool occurs(const Term& t, int j) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.var_index() == j;
    case Term::Kind::Lam:
      return occurs(t.body(), j + 1);
    case Term::Kind::App:
      return occurs(t.fun(), j) || occurs(t.arg(), j);
  }
  return false;
}

// Remove free index j from the context: every free index above j drops by
// one. Defined only when j does not occur; returns nullopt otherwise.
// strengthen is what the eta step uses to peel  Lam (App m (Var 0))  to m.
inline std::optional<Term> strengthen(const Term& t, int j) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      int k = t.var_index();
      if (k == j) return std::nullopt;
      return k > j ? Term::var(k - 1) : t;
    }
    case Term::Kind::Lam: {
      auto b = strengthen(t.body(), j + 1);
      if (!b) return std::nullopt;
      return Term::lam(std::move(*b));
    }
    case Term::Kind::App: {
      auto f = strengthen(t.fun(), j);
      if (!f) return std::nullopt;
      auto a = strengthen(t.arg(), j);
      if (!a) return std::nullopt;
      return Term::app(std::move(*f), std::move(*a));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Concrete syntax
//
//   term ::= lam | app
//   lam  ::= ("\" | "λ") name "." term        (body extends maximally right)
//   app  ::= atom atom*                        (left-associative)
//   atom ::= name | "(" term ")"
//   name ::= [a-zA-Z][a-zA-Z0-9_']*

namespace detail {

inline bool name_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool name_char(char c) {
  return name_start(c) || (c >= '0' && c <= '9') || c == '_' || c == '\'';
}

class TermParser {
 public:
  TermParser(std::string_view src, const NamingContext& ctx)
      : src_(src), scope_(ctx.begin(), ctx.end()) {
    // scope_[k] names index k at the current depth; entering a binder
    // inserts its name at the front.
  }

  Term parse() {
    Term t = parse_term();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("trailing input", pos_);
    return t;
  }

 private:
  Term parse_term() {
    skip_ws();
    if (at_lambda()) return parse_lam();
    return parse_app();
  }

  Term parse_lam() {
    consume_lambda();
    skip_ws();
    std::string name = parse_name();
    skip_ws();
    expect('.');
    scope_.insert(scope_.begin(), name);
    Term body = parse_term();
    scope_.erase(scope_.begin());
    return Term::lam(std::move(body));
  }

  Term parse_app() {
    skip_ws();
    std::optional<Term> acc;
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) break;
      char c = src_[pos_];
      if (c == ')') break;
      std::optional<Term> atom;
      if (c == '(') {
        ++pos_;
        atom = parse_term();
        skip_ws();
        expect(')');
      } else if (name_start(c)) {
        std::size_t at = pos_;
        std::string name = parse_name();
        atom = resolve(name, at);
      } else if (at_lambda()) {
        // app ::= atom atom* — a lambda is not an atom, so it must be
        // parenthesized in application position.
        throw ParseError("lambda in application position needs parentheses",
                         pos_);
      } else {
        throw ParseError("unexpected character", pos_);
      }
      acc = acc ? Term::app(std::move(*acc), std::move(*atom)) : atom;
    }
    if (!acc) throw ParseError("expected a term", pos_);
    return *acc;
  }

  Term resolve(const std::string& name, std::size_t) {
    for (std::size_t k = 0; k < scope_.size(); ++k) {
      if (scope_[k] == name) return Term::var(static_cast<int>(k));
    }
    throw UnboundNameError(name);
  }

  std::string parse_name() {
    if (pos_ >= src_.size() || !name_start(src_[pos_]))
      throw ParseError("expected a name", pos_);
    std::size_t start = pos_;
    while (pos_ < src_.size() && name_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  bool at_lambda() const {
    if (pos_ < src_.size() && src_[pos_] == '\\') return true;
    // UTF-8 lambda: 0xCE 0xBB
    return pos_ + 1 < src_.size() &&
           static_cast<unsigned char>(src_[pos_]) == 0xCE &&
           static_cast<unsigned char>(src_[pos_ + 1]) == 0xBB;
  }

  void consume_lambda() {
    if (src_[pos_] == '\\') {
      ++pos_;
    } else {
      pos_ += 2;
    }
  }

  void expect(char c) {
    if (pos_ >= src_.size() || src_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
            src_[pos_] == '\r'))
      ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;  // innermost binder first
};

// Deterministic binder-name supply: x, y, z, x1, x2, ...
inline std::string supply_name(int i) {
  static const char* base[3] = {"x", "y", "z"};
  if (i < 3) return base[i];
  return "x" + std::to_string(i - 2);
}

}  // namespace detail

// Parse concrete syntax against a naming context (free names resolve to
// their context index). Throws ParseError / UnboundNameError.
inline Term parse(std::string_view src, const NamingContext& ctx = {}) {
  return detail::TermParser(src, ctx).parse();
}

// Pretty-print with fresh binder names drawn from x, y, z, x1, x2, ...,
// skipping anything already in scope (context names included), so that
// parse(pretty(t, ctx), ctx) == t. Free indices beyond the context raise
// IndexError.
inline std::string pretty(const Term& t, const NamingContext& ctx = {}) {
  // scope: innermost first, aligned with de Bruijn indices.
  std::vector<std::string> scope(ctx.begin(), ctx.end());

  auto fresh = [&scope]() {
    for (int i = 0;; ++i) {
      std::string cand = detail::supply_name(i);
      bool taken = false;
      for (const auto& n : scope)
        if (n == cand) taken = true;
      if (!taken) return cand;
    }
  };

  // prec: 0 = top/lambda body, 1 = application fun, 2 = application arg.
  std::function<std::string(const Term&, int)> go = [&](const Term& t,
                                                        int prec) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        int k = t.var_index();
        if (k < 0 || static_cast<std::size_t>(k) >= scope.size())
          throw IndexError("free index " + std::to_string(k) +
                           " has no name in the context");
        return scope[static_cast<std::size_t>(k)];
      }
      case Term::Kind::Lam: {
        std::string name = fresh();
        scope.insert(scope.begin(), name);
        std::string body = go(t.body(), 0);
        scope.erase(scope.begin());
        std::string out = "\\" + name + ". " + body;
        return prec > 0 ? "(" + out + ")" : out;
      }
      case Term::Kind::App: {
        std::string out = go(t.fun(), 1) + " " + go(t.arg(), 2);
        return prec > 1 ? "(" + out + ")" : out;
      }
    }
    throw IndexError("unreachable");
  };
  return go(t, 0);
}

}  // namespace conflab

template <>
struct std::hash<conflab::Term> {
  std::size_t operator()(const conflab::Term& t) const noexcept {
    return t.hash();
  }
};
