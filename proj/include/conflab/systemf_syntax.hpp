#pragma once

// Concrete syntax for the typed calculus.
//
//   ty    ::= 'forall' name '.' ty | prod ('->' ty)?
//   prod  ::= atomty ('*' prod)?                      (right-associative)
//   atomty::= 'Unit' | name | '(' ty ')'
//
//   term  ::= '\' name ':' ty '.' term | '/\' name '.' term | app
//   app   ::= atom ( atom | '[' ty ']' )*
//   atom  ::= name | '()' | '(' term ')' | '<' term ',' term '>'
//           | 'fst' atom | 'snd' atom
//
// '\' may be written λ and '/\' may be written Λ. 'forall', 'Unit', 'fst'
// and 'snd' are reserved words. Term and type variables live in separate
// namespaces, each resolved against its own side of the context.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "conflab/systemf.hpp"
#include "conflab/term.hpp"

namespace conflab {

// A typing context together with one name per entry (outermost-first), the
// unit of parsing and printing for the typed calculus.
struct TypedContext {
  TyCtx ctx;
  std::vector<std::string> names;

  void add_type(std::string name) {
    ctx.push_type();
    names.push_back(std::move(name));
  }
  void add_term(std::string name, Ty a) {
    ctx.push_term(std::move(a));
    names.push_back(std::move(name));
  }

  // Per-namespace name vectors, innermost-first: result[k] names index k.
  std::vector<std::string> tm_names() const {
    std::vector<std::string> out;
    for (std::size_t i = ctx.size(); i-- > 0;)
      if (!ctx.entry(i).is_type) out.push_back(names[i]);
    return out;
  }
  std::vector<std::string> ty_names() const {
    std::vector<std::string> out;
    for (std::size_t i = ctx.size(); i-- > 0;)
      if (ctx.entry(i).is_type) out.push_back(names[i]);
    return out;
  }
};

namespace detail {

inline bool reserved_word(std::string_view s) {
  return s == "forall" || s == "Unit" || s == "fst" || s == "snd";
}

// Deterministic type-binder supply: a, b, c, a1, a2, ...
inline std::string ty_supply_name(int i) {
  static const char* base[3] = {"a", "b", "c"};
  if (i < 3) return base[i];
  return "a" + std::to_string(i - 2);
}

class TypedParser {
 public:
  TypedParser(std::string_view src, std::vector<std::string> tm_scope,
              std::vector<std::string> ty_scope)
      : src_(src),
        tm_scope_(std::move(tm_scope)),
        ty_scope_(std::move(ty_scope)) {}

  Ty run_ty() {
    Ty a = parse_ty();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("trailing input", pos_);
    return a;
  }

  TTerm run_term() {
    TTerm t = parse_term();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError("trailing input", pos_);
    return t;
  }

 private:
  // ---- types

  Ty parse_ty() {
    skip_ws();
    if (at_word("forall")) {
      consume_word("forall");
      std::string name = parse_binder_name();
      skip_ws();
      expect('.');
      ty_scope_.insert(ty_scope_.begin(), name);
      Ty body = parse_ty();
      ty_scope_.erase(ty_scope_.begin());
      return Ty::all(std::move(body));
    }
    Ty lhs = parse_prod();
    skip_ws();
    if (pos_ + 1 < src_.size() && src_[pos_] == '-' && src_[pos_ + 1] == '>') {
      pos_ += 2;
      return Ty::arr(std::move(lhs), parse_ty());
    }
    return lhs;
  }

  Ty parse_prod() {
    Ty lhs = parse_atom_ty();
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '*') {
      ++pos_;
      return Ty::prod(std::move(lhs), parse_prod());
    }
    return lhs;
  }

  Ty parse_atom_ty() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("expected a type", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Ty a = parse_ty();
      skip_ws();
      expect(')');
      return a;
    }
    if (name_start(c)) {
      std::size_t at = pos_;
      std::string name = parse_name();
      if (name == "Unit") return Ty::unit();
      if (reserved_word(name)) throw ParseError("reserved word", at);
      for (std::size_t k = 0; k < ty_scope_.size(); ++k)
        if (ty_scope_[k] == name) return Ty::tvar(static_cast<int>(k));
      throw UnboundNameError(name);
    }
    throw ParseError("expected a type", pos_);
  }

  // ---- terms

  TTerm parse_term() {
    skip_ws();
    if (at_lambda()) {
      consume_lambda();
      std::string name = parse_binder_name();
      skip_ws();
      expect(':');
      Ty annot = parse_ty();
      skip_ws();
      expect('.');
      tm_scope_.insert(tm_scope_.begin(), name);
      TTerm body = parse_term();
      tm_scope_.erase(tm_scope_.begin());
      return TTerm::lam(std::move(annot), std::move(body));
    }
    if (at_tlambda()) {
      consume_tlambda();
      std::string name = parse_binder_name();
      skip_ws();
      expect('.');
      ty_scope_.insert(ty_scope_.begin(), name);
      TTerm body = parse_term();
      ty_scope_.erase(ty_scope_.begin());
      return TTerm::tlam(std::move(body));
    }
    return parse_app();
  }

  TTerm parse_app() {
    std::optional<TTerm> acc;
    while (true) {
      skip_ws();
      if (pos_ >= src_.size()) break;
      char c = src_[pos_];
      if (c == ')' || c == ',' || c == '>' || c == ']') break;
      if (c == '[') {
        if (!acc) throw ParseError("type application needs a head", pos_);
        ++pos_;
        Ty b = parse_ty();
        skip_ws();
        expect(']');
        acc = TTerm::tapp(std::move(*acc), std::move(b));
        continue;
      }
      if (at_lambda() || at_tlambda()) {
        if (acc)
          throw ParseError("lambda in application position needs parentheses",
                           pos_);
        break;  // handled by parse_term (only reachable when acc is empty)
      }
      TTerm atom = parse_atom();
      acc = acc ? TTerm::app(std::move(*acc), std::move(atom)) : atom;
    }
    if (!acc) throw ParseError("expected a term", pos_);
    return *acc;
  }

  TTerm parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("expected a term", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == ')') {
        ++pos_;
        return TTerm::unit();
      }
      TTerm t = parse_term();
      skip_ws();
      expect(')');
      return t;
    }
    if (c == '<') {
      ++pos_;
      TTerm l = parse_term();
      skip_ws();
      expect(',');
      TTerm r = parse_term();
      skip_ws();
      expect('>');
      return TTerm::pair(std::move(l), std::move(r));
    }
    if (name_start(c)) {
      std::size_t at = pos_;
      std::string name = parse_name();
      if (name == "fst") return TTerm::fst(parse_atom());
      if (name == "snd") return TTerm::snd(parse_atom());
      if (reserved_word(name)) throw ParseError("reserved word", at);
      for (std::size_t k = 0; k < tm_scope_.size(); ++k)
        if (tm_scope_[k] == name) return TTerm::var(static_cast<int>(k));
      throw UnboundNameError(name);
    }
    throw ParseError("unexpected character", pos_);
  }

  // ---- lexing

  std::string parse_binder_name() {
    skip_ws();
    std::size_t at = pos_;
    std::string name = parse_name();
    if (reserved_word(name)) throw ParseError("reserved word", at);
    return name;
  }

  std::string parse_name() {
    if (pos_ >= src_.size() || !name_start(src_[pos_]))
      throw ParseError("expected a name", pos_);
    std::size_t start = pos_;
    while (pos_ < src_.size() && name_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  bool at_word(std::string_view w) const {
    if (src_.size() - pos_ < w.size()) return false;
    if (src_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    return end >= src_.size() || !name_char(src_[end]);
  }

  void consume_word(std::string_view w) { pos_ += w.size(); }

  bool at_lambda() const {
    if (pos_ < src_.size() && src_[pos_] == '\\') return true;
    return pos_ + 1 < src_.size() &&
           static_cast<unsigned char>(src_[pos_]) == 0xCE &&
           static_cast<unsigned char>(src_[pos_ + 1]) == 0xBB;  // λ
  }

  void consume_lambda() { pos_ += (src_[pos_] == '\\') ? 1 : 2; }

  bool at_tlambda() const {
    if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '\\')
      return true;
    return pos_ + 1 < src_.size() &&
           static_cast<unsigned char>(src_[pos_]) == 0xCE &&
           static_cast<unsigned char>(src_[pos_ + 1]) == 0x9B;  // Λ
  }

  void consume_tlambda() { pos_ += 2; }

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
  std::vector<std::string> tm_scope_;  // innermost binder first
  std::vector<std::string> ty_scope_;  // innermost binder first
};

}  // namespace detail

// Parse a type; ty_names[k] names free type index k.
inline Ty parse_ty(std::string_view src,
                   const std::vector<std::string>& ty_names = {}) {
  return detail::TypedParser(src, {}, ty_names).run_ty();
}

// Parse a typed term against a typed context.
inline TTerm parse_tterm(std::string_view src, const TypedContext& tctx = {}) {
  return detail::TypedParser(src, tctx.tm_names(), tctx.ty_names()).run_term();
}

// Parse a comma-separated context, outermost binding first: a bare name is a
// type binding, `name : ty` a term binding whose type is scoped over the
// type bindings to its left. Example: "a, p : Unit * Unit".
inline TypedContext parse_typed_context(std::string_view src) {
  TypedContext out;
  std::vector<std::string> ty_scope;  // innermost-first
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < src.size() &&
           (src[pos] == ' ' || src[pos] == '\t' || src[pos] == '\n' ||
            src[pos] == '\r'))
      ++pos;
  };
  skip_ws();
  while (pos < src.size()) {
    if (!detail::name_start(src[pos]))
      throw ParseError("expected a binding name", pos);
    std::size_t start = pos;
    while (pos < src.size() && detail::name_char(src[pos])) ++pos;
    std::string name(src.substr(start, pos - start));
    if (detail::reserved_word(name)) throw ParseError("reserved word", start);
    skip_ws();
    if (pos < src.size() && src[pos] == ':') {
      ++pos;
      std::size_t ty_start = pos;
      while (pos < src.size() && src[pos] != ',') ++pos;
      Ty a = detail::TypedParser(src.substr(ty_start, pos - ty_start), {},
                                 ty_scope)
                 .run_ty();
      out.add_term(name, std::move(a));
    } else {
      out.add_type(name);
      ty_scope.insert(ty_scope.begin(), name);
    }
    skip_ws();
    if (pos < src.size()) {
      if (src[pos] != ',') throw ParseError("expected ','", pos);
      ++pos;
      skip_ws();
      if (pos >= src.size()) throw ParseError("trailing ','", pos);
    }
  }
  return out;
}

// Pretty-print a type; binders draw fresh names from a, b, c, a1, ...
// skipping names in scope, so parse_ty(pretty_ty(a, ns), ns) == a.
inline std::string pretty_ty(const Ty& a,
                             const std::vector<std::string>& ty_names = {}) {
  std::vector<std::string> scope(ty_names.begin(), ty_names.end());
  auto fresh = [&scope]() {
    for (int i = 0;; ++i) {
      std::string cand = detail::ty_supply_name(i);
      bool taken = false;
      for (const auto& n : scope)
        if (n == cand) taken = true;
      if (!taken) return cand;
    }
  };
  // prec: 0 = top (forall), 1 = arrow, 2 = product, 3 = atom.
  std::function<std::string(const Ty&, int)> go = [&](const Ty& a, int prec) {
    switch (a.kind()) {
      case Ty::Kind::TVar: {
        int k = a.tvar_index();
        if (k < 0 || static_cast<std::size_t>(k) >= scope.size())
          throw IndexError("free type index " + std::to_string(k) +
                           " has no name in the context");
        return scope[k];
      }
      case Ty::Kind::Unit:
        return std::string("Unit");
      case Ty::Kind::All: {
        std::string name = fresh();
        scope.insert(scope.begin(), name);
        std::string body = go(a.body(), 0);
        scope.erase(scope.begin());
        std::string s = "forall " + name + ". " + body;
        return prec > 0 ? "(" + s + ")" : s;
      }
      case Ty::Kind::Arr: {
        std::string s = go(a.dom(), 2) + " -> " + go(a.cod(), 1);
        return prec > 1 ? "(" + s + ")" : s;
      }
      case Ty::Kind::Prod: {
        std::string s = go(a.left(), 3) + " * " + go(a.right(), 2);
        return prec > 2 ? "(" + s + ")" : s;
      }
    }
    throw IndexError("unreachable");
  };
  return go(a, 0);
}

// Pretty-print a typed term; term binders draw from x, y, z, x1, ... and
// type binders from a, b, c, a1, ..., each skipping its own namespace, so
// parse_tterm(pretty_tterm(t, tctx), tctx) == t.
inline std::string pretty_tterm(const TTerm& t, const TypedContext& tctx = {}) {
  std::vector<std::string> tm_scope = tctx.tm_names();
  std::vector<std::string> ty_scope = tctx.ty_names();

  auto fresh_tm = [&tm_scope]() {
    for (int i = 0;; ++i) {
      std::string cand = detail::supply_name(i);
      bool taken = false;
      for (const auto& n : tm_scope)
        if (n == cand) taken = true;
      if (!taken) return cand;
    }
  };
  auto fresh_ty = [&ty_scope]() {
    for (int i = 0;; ++i) {
      std::string cand = detail::ty_supply_name(i);
      bool taken = false;
      for (const auto& n : ty_scope)
        if (n == cand) taken = true;
      if (!taken) return cand;
    }
  };
  auto ty_str = [&ty_scope](const Ty& a) { return pretty_ty(a, ty_scope); };

  // prec: 0 = top/lambda body, 1 = application fun, 2 = application arg.
  std::function<std::string(const TTerm&, int)> go = [&](const TTerm& t,
                                                         int prec) {
    switch (t.kind()) {
      case TTerm::Kind::Var: {
        int k = t.var_index();
        if (k < 0 || static_cast<std::size_t>(k) >= tm_scope.size())
          throw IndexError("free index " + std::to_string(k) +
                           " has no name in the context");
        return tm_scope[k];
      }
      case TTerm::Kind::Lam: {
        std::string name = fresh_tm();
        std::string annot = ty_str(t.annot());
        tm_scope.insert(tm_scope.begin(), name);
        std::string body = go(t.body(), 0);
        tm_scope.erase(tm_scope.begin());
        std::string s = "\\" + name + ":" + annot + ". " + body;
        return prec > 0 ? "(" + s + ")" : s;
      }
      case TTerm::Kind::TLam: {
        std::string name = fresh_ty();
        ty_scope.insert(ty_scope.begin(), name);
        std::string body = go(t.body(), 0);
        ty_scope.erase(ty_scope.begin());
        std::string s = "/\\" + name + ". " + body;
        return prec > 0 ? "(" + s + ")" : s;
      }
      case TTerm::Kind::App: {
        std::string s = go(t.fun(), 1) + " " + go(t.arg(), 2);
        return prec > 1 ? "(" + s + ")" : s;
      }
      case TTerm::Kind::TApp: {
        std::string s = go(t.fun(), 1) + " [" + ty_str(t.ty_arg()) + "]";
        return prec > 1 ? "(" + s + ")" : s;
      }
      case TTerm::Kind::Unit:
        return std::string("()");
      case TTerm::Kind::Pair:
        return "<" + go(t.pair_l(), 0) + ", " + go(t.pair_r(), 0) + ">";
      case TTerm::Kind::Fst: {
        std::string s = "fst " + go(t.proj(), 2);
        return prec > 1 ? "(" + s + ")" : s;
      }
      case TTerm::Kind::Snd: {
        std::string s = "snd " + go(t.proj(), 2);
        return prec > 1 ? "(" + s + ")" : s;
      }
    }
    throw IndexError("unreachable");
  };
  return go(t, 0);
}

}  // namespace conflab
