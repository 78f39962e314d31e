#pragma once

// JSON encodings for the CLI boundary. Shapes are stable:
//
//   untyped term   {"var": k} | {"lam": t} | {"app": [f, a]}
//   type           {"tvar": k} | {"arr": [a, b]} | {"all": a}
//                  | {"unit": {}} | {"prod": [a, b]}
//   typed term     {"var": k} | {"lam": {"annot": ty, "body": t}}
//                  | {"app": [f, a]} | {"tlam": t}
//                  | {"tapp": {"fun": t, "ty": ty}} | {"unit": {}}
//                  | {"pair": [l, r]} | {"fst": t} | {"snd": t}
//   trace          {"steps": [t0, ..., tn]}   (endpoints included)
//
// nlohmann::json keeps object keys sorted, so dumps are deterministic.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "conflab/generator.hpp"
#include "conflab/relation.hpp"
#include "conflab/rewrite_props.hpp"
#include "conflab/systemf.hpp"
#include "conflab/systemf_syntax.hpp"
#include "conflab/term.hpp"

namespace conflab {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Untyped terms

inline Json term_to_json(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return Json{{"var", t.var_index()}};
    case Term::Kind::Lam:
      return Json{{"lam", term_to_json(t.body())}};
    case Term::Kind::App:
      return Json{{"app", Json::array({term_to_json(t.fun()),
                                       term_to_json(t.arg())})}};
  }
  throw Error("unreachable");
}

inline Term term_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1)
    throw Error("malformed term JSON: expected a single-key object");
  if (j.contains("var")) {
    if (!j["var"].is_number_integer())
      throw Error("malformed term JSON: \"var\" must be an integer");
    return Term::var(j["var"].get<int>());
  }
  if (j.contains("lam")) return Term::lam(term_from_json(j["lam"]));
  if (j.contains("app")) {
    const Json& a = j["app"];
    if (!a.is_array() || a.size() != 2)
      throw Error("malformed term JSON: \"app\" must be a two-element array");
    return Term::app(term_from_json(a[0]), term_from_json(a[1]));
  }
  throw Error("malformed term JSON: unknown constructor");
}

// ---------------------------------------------------------------------------
// Types

inline Json ty_to_json(const Ty& a) {
  switch (a.kind()) {
    case Ty::Kind::TVar:
      return Json{{"tvar", a.tvar_index()}};
    case Ty::Kind::Arr:
      return Json{{"arr", Json::array({ty_to_json(a.dom()),
                                       ty_to_json(a.cod())})}};
    case Ty::Kind::All:
      return Json{{"all", ty_to_json(a.body())}};
    case Ty::Kind::Unit:
      return Json{{"unit", Json::object()}};
    case Ty::Kind::Prod:
      return Json{{"prod", Json::array({ty_to_json(a.left()),
                                        ty_to_json(a.right())})}};
  }
  throw Error("unreachable");
}

inline Ty ty_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1)
    throw Error("malformed type JSON: expected a single-key object");
  if (j.contains("tvar")) {
    if (!j["tvar"].is_number_integer())
      throw Error("malformed type JSON: \"tvar\" must be an integer");
    return Ty::tvar(j["tvar"].get<int>());
  }
  if (j.contains("arr")) {
    const Json& a = j["arr"];
    if (!a.is_array() || a.size() != 2)
      throw Error("malformed type JSON: \"arr\" must be a two-element array");
    return Ty::arr(ty_from_json(a[0]), ty_from_json(a[1]));
  }
  if (j.contains("all")) return Ty::all(ty_from_json(j["all"]));
  if (j.contains("unit")) return Ty::unit();
  if (j.contains("prod")) {
    const Json& a = j["prod"];
    if (!a.is_array() || a.size() != 2)
      throw Error("malformed type JSON: \"prod\" must be a two-element array");
    return Ty::prod(ty_from_json(a[0]), ty_from_json(a[1]));
  }
  throw Error("malformed type JSON: unknown constructor");
}

// ---------------------------------------------------------------------------
// Typed terms

inline Json tterm_to_json(const TTerm& t) {
  switch (t.kind()) {
    case TTerm::Kind::Var:
      return Json{{"var", t.var_index()}};
    case TTerm::Kind::Lam:
      return Json{{"lam", Json{{"annot", ty_to_json(t.annot())},
                               {"body", tterm_to_json(t.body())}}}};
    case TTerm::Kind::App:
      return Json{{"app", Json::array({tterm_to_json(t.fun()),
                                       tterm_to_json(t.arg())})}};
    case TTerm::Kind::TLam:
      return Json{{"tlam", tterm_to_json(t.body())}};
    case TTerm::Kind::TApp:
      return Json{{"tapp", Json{{"fun", tterm_to_json(t.fun())},
                                {"ty", ty_to_json(t.ty_arg())}}}};
    case TTerm::Kind::Unit:
      return Json{{"unit", Json::object()}};
    case TTerm::Kind::Pair:
      return Json{{"pair", Json::array({tterm_to_json(t.pair_l()),
                                        tterm_to_json(t.pair_r())})}};
    case TTerm::Kind::Fst:
      return Json{{"fst", tterm_to_json(t.proj())}};
    case TTerm::Kind::Snd:
      return Json{{"snd", tterm_to_json(t.proj())}};
  }
  throw Error("unreachable");
}

inline TTerm tterm_from_json(const Json& j) {
  if (!j.is_object() || j.size() != 1)
    throw Error("malformed typed-term JSON: expected a single-key object");
  if (j.contains("var")) {
    if (!j["var"].is_number_integer())
      throw Error("malformed typed-term JSON: \"var\" must be an integer");
    return TTerm::var(j["var"].get<int>());
  }
  if (j.contains("lam")) {
    const Json& l = j["lam"];
    if (!l.is_object() || !l.contains("annot") || !l.contains("body"))
      throw Error(
          "malformed typed-term JSON: \"lam\" needs \"annot\" and \"body\"");
    return TTerm::lam(ty_from_json(l["annot"]), tterm_from_json(l["body"]));
  }
  if (j.contains("app")) {
    const Json& a = j["app"];
    if (!a.is_array() || a.size() != 2)
      throw Error(
          "malformed typed-term JSON: \"app\" must be a two-element array");
    return TTerm::app(tterm_from_json(a[0]), tterm_from_json(a[1]));
  }
  if (j.contains("tlam")) return TTerm::tlam(tterm_from_json(j["tlam"]));
  if (j.contains("tapp")) {
    const Json& a = j["tapp"];
    if (!a.is_object() || !a.contains("fun") || !a.contains("ty"))
      throw Error(
          "malformed typed-term JSON: \"tapp\" needs \"fun\" and \"ty\"");
    return TTerm::tapp(tterm_from_json(a["fun"]), ty_from_json(a["ty"]));
  }
  if (j.contains("unit")) return TTerm::unit();
  if (j.contains("pair")) {
    const Json& a = j["pair"];
    if (!a.is_array() || a.size() != 2)
      throw Error(
          "malformed typed-term JSON: \"pair\" must be a two-element array");
    return TTerm::pair(tterm_from_json(a[0]), tterm_from_json(a[1]));
  }
  if (j.contains("fst")) return TTerm::fst(tterm_from_json(j["fst"]));
  if (j.contains("snd")) return TTerm::snd(tterm_from_json(j["snd"]));
  throw Error("malformed typed-term JSON: unknown constructor");
}

// ---------------------------------------------------------------------------
// Traces, joins, counterexamples

inline Json trace_to_json(const Trace& tr) {
  Json steps = Json::array();
  for (const Term& t : tr) steps.push_back(term_to_json(t));
  return Json{{"steps", std::move(steps)}};
}

inline Json join_to_json(const Join& j) {
  return Json{{"witness", term_to_json(j.witness)},
              {"left_trace", trace_to_json(j.left_trace)},
              {"right_trace", trace_to_json(j.right_trace)}};
}

inline Json cex_to_json(const Counterexample& c, const std::string& relation,
                        int height_bound, const NamingContext& ctx = {}) {
  return Json{{"peak", term_to_json(c.peak)},
              {"left", term_to_json(c.left)},
              {"right", term_to_json(c.right)},
              {"left_trace", trace_to_json(c.left_trace)},
              {"right_trace", trace_to_json(c.right_trace)},
              {"reason", c.reason},
              {"relation", relation},
              {"height_bound", height_bound},
              {"pretty", Json{{"peak", pretty(c.peak, ctx)},
                              {"left", pretty(c.left, ctx)},
                              {"right", pretty(c.right, ctx)}}}};
}

inline Json typed_cex_to_json(const BasicCounterexample<TTerm>& c,
                              const std::string& relation, int height_bound,
                              const TypedContext& tctx = {}) {
  return Json{{"peak", tterm_to_json(c.peak)},
              {"left", tterm_to_json(c.left)},
              {"right", tterm_to_json(c.right)},
              {"reason", c.reason},
              {"relation", relation},
              {"height_bound", height_bound},
              {"pretty", Json{{"peak", pretty_tterm(c.peak, tctx)},
                              {"left", pretty_tterm(c.left, tctx)},
                              {"right", pretty_tterm(c.right, tctx)}}}};
}

// ---------------------------------------------------------------------------
// Corpus specs and property reports

inline std::string typed_context_to_string(const TypedContext& tctx) {
  std::string out;
  std::vector<std::string> ty_scope;  // innermost-first, for entry types
  for (std::size_t i = 0; i < tctx.ctx.size(); ++i) {
    if (!out.empty()) out += ", ";
    const TyCtx::Entry& e = tctx.ctx.entry(i);
    if (e.is_type) {
      out += tctx.names[i];
      ty_scope.insert(ty_scope.begin(), tctx.names[i]);
    } else {
      out += tctx.names[i] + " : " + pretty_ty(*e.ty, ty_scope);
    }
  }
  return out;
}

inline Json corpus_to_json(const CorpusSpec& spec) {
  Json j{{"height_bound", spec.height_bound},
         {"calculus",
          spec.calculus == Calculus::Untyped ? "untyped" : "systemf"}};
  if (spec.calculus == Calculus::Untyped) {
    j["free_context_size"] = spec.free_context_size;
  } else {
    j["typed_context"] = typed_context_to_string(spec.typed_context);
    j["type_height_bound"] = spec.type_height_bound;
    j["target_type"] =
        spec.target_type
            ? Json(pretty_ty(*spec.target_type,
                             spec.typed_context.ty_names()))
            : Json(nullptr);
  }
  return j;
}

inline Json report_to_json(const PropertyReport& rep,
                           const NamingContext& ctx = {}) {
  std::string relation;
  for (const std::string& r : rep.relations) {
    if (!relation.empty()) relation += ",";
    relation += r;
  }
  Json j{{"property", property_name(rep.property)},
         {"relations", rep.relations},
         {"outcome", outcome_name(rep.outcome)},
         {"instances_checked", rep.instances_checked},
         {"inconclusive_instances", rep.inconclusive_instances},
         {"elapsed_ms", rep.elapsed_ms},
         {"corpus", corpus_to_json(rep.corpus)}};
  j["counterexample"] =
      rep.counterexample
          ? cex_to_json(*rep.counterexample, relation, rep.corpus.height_bound,
                        ctx)
          : Json(nullptr);
  return j;
}

}  // namespace conflab
