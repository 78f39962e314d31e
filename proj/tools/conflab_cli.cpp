// conflab — command-line front end for the confluence laboratory.
//
// Every subcommand prints a single JSON document on stdout. Exit codes:
//   0  success (property passed, term parsed, no counterexample, ...)
//   1  definite negative answer (property failed, counterexample found,
//      term ill-typed)
//   2  usage or input error (bad arguments, unparsable term, unbound name)
//   3  inconclusive within the given budgets

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conflab/conflab.hpp"

namespace {

using namespace conflab;

Relation relation_by_name(const std::string& name) {
  if (name == "beta") return beta_relation();
  if (name == "eta") return eta_relation();
  if (name == "betaeta") return betaeta_relation();
  if (name == "par") return par_relation();
  throw Error("unknown relation '" + name +
              "' (expected beta, eta, betaeta, or par)");
}

NamingContext split_ctx(const std::string& s) {
  NamingContext out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    if (i >= s.size()) break;
    std::size_t start = i;
    while (i < s.size() && s[i] != ',') ++i;
    std::size_t end = i;
    while (end > start && (s[end - 1] == ' ' || s[end - 1] == '\t')) --end;
    out.push_back(s.substr(start, end - start));
  }
  return out;
}

Term read_term(const std::string& src, const NamingContext& ctx,
               bool from_json) {
  if (from_json) return term_from_json(Json::parse(src));
  return parse(src, ctx);
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int outcome_exit(Outcome o) {
  switch (o) {
    case Outcome::Pass: return 0;
    case Outcome::Fail: return 1;
    case Outcome::Inconclusive: return 3;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"executable confluence laboratory for lambda calculi"};
  app.require_subcommand(1);

  std::string term_src, term2_src, ctx_str, tctx_str;
  std::string rel_name = "beta", rel2_name, prop_name_arg, cex_prop;
  std::string calculus_str = "untyped", target_ty_str;
  bool from_json = false, count_only = false;
  int height = 3, depth = 8, nodes = 10000, fuel = 1000, type_height = 1;

  auto add_ctx = [&](CLI::App* cmd) {
    cmd->add_option("--ctx", ctx_str,
                    "comma-separated names for the free variables");
  };

  CLI::App* parse_cmd =
      app.add_subcommand("parse", "parse a term and print it as JSON");
  parse_cmd->add_option("term", term_src, "term in concrete syntax")
      ->required();
  add_ctx(parse_cmd);
  parse_cmd->add_flag("--from-json", from_json,
                      "read the term argument as JSON instead");

  CLI::App* reducts_cmd =
      app.add_subcommand("reducts", "one-step reducts under a relation");
  reducts_cmd->add_option("term", term_src, "term")->required();
  reducts_cmd->add_option("--rel", rel_name, "beta|eta|betaeta|par");
  add_ctx(reducts_cmd);
  reducts_cmd->add_flag("--from-json", from_json, "read the term as JSON");

  CLI::App* par_cmd = app.add_subcommand(
      "par-reducts", "all parallel-step successors of a term");
  par_cmd->add_option("term", term_src, "term")->required();
  add_ctx(par_cmd);
  par_cmd->add_flag("--from-json", from_json, "read the term as JSON");

  CLI::App* norm_cmd = app.add_subcommand(
      "normalize", "leftmost-outermost normalization under a relation");
  norm_cmd->add_option("term", term_src, "term")->required();
  norm_cmd->add_option("--rel", rel_name, "beta|eta|betaeta|par");
  norm_cmd->add_option("--fuel", fuel, "maximum number of steps");
  add_ctx(norm_cmd);
  norm_cmd->add_flag("--from-json", from_json, "read the term as JSON");

  CLI::App* dev_cmd = app.add_subcommand(
      "develop", "complete development: contract every visible beta redex");
  dev_cmd->add_option("term", term_src, "term")->required();
  add_ctx(dev_cmd);
  dev_cmd->add_flag("--from-json", from_json, "read the term as JSON");

  CLI::App* join_cmd = app.add_subcommand(
      "join", "search for a common reduct of two terms within budgets");
  join_cmd->add_option("left", term_src, "first term")->required();
  join_cmd->add_option("right", term2_src, "second term")->required();
  join_cmd->add_option("--rel", rel_name, "beta|eta|betaeta|par");
  join_cmd->add_option("--depth", depth, "closure depth budget");
  join_cmd->add_option("--nodes", nodes, "closure node budget");
  add_ctx(join_cmd);
  join_cmd->add_flag("--from-json", from_json, "read both terms as JSON");

  CLI::App* check_cmd = app.add_subcommand(
      "check", "check a rewriting property over a generated corpus");
  check_cmd
      ->add_option("property", prop_name_arg,
                   "diamond|strong-comm|comm|confluence|strip")
      ->required()
      ->check(CLI::IsMember(
          {"diamond", "strong-comm", "comm", "confluence", "strip"}));
  check_cmd->add_option("--rel", rel_name, "relation under test");
  check_cmd->add_option("--rel2", rel2_name,
                        "second relation (strong-comm and comm; defaults to "
                        "--rel)");
  check_cmd->add_option("--height", height, "corpus height bound");
  check_cmd->add_option("--depth", depth, "search depth budget");
  check_cmd->add_option("--nodes", nodes, "search node budget");
  add_ctx(check_cmd);

  CLI::App* cex_cmd = app.add_subcommand(
      "cex", "search a corpus for a counterexample to a property");
  cex_cmd->add_option("property", cex_prop, "diamond")
      ->required()
      ->check(CLI::IsMember({"diamond"}));
  cex_cmd->add_option("--rel", rel_name, "relation under test");
  cex_cmd->add_option("--height", height, "corpus height bound");
  add_ctx(cex_cmd);

  CLI::App* type_cmd =
      app.add_subcommand("typecheck", "typecheck a term of the typed calculus");
  type_cmd->add_option("term", term_src, "typed term in concrete syntax")
      ->required();
  type_cmd->add_option("--tctx", tctx_str,
                       "typed context, e.g. \"a, p : Unit * Unit\"");
  type_cmd->add_flag("--from-json", from_json, "read the term as JSON");

  CLI::App* gen_cmd =
      app.add_subcommand("gen", "generate a bounded exhaustive corpus");
  gen_cmd->add_option("--calculus", calculus_str, "untyped|systemf");
  gen_cmd->add_option("--height", height, "corpus height bound");
  add_ctx(gen_cmd);
  gen_cmd->add_option("--tctx", tctx_str, "typed context (systemf)");
  gen_cmd->add_option("--type-height", type_height,
                      "type pool height bound (systemf)");
  gen_cmd->add_option("--target-type", target_ty_str,
                      "generate at this type only (systemf)");
  gen_cmd->add_flag("--count-only", count_only, "print the count, not terms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    NamingContext ctx = split_ctx(ctx_str);

    if (*parse_cmd) {
      Term t = read_term(term_src, ctx, from_json);
      emit(Json{{"term", term_to_json(t)},
                {"pretty", pretty(t, ctx)},
                {"height", t.height()},
                {"size", t.size()}});
      return 0;
    }

    if (*reducts_cmd || *par_cmd) {
      if (*par_cmd) rel_name = "par";
      Relation rel = relation_by_name(rel_name);
      Term t = read_term(term_src, ctx, from_json);
      std::vector<Term> rs = rel.reducts(t);
      Json terms = Json::array(), pretties = Json::array();
      for (const Term& r : rs) {
        terms.push_back(term_to_json(r));
        pretties.push_back(pretty(r, ctx));
      }
      emit(Json{{"term", term_to_json(t)},
                {"relation", rel.name},
                {"reducts", std::move(terms)},
                {"pretty", std::move(pretties)}});
      return 0;
    }

    if (*norm_cmd) {
      Relation rel = relation_by_name(rel_name);
      Term t = read_term(term_src, ctx, from_json);
      NormalizeResult<Term> res = normalize(t, rel, fuel);
      emit(Json{{"term", term_to_json(t)},
                {"relation", rel.name},
                {"normal_form", res.normal_form},
                {"steps", res.steps},
                {"result", term_to_json(res.term)},
                {"pretty", pretty(res.term, ctx)}});
      return 0;
    }

    if (*dev_cmd) {
      Term t = read_term(term_src, ctx, from_json);
      Term d = complete_dev(t);
      emit(Json{{"term", term_to_json(t)},
                {"result", term_to_json(d)},
                {"pretty", pretty(d, ctx)}});
      return 0;
    }

    if (*join_cmd) {
      Relation rel = relation_by_name(rel_name);
      Term t1 = read_term(term_src, ctx, from_json);
      Term t2 = read_term(term2_src, ctx, from_json);
      auto j = joinable(t1, t2, rel, depth, nodes);
      if (j) {
        emit(Json{{"found", true},
                  {"relation", rel.name},
                  {"join", join_to_json(*j)},
                  {"pretty", pretty(j->witness, ctx)}});
        return 0;
      }
      emit(Json{{"found", false}, {"relation", rel.name}});
      return 3;
    }

    if (*check_cmd) {
      Relation rel = relation_by_name(rel_name);
      CorpusSpec spec;
      spec.height_bound = height;
      spec.free_context_size = static_cast<int>(ctx.size());
      SearchBudget budget{depth, nodes};
      PropertyReport rep;
      if (prop_name_arg == "diamond") {
        rep = check_diamond(spec, rel);
      } else if (prop_name_arg == "strong-comm") {
        Relation rel2 =
            relation_by_name(rel2_name.empty() ? rel_name : rel2_name);
        rep = check_strong_commutation(spec, rel, rel2, budget);
      } else if (prop_name_arg == "comm") {
        Relation rel2 =
            relation_by_name(rel2_name.empty() ? rel_name : rel2_name);
        rep = check_commutation(spec, rel, rel2, budget);
      } else if (prop_name_arg == "confluence") {
        rep = check_confluence(spec, rel, budget);
      } else {
        rep = check_strip(spec, rel, budget);
      }
      emit(report_to_json(rep, ctx));
      return outcome_exit(rep.outcome);
    }

    if (*cex_cmd) {
      Relation rel = relation_by_name(rel_name);
      CorpusSpec spec;
      spec.height_bound = height;
      spec.free_context_size = static_cast<int>(ctx.size());
      auto cex = find_diamond_cex(spec, rel);
      if (cex) {
        emit(Json{{"found", true},
                  {"counterexample",
                   cex_to_json(*cex, rel.name, spec.height_bound, ctx)}});
        return 1;
      }
      emit(Json{{"found", false},
                {"relation", rel.name},
                {"height_bound", spec.height_bound}});
      return 0;
    }

    if (*type_cmd) {
      TypedContext tctx = parse_typed_context(tctx_str);
      TTerm t = from_json ? tterm_from_json(Json::parse(term_src))
                          : parse_tterm(term_src, tctx);
      try {
        Ty a = typecheck(tctx.ctx, t);
        emit(Json{{"well_typed", true},
                  {"term", tterm_to_json(t)},
                  {"type", ty_to_json(a)},
                  {"pretty", pretty_ty(a, tctx.ty_names())}});
        return 0;
      } catch (const TypeError& e) {
        emit(Json{{"well_typed", false},
                  {"term", tterm_to_json(t)},
                  {"error", Json{{"location", e.location},
                                 {"expected", e.expected},
                                 {"found", e.found}}}});
        return 1;
      }
    }

    if (*gen_cmd) {
      CorpusSpec spec;
      spec.height_bound = height;
      if (calculus_str == "untyped") {
        spec.calculus = Calculus::Untyped;
        spec.free_context_size = static_cast<int>(ctx.size());
        std::vector<Term> corpus = gen_terms(spec);
        Json out{{"corpus", corpus_to_json(spec)},
                 {"count", corpus.size()}};
        if (!count_only) {
          Json terms = Json::array();
          for (const Term& t : corpus)
            terms.push_back(Json{{"term", term_to_json(t)},
                                 {"pretty", pretty(t, ctx)}});
          out["terms"] = std::move(terms);
        }
        emit(out);
        return 0;
      }
      if (calculus_str != "systemf")
        throw Error("unknown calculus '" + calculus_str +
                    "' (expected untyped or systemf)");
      spec.calculus = Calculus::SystemF;
      spec.typed_context = parse_typed_context(tctx_str);
      spec.type_height_bound = type_height;
      if (!target_ty_str.empty())
        spec.target_type =
            parse_ty(target_ty_str, spec.typed_context.ty_names());
      std::vector<TTerm> corpus = gen_typed_terms(spec);
      Json out{{"corpus", corpus_to_json(spec)}, {"count", corpus.size()}};
      if (!count_only) {
        Json terms = Json::array();
        for (const TTerm& t : corpus) {
          Ty a = typecheck(spec.typed_context.ctx, t);
          terms.push_back(
              Json{{"term", tterm_to_json(t)},
                   {"pretty", pretty_tterm(t, spec.typed_context)},
                   {"type", pretty_ty(a, spec.typed_context.ty_names())}});
        }
        out["terms"] = std::move(terms);
      }
      emit(out);
      return 0;
    }

    return 2;  // unreachable: a subcommand is required
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
