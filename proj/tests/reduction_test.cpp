#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "conflab/reduction.hpp"

using namespace conflab;

namespace {
// The running example: (\x. x x) ((\y. y) (\y. y)).
Term peak() { return parse("(\\x. x x) ((\\y. y) (\\y. y))"); }
Term ii() { return parse("(\\y. y) (\\y. y)"); }
Term ident() { return parse("\\y. y"); }
}  // namespace

TEST_CASE("beta reducts are found in pre-order, outermost first", "[reduction]") {
  std::vector<Term> rs = beta_reducts(peak());
  REQUIRE(rs.size() == 2);
  // Root redex first: (\x. x x) applied to I I duplicates the argument.
  CHECK(rs[0] == parse("((\\y. y) (\\y. y)) ((\\y. y) (\\y. y))"));
  // Then the inner redex inside the argument.
  CHECK(rs[1] == parse("(\\x. x x) (\\y. y)"));
}

TEST_CASE("beta contraction substitutes under binders correctly", "[reduction]") {
  // (\x. \y. x) z --> \y. z : the free z must survive the binder crossing.
  Term t = parse("(\\x. \\y. x) z", {"z"});
  std::vector<Term> rs = beta_reducts(t);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0] == parse("\\y. z", {"z"}));
  // (\x. x x) omega-style self application
  CHECK(beta_reducts(parse("(\\x. x x) (\\x. x x)")).front() ==
        parse("(\\x. x x) (\\x. x x)"));
}

TEST_CASE("normal forms have no reducts", "[reduction]") {
  CHECK(beta_reducts(ident()).empty());
  CHECK(beta_reducts(parse("\\x. \\y. x y x")).empty());
  CHECK(eta_reducts(parse("\\x. x x")).empty());
}

TEST_CASE("eta reducts fire only when the bound variable is absent", "[reduction]") {
  NamingContext ctx{"f", "g"};
  // \x. f (\y. g y) x has two eta redexes: the whole term, and \y. g y.
  std::vector<Term> rs = eta_reducts(parse("\\x. f (\\y. g y) x", ctx));
  REQUIRE(rs.size() == 2);
  CHECK(rs[0] == parse("f (\\y. g y)", ctx));  // root peel first
  CHECK(rs[1] == parse("\\x. f g x", ctx));    // inner peel second
  // \x. x x is not an eta redex (x occurs in the function part).
  CHECK(eta_reducts(parse("\\x. x x")).empty());
  // \x. (x x) x is not one either.
  CHECK(eta_reducts(parse("\\x. x x x")).empty());
}

TEST_CASE("alpha-equal eta reducts collapse to one", "[reduction]") {
  // \x. (\y. g y) x: the root peel gives \y. g y and the inner peel gives
  // \x. g x -- the same nameless term, so exactly one reduct survives.
  NamingContext ctx{"g"};
  std::vector<Term> rs = eta_reducts(parse("\\x. (\\y. g y) x", ctx));
  REQUIRE(rs.size() == 1);
  CHECK(rs[0] == parse("\\y. g y", ctx));
}

TEST_CASE("betaeta interleaves both rule sets, eta at the root first", "[reduction]") {
  NamingContext ctx{"w"};
  std::vector<Term> rs = betaeta_reducts(parse("\\x. ((\\y. y) w) x", ctx));
  REQUIRE(rs.size() == 2);
  CHECK(rs[0] == parse("(\\y. y) w", ctx));  // eta peel of the whole term
  CHECK(rs[1] == parse("\\x. w x", ctx));    // beta inside the body
  // Overlap coherence: on \x. (\y. y) x the eta peel and the inner beta
  // both yield the identity, collapsing to a single reduct.
  std::vector<Term> overlap = betaeta_reducts(parse("\\x. (\\y. y) x"));
  REQUIRE(overlap.size() == 1);
  CHECK(overlap[0] == ident());
}

TEST_CASE("relation names", "[reduction]") {
  CHECK(beta_relation().name == "beta");
  CHECK(eta_relation().name == "eta");
  CHECK(betaeta_relation().name == "betaeta");
  Relation u = union_rel(beta_relation(), eta_relation());
  CHECK(u.name == "beta+eta");
  std::vector<Term> rs = u.reducts(parse("\\x. (\\y. y) x"));
  REQUIRE(rs.size() == 1);  // beta and eta agree here modulo alpha
  CHECK(rs[0] == ident());
}

TEST_CASE("reachable explores breadth-first within budgets", "[reduction]") {
  ReachResult<Term> r = reachable(peak(), beta_relation(), 10, 10000);
  CHECK(r.saturated);
  CHECK_FALSE(r.truncated);
  CHECK(r.terms.size() == 7);
  CHECK(r.terms.front() == peak());
  CHECK(std::count(r.terms.begin(), r.terms.end(), ident()) == 1);

  // A one-node budget cannot even expand the start term.
  ReachResult<Term> tight = reachable(peak(), beta_relation(), 10, 1);
  CHECK(tight.truncated);
  CHECK_FALSE(tight.saturated);
  CHECK(tight.terms.size() == 1);

  // Depth zero keeps just the start term: neither saturated nor truncated.
  ReachResult<Term> shallow = reachable(peak(), beta_relation(), 0, 10000);
  CHECK(shallow.terms.size() == 1);
  CHECK_FALSE(shallow.truncated);
  CHECK_FALSE(shallow.saturated);

  // A normal form saturates instantly.
  ReachResult<Term> nf = reachable(ident(), beta_relation(), 10, 10000);
  CHECK(nf.saturated);
  CHECK(nf.terms.size() == 1);
}

TEST_CASE("self-looping terms saturate", "[reduction]") {
  Term omega = parse("(\\x. x x) (\\x. x x)");
  ReachResult<Term> r = reachable(omega, beta_relation(), 50, 10000);
  CHECK(r.saturated);
  CHECK(r.terms.size() == 1);
}

TEST_CASE("joinable finds the first common reduct with traces", "[reduction]") {
  Term m1 = parse("((\\y. y) (\\y. y)) ((\\y. y) (\\y. y))");
  Term m2 = parse("(\\x. x x) (\\y. y)");
  auto j = joinable(m1, m2, beta_relation(), 8, 10000);
  REQUIRE(j.has_value());
  CHECK(j->witness == ii());
  // Traces include both endpoints.
  CHECK(j->left_trace.size() == 3);
  CHECK(j->left_trace.front() == m1);
  CHECK(j->left_trace.back() == ii());
  CHECK(j->right_trace.size() == 2);
  CHECK(j->right_trace.front() == m2);
  CHECK(j->right_trace.back() == ii());
  // Every adjacent trace pair is one beta step.
  for (std::size_t i = 0; i + 1 < j->left_trace.size(); ++i) {
    std::vector<Term> rs = beta_reducts(j->left_trace[i]);
    CHECK(std::count(rs.begin(), rs.end(), j->left_trace[i + 1]) == 1);
  }
}

TEST_CASE("joinable returns nothing for distinct normal forms", "[reduction]") {
  auto j = joinable(parse("\\x. \\y. x"), parse("\\x. \\y. y"),
                    beta_relation(), 8, 10000);
  CHECK_FALSE(j.has_value());
}

TEST_CASE("joinable of a term with itself is trivial", "[reduction]") {
  auto j = joinable(peak(), peak(), beta_relation(), 8, 10000);
  REQUIRE(j.has_value());
  CHECK(j->witness == peak());
  CHECK(j->left_trace.size() == 1);
}

TEST_CASE("normalize reaches the normal form leftmost-outermost", "[reduction]") {
  NormalizeResult<Term> r = normalize(peak(), beta_relation(), 1000);
  CHECK(r.normal_form);
  CHECK(r.term == parse("\\x. x"));
  CHECK(r.steps == 4);

  // Out of fuel: flagged, last term returned.
  Term omega = parse("(\\x. x x) (\\x. x x)");
  NormalizeResult<Term> stuck = normalize(omega, beta_relation(), 10);
  CHECK_FALSE(stuck.normal_form);
  CHECK(stuck.steps == 10);
  CHECK(stuck.term == omega);

  // Leftmost-outermost normalizes terms where the argument diverges.
  Term k_omega = parse("(\\x. \\y. x) (\\z. z) ((\\x. x x) (\\x. x x))");
  NormalizeResult<Term> k = normalize(k_omega, beta_relation(), 1000);
  CHECK(k.normal_form);
  CHECK(k.term == parse("\\z. z"));
}

TEST_CASE("dedup keeps the first of equal reducts", "[reduction]") {
  std::vector<Term> d{ident(), ii(), ident(), ii(), parse("\\x. x x")};
  dedup_keep_first(d);
  REQUIRE(d.size() == 3);
  CHECK(d[0] == ident());
  CHECK(d[1] == ii());
  CHECK(d[2] == parse("\\x. x x"));
}
