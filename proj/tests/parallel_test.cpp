#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "conflab/generator.hpp"
#include "conflab/parallel.hpp"

using namespace conflab;

namespace {
Term peak() { return parse("(\\x. x x) ((\\y. y) (\\y. y))"); }
Term ii() { return parse("(\\y. y) (\\y. y)"); }
Term ident() { return parse("\\y. y"); }

bool contains(const std::vector<Term>& v, const Term& t) {
  return std::find(v.begin(), v.end(), t) != v.end();
}
}  // namespace

TEST_CASE("parallel reduction is reflexive", "[parallel]") {
  for (const char* src : {"\\x. x", "(\\x. x) (\\x. x)", "\\x. x x"}) {
    Term t = parse(src);
    std::vector<Term> rs = par_reducts(t);
    REQUIRE_FALSE(rs.empty());
    CHECK(rs.front() == t);  // the identity step comes first
  }
}

TEST_CASE("parallel reduction contracts independent redexes at once", "[parallel]") {
  // ((\x. x) a) ((\y. y) b) can contract both redexes in a single step.
  NamingContext ctx{"a", "b"};
  Term t = parse("((\\x. x) a) ((\\y. y) b)", ctx);
  std::vector<Term> rs = par_reducts(t);
  CHECK(contains(rs, t));
  CHECK(contains(rs, parse("a ((\\y. y) b)", ctx)));
  CHECK(contains(rs, parse("((\\x. x) a) b", ctx)));
  CHECK(contains(rs, parse("a b", ctx)));
  CHECK(rs.size() == 4);
}

TEST_CASE("parallel reduction subsumes single beta steps", "[parallel]") {
  CorpusSpec spec;
  spec.height_bound = 3;
  for (const Term& m : gen_terms(spec)) {
    std::vector<Term> par = par_reducts(m);
    for (const Term& n : beta_reducts(m)) {
      CHECK(contains(par, n));
    }
  }
}

TEST_CASE("one parallel step cannot erase a redex it just created", "[parallel]") {
  // peak => (I I)(I I), (\x. x x) I, I I, and itself -- but never the final I.
  std::vector<Term> rs = par_reducts(peak());
  CHECK(contains(rs, peak()));
  CHECK(contains(rs, parse("((\\y. y) (\\y. y)) ((\\y. y) (\\y. y))")));
  CHECK(contains(rs, parse("(\\x. x x) (\\y. y)")));
  CHECK(contains(rs, parse("(\\y. y) (\\y. y)")));
  CHECK_FALSE(contains(rs, ident()));
  CHECK(rs.size() == 4);
}

TEST_CASE("complete development contracts every visible redex", "[parallel]") {
  CHECK(complete_dev(peak()) == ii());
  CHECK(complete_dev(ii()) == ident());
  CHECK(complete_dev(ident()) == ident());
  // Under a binder: cd(\x. (\y. y) x) = \x. x.
  CHECK(complete_dev(parse("\\x. (\\y. y) x")) == parse("\\x. x"));
  // cd is itself a parallel step.
  std::vector<Term> rs = par_reducts(peak());
  CHECK(contains(rs, complete_dev(peak())));
}

TEST_CASE("par_step_check agrees with the enumerated reducts", "[parallel]") {
  Term m = peak();
  std::vector<Term> rs = par_reducts(m);
  for (const Term& n : rs) CHECK(par_step_check(m, n));
  // Negative: a two-parallel-step descendant is not one step away.
  CHECK_FALSE(par_step_check(m, ident()));
  // Negative: unrelated terms.
  CHECK_FALSE(par_step_check(ident(), parse("\\x. x x")));
  // Reflexivity through the checker.
  CHECK(par_step_check(m, m));
}

TEST_CASE("the triangle property: every reduct rejoins at cd", "[parallel]") {
  Term m = peak();
  Term cd = complete_dev(m);
  for (const Term& n : par_reducts(m)) {
    CHECK(par_step_check(n, cd));
  }
}

TEST_CASE("parallel steps are stable under substitution", "[parallel]") {
  // m = (\y. y) x => x (with x free at index 0), n = I I => I.
  NamingContext ctx{"x"};
  Term m = parse("(\\y. y) x", ctx);
  Term m1 = parse("x", ctx);
  Term n = ii();
  Term n1 = ident();
  REQUIRE(par_step_check(m, m1));
  REQUIRE(par_step_check(n, n1));
  CHECK(par_subst_check(m, m1, n, n1));
  // Trivial instance: variables are parallel-stable.
  CHECK(par_subst_check(Term::var(0), Term::var(0), ident(), ident()));
}

TEST_CASE("par_subst_check rejects unrelated inputs", "[parallel]") {
  CHECK_THROWS_AS(
      par_subst_check(peak(), ident(), ident(), ident()),
      PreconditionError);
}

TEST_CASE("substitution stability sweeps a small corpus", "[parallel]") {
  CorpusSpec spec;
  spec.height_bound = 2;
  spec.free_context_size = 1;
  std::vector<Term> corpus = gen_terms(spec);
  int checked = 0;
  for (const Term& m : corpus) {
    for (const Term& m1 : par_reducts(m)) {
      // Substitute the sole free variable with a closed redex and its reduct.
      CHECK(par_subst_check(m, m1, ii(), ident()));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("the par relation is registered under its name", "[parallel]") {
  Relation r = par_relation();
  CHECK(r.name == "par");
  CHECK(r.reducts(peak()) == par_reducts(peak()));
}
