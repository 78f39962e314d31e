#include <algorithm>
#include <cstdlib>

#include <catch2/catch_amalgamated.hpp>

#include "conflab/json_io.hpp"
#include "conflab/parallel.hpp"
#include "conflab/rewrite_props.hpp"

using namespace conflab;

namespace {
Term peak() { return parse("(\\x. x x) ((\\y. y) (\\y. y))"); }

CorpusSpec closed(int h) {
  CorpusSpec s;
  s.height_bound = h;
  return s;
}

CorpusSpec one_free(int h) {
  CorpusSpec s = closed(h);
  s.free_context_size = 1;
  return s;
}
}  // namespace

TEST_CASE("beta fails the diamond with the canonical peak", "[rewrite-props]") {
  PropertyReport rep = check_diamond(closed(3), beta_relation());
  CHECK(rep.property == PropertyKind::Diamond);
  CHECK(rep.relations == std::vector<std::string>{"beta"});
  CHECK(rep.outcome == Outcome::Fail);
  CHECK(rep.instances_checked == 51);
  CHECK(rep.inconclusive_instances == 0);
  REQUIRE(rep.counterexample.has_value());
  CHECK(rep.counterexample->peak == peak());
  CHECK(rep.counterexample->left ==
        parse("((\\y. y) (\\y. y)) ((\\y. y) (\\y. y))"));
  CHECK(rep.counterexample->right == parse("(\\x. x x) (\\y. y)"));
  // The branch traces are single steps from the peak.
  CHECK(rep.counterexample->left_trace.size() == 2);
  CHECK(rep.counterexample->right_trace.size() == 2);
  CHECK(rep.counterexample->left_trace.front() == peak());
}

TEST_CASE("parallel reduction passes the diamond exhaustively", "[rewrite-props]") {
  PropertyReport rep = check_diamond(closed(3), par_relation());
  CHECK(rep.outcome == Outcome::Pass);
  CHECK(rep.instances_checked == 51);
  CHECK_FALSE(rep.counterexample.has_value());

  PropertyReport rep1 = check_diamond(one_free(2), par_relation());
  CHECK(rep1.outcome == Outcome::Pass);
  CHECK(rep1.instances_checked == 26);
}

TEST_CASE("eta strongly commutes with itself", "[rewrite-props]") {
  PropertyReport rep =
      check_strong_commutation(closed(3), eta_relation(), eta_relation());
  CHECK(rep.outcome == Outcome::Pass);
  CHECK(rep.property == PropertyKind::StrongCommutation);
  CHECK(rep.relations == (std::vector<std::string>{"eta", "eta"}));
}

TEST_CASE("beta and eta commute", "[rewrite-props]") {
  SearchBudget budget{8, 10000};
  PropertyReport sc =
      check_strong_commutation(closed(3), beta_relation(), eta_relation(),
                               budget);
  CHECK(sc.outcome == Outcome::Pass);
  PropertyReport c =
      check_commutation(closed(3), beta_relation(), eta_relation(), budget);
  CHECK(c.outcome == Outcome::Pass);
  CHECK(c.property == PropertyKind::Commutation);
}

TEST_CASE("betaeta is confluent at small heights", "[rewrite-props]") {
  SearchBudget budget{8, 10000};
  PropertyReport rep = check_confluence(closed(3), betaeta_relation(), budget);
  CHECK(rep.outcome == Outcome::Pass);
  CHECK(rep.instances_checked == 51);
  CHECK(rep.property == PropertyKind::Confluence);
}

TEST_CASE("beta satisfies the strip property at small heights", "[rewrite-props]") {
  PropertyReport rep = check_strip(closed(3), beta_relation(), {8, 10000});
  CHECK(rep.outcome == Outcome::Pass);
  CHECK(rep.property == PropertyKind::Strip);
}

TEST_CASE("budget exhaustion reports inconclusive, never failure", "[rewrite-props]") {
  // A one-node closure budget cannot saturate anything that reduces, so the
  // run must end inconclusive rather than inventing refutations.
  PropertyReport rep = check_confluence(closed(3), beta_relation(), {8, 1});
  CHECK(rep.outcome == Outcome::Inconclusive);
  CHECK(rep.inconclusive_instances > 0);
  CHECK_FALSE(rep.counterexample.has_value());
}

TEST_CASE("diamond counterexamples are genuine refutations", "[rewrite-props]") {
  PropertyReport rep = check_diamond(closed(3), beta_relation());
  REQUIRE(rep.counterexample.has_value());
  const auto& cex = *rep.counterexample;
  // Both branches really are one-step reducts of the peak.
  auto rs = beta_reducts(cex.peak);
  CHECK(std::count(rs.begin(), rs.end(), cex.left) == 1);
  CHECK(std::count(rs.begin(), rs.end(), cex.right) == 1);
  // And they are not one-step joinable.
  CHECK(not_one_step_joinable(cex.left, cex.right, beta_relation()));
  // Yet beta is confluent: the branches do join with more budget.
  CHECK(joinable(cex.left, cex.right, beta_relation(), 8, 10000).has_value());
}

TEST_CASE("reports carry their corpus and timing", "[rewrite-props]") {
  PropertyReport rep = check_diamond(closed(2), beta_relation());
  CHECK(rep.corpus.height_bound == 2);
  CHECK(rep.corpus.free_context_size == 0);
  CHECK(rep.elapsed_ms >= 0.0);
  CHECK(rep.instances_checked == 5);
}

TEST_CASE("verdicts do not depend on the worker count", "[rewrite-props]") {
  PropertyReport seq = check_diamond(closed(3), beta_relation());
  setenv("CONFLUENCE_LAB_THREADS", "3", 1);
  PropertyReport par3 = check_diamond(closed(3), beta_relation());
  PropertyReport conf3 =
      check_confluence(closed(3), betaeta_relation(), {8, 10000});
  unsetenv("CONFLUENCE_LAB_THREADS");
  PropertyReport conf1 =
      check_confluence(closed(3), betaeta_relation(), {8, 10000});

  CHECK(par3.outcome == seq.outcome);
  REQUIRE(par3.counterexample.has_value());
  CHECK(par3.counterexample->peak == seq.counterexample->peak);
  CHECK(par3.counterexample->left == seq.counterexample->left);
  CHECK(par3.counterexample->right == seq.counterexample->right);
  CHECK(par3.instances_checked == seq.instances_checked);
  CHECK(par3.inconclusive_instances == seq.inconclusive_instances);

  // Full JSON (minus wall time) is identical as well.
  Json a = report_to_json(seq);
  Json b = report_to_json(par3);
  a.erase("elapsed_ms");
  b.erase("elapsed_ms");
  CHECK(a == b);

  CHECK(conf3.outcome == conf1.outcome);
  CHECK(conf3.inconclusive_instances == conf1.inconclusive_instances);
}

TEST_CASE("checks run on caller-supplied corpora too", "[rewrite-props]") {
  std::vector<Term> corpus{peak(), parse("\\x. x"), parse("(\\x. x) (\\y. y)")};
  BasicPropertyReport<Term> rep = check_diamond_on(corpus, par_relation());
  CHECK(rep.outcome == Outcome::Pass);
  CHECK(rep.instances_checked == 3);

  BasicPropertyReport<Term> fail = check_diamond_on(corpus, beta_relation());
  CHECK(fail.outcome == Outcome::Fail);
  REQUIRE(fail.counterexample.has_value());
  CHECK(fail.counterexample->peak == peak());
}
