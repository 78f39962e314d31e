#include <sys/wait.h>

#include <cstdio>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "conflab/json_io.hpp"

using conflab::Json;

namespace {

struct CmdResult {
  int exit_code;
  std::string out;
};

// Run the CLI with the given argument string; stderr is discarded so stdout
// stays pure JSON. `env` may carry a KEY=VALUE prefix.
CmdResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env.empty() ? "" : env + " ";
  cmd += std::string(CONFLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  int code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return {code, out};
}

// Remove the wall-time line so runs can be compared byte for byte.
std::string strip_elapsed(std::string s) {
  auto pos = s.find("\"elapsed_ms\"");
  if (pos == std::string::npos) return s;
  auto begin = s.rfind('\n', pos);
  begin = (begin == std::string::npos) ? 0 : begin + 1;
  auto end = s.find('\n', pos);
  s.erase(begin, end - begin + 1);
  return s;
}

}  // namespace

TEST_CASE("parse emits term JSON and round-trips through --from-json", "[cli]") {
  CmdResult r = run_cli("parse '\\x. x y' --ctx y");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["pretty"] == "\\x. x y");
  CHECK(j["height"] == 2);
  CHECK(j["term"]["lam"]["app"][0]["var"] == 0);

  std::string packed = j["term"].dump();
  CmdResult r2 = run_cli("parse '" + packed + "' --ctx y --from-json");
  CHECK(r2.exit_code == 0);
  CHECK(Json::parse(r2.out)["term"] == j["term"]);
}

TEST_CASE("parse failures exit with the usage code", "[cli]") {
  CHECK(run_cli("parse 'x'").exit_code == 2);            // unbound name
  CHECK(run_cli("parse '\\x. x)'").exit_code == 2);      // trailing input
  CHECK(run_cli("parse 'x' --nonsense").exit_code == 2); // unknown flag
  CHECK(run_cli("").exit_code == 2);                     // missing subcommand
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("reducts lists one-step successors in canonical order", "[cli]") {
  CmdResult r =
      run_cli("reducts '(\\x. x x) ((\\y. y) (\\y. y))' --rel beta");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  REQUIRE(j["reducts"].size() == 2);
  CHECK(j["pretty"][0] == "(\\x. x) (\\x. x) ((\\x. x) (\\x. x))");
  CHECK(j["pretty"][1] == "(\\x. x x) (\\x. x)");
  CHECK(j["relation"] == "beta");

  CmdResult eta = run_cli("reducts '\\x. f x' --rel eta --ctx f");
  Json je = Json::parse(eta.out);
  REQUIRE(je["reducts"].size() == 1);
  CHECK(je["pretty"][0] == "f");
}

TEST_CASE("par-reducts includes the reflexive step", "[cli]") {
  CmdResult r = run_cli("par-reducts '(\\x. x) y' --ctx y");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["relation"] == "par");
  REQUIRE(j["reducts"].size() == 2);
  CHECK(j["pretty"][0] == "(\\x. x) y");
  CHECK(j["pretty"][1] == "y");
}

TEST_CASE("normalize reports the normal form and step count", "[cli]") {
  CmdResult r = run_cli("normalize '(\\x. x x) ((\\y. y) (\\y. y))'");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["normal_form"] == true);
  CHECK(j["steps"] == 4);
  CHECK(j["pretty"] == "\\x. x");

  CmdResult stuck = run_cli("normalize '(\\x. x x) (\\x. x x)' --fuel 7");
  Json js = Json::parse(stuck.out);
  CHECK(js["normal_form"] == false);
  CHECK(js["steps"] == 7);
}

TEST_CASE("develop contracts every visible redex at once", "[cli]") {
  CmdResult r = run_cli("develop '(\\x. x x) ((\\y. y) (\\y. y))'");
  CHECK(r.exit_code == 0);
  CHECK(Json::parse(r.out)["pretty"] == "(\\x. x) (\\x. x)");
}

TEST_CASE("join finds a common reduct or reports inconclusive", "[cli]") {
  CmdResult r = run_cli(
      "join '((\\y. y) (\\y. y)) ((\\y. y) (\\y. y))' '(\\x. x x) (\\y. y)'");
  CHECK(r.exit_code == 0);
  Json j = Json::parse(r.out);
  CHECK(j["found"] == true);
  CHECK(j["pretty"] == "(\\x. x) (\\x. x)");
  CHECK(j["join"]["left_trace"]["steps"].size() == 3);
  CHECK(j["join"]["right_trace"]["steps"].size() == 2);

  CmdResult miss = run_cli("join '\\x. \\y. x' '\\x. \\y. y'");
  CHECK(miss.exit_code == 3);
  CHECK(Json::parse(miss.out)["found"] == false);
}

TEST_CASE("check reports outcomes with matching exit codes", "[cli]") {
  CmdResult fail = run_cli("check diamond --rel beta --height 3");
  CHECK(fail.exit_code == 1);
  Json jf = Json::parse(fail.out);
  CHECK(jf["outcome"] == "fail");
  CHECK(jf["counterexample"]["pretty"]["peak"] ==
        "(\\x. x x) ((\\x. x) (\\x. x))");
  CHECK(jf["instances_checked"] == 51);

  CmdResult pass = run_cli("check diamond --rel par --height 3");
  CHECK(pass.exit_code == 0);
  CHECK(Json::parse(pass.out)["outcome"] == "pass");

  CmdResult comm =
      run_cli("check comm --rel beta --rel2 eta --height 3 --depth 8");
  CHECK(comm.exit_code == 0);
  Json jc = Json::parse(comm.out);
  CHECK(jc["outcome"] == "pass");
  CHECK(jc["relations"] == Json::array({"beta", "eta"}));

  CmdResult inc = run_cli("check confluence --rel beta --height 3 --nodes 1");
  CHECK(inc.exit_code == 3);
  CHECK(Json::parse(inc.out)["outcome"] == "inconclusive");
}

TEST_CASE("cex finds the canonical counterexample", "[cli]") {
  CmdResult r = run_cli("cex diamond --rel beta --height 3");
  CHECK(r.exit_code == 1);
  Json j = Json::parse(r.out);
  CHECK(j["found"] == true);
  CHECK(j["counterexample"]["pretty"]["peak"] ==
        "(\\x. x x) ((\\x. x) (\\x. x))");

  CmdResult none = run_cli("cex diamond --rel par --height 3");
  CHECK(none.exit_code == 0);
  CHECK(Json::parse(none.out)["found"] == false);
}

TEST_CASE("typecheck distinguishes well- and ill-typed terms", "[cli]") {
  CmdResult ok = run_cli("typecheck '/\\a. \\x : a. x'");
  CHECK(ok.exit_code == 0);
  Json jo = Json::parse(ok.out);
  CHECK(jo["well_typed"] == true);
  CHECK(jo["pretty"] == "forall a. a -> a");

  CmdResult ctx = run_cli("typecheck '<fst p, snd p>' --tctx 'p : Unit * Unit'");
  CHECK(ctx.exit_code == 0);
  CHECK(Json::parse(ctx.out)["pretty"] == "Unit * Unit");

  CmdResult bad = run_cli("typecheck 'fst ()'");
  CHECK(bad.exit_code == 1);
  Json jb = Json::parse(bad.out);
  CHECK(jb["well_typed"] == false);
  CHECK(jb["error"]["location"] == "first projection");

  CmdResult unparsable = run_cli("typecheck 'fst'");
  CHECK(unparsable.exit_code == 2);
}

TEST_CASE("gen reports counts and typed corpora", "[cli]") {
  CmdResult r = run_cli("gen --height 3 --count-only");
  CHECK(r.exit_code == 0);
  CHECK(Json::parse(r.out)["count"] == 51);

  CmdResult terms = run_cli("gen --height 2");
  Json jt = Json::parse(terms.out);
  CHECK(jt["count"] == 5);
  REQUIRE(jt["terms"].size() == 5);
  CHECK(jt["terms"][0]["pretty"] == "\\x. x");

  CmdResult typed = run_cli(
      "gen --calculus systemf --tctx 'a, x : a, f : a -> a' --height 2 "
      "--count-only");
  CHECK(typed.exit_code == 0);
  Json jy = Json::parse(typed.out);
  CHECK(jy["count"] == 134);
  CHECK(jy["corpus"]["typed_context"] == "a, x : a, f : a -> a");

  CmdResult target = run_cli(
      "gen --calculus systemf --tctx 'p : Unit * Unit' --height 3 "
      "--target-type 'Unit * Unit' --count-only");
  CHECK(target.exit_code == 0);
  CHECK(Json::parse(target.out)["count"].get<int>() > 0);
}

TEST_CASE("check output is deterministic across runs and worker counts", "[cli]") {
  const std::string args = "check confluence --rel betaeta --height 3";
  CmdResult a = run_cli(args);
  CmdResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == a.exit_code);
  CHECK(strip_elapsed(a.out) == strip_elapsed(b.out));

  CmdResult c = run_cli(args, "CONFLUENCE_LAB_THREADS=3");
  CHECK(c.exit_code == a.exit_code);
  CHECK(strip_elapsed(c.out) == strip_elapsed(a.out));

  CmdResult d = run_cli("check diamond --rel beta --height 3",
                        "CONFLUENCE_LAB_THREADS=4");
  CmdResult e = run_cli("check diamond --rel beta --height 3");
  CHECK(d.exit_code == 1);
  CHECK(strip_elapsed(d.out) == strip_elapsed(e.out));
}
