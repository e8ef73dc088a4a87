#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "causal/cli.hpp"
#include "causal/transforms.hpp"
#include "support.hpp"

using namespace causal;
using namespace causal::testing;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_command(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string model_path(const std::string& file) { return default_corpus_dir() + "/" + file; }

}  // namespace

TEST_CASE("cause prints a verdict and exits by outcome") {
  const Run yes = run({"cause", "-m", model_path("rock_throwing_hits.cm"), "-c", "u1", "--cause", "ST=1", "--effect",
                       "BS=1"});
  CHECK(yes.code == kExitOk);
  CHECK(yes.out.find("ST=1 is an actual cause of BS=1 in (rock_throwing_hits, u1) under the updated rule") == 0);
  CHECK(yes.out.find("witness: W={BT=0} X'={ST=0}") != std::string::npos);

  const Run no = run({"cause", "-m", model_path("hopkins_pearl.cm"), "-c", "u", "--cause", "A=1", "--effect", "D=1"});
  CHECK(no.code == kExitNegative);
  CHECK(no.out.find("is not an actual cause") != std::string::npos);
  CHECK(no.out.find("failed: AC2(b)") != std::string::npos);
}

TEST_CASE("cause --json follows the verdict schema") {
  const Run r = run({"cause", "-m", model_path("hopkins_pearl.cm"), "-c", "u", "--cause", "A=1", "--effect", "D=1",
                     "--variant", "original", "--json"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("is_cause") == true);
  CHECK(j.at("variant") == "original");
  CHECK(j.at("model") == "hopkins_pearl");
  CHECK(j.at("context") == "u");
  CHECK(j.at("failure_reason").is_null());
  bool found = false;
  for (const auto& w : j.at("witnesses")) {
    CHECK(w.at("alt_cause") == nlohmann::json::parse(R"([{"var":"A","value":0}])"));
    if (w.at("contingency") == nlohmann::json::parse(R"([{"var":"B","value":1},{"var":"C","value":0}])")) found = true;
  }
  CHECK(found);

  const Run ac3 = run({"cause", "-m", model_path("rock_throwing.cm"), "-c", "u1", "--cause", "ST=1 & BT=1",
                       "--effect", "BS=1", "--json"});
  CHECK(ac3.code == kExitNegative);
  CHECK(nlohmann::json::parse(ac3.out).at("failure_reason") == "AC3: ST=1");
}

TEST_CASE("solve and eval") {
  const Run s = run({"solve", "-m", model_path("hopkins_pearl.cm"), "-c", "u"});
  CHECK(s.code == kExitOk);
  CHECK(s.out == "A = 1\nB = 0\nC = 1\nD = 1\n");
  const Run sj = run({"solve", "-m", model_path("hopkins_pearl.cm"), "-c", "u", "--json"});
  CHECK(nlohmann::json::parse(sj.out).at("world").at("D") == 1);

  const Run e = run({"eval", "-m", model_path("hopkins_pearl.cm"), "-c", "u", "-f", "[A<-1, C<-0](D=0)"});
  CHECK(e.code == kExitOk);
  CHECK(e.out == "true\n");
  const Run f = run({"eval", "-m", model_path("hopkins_pearl.cm"), "-c", "u", "-f", "D=0", "--json"});
  CHECK(f.code == kExitNegative);
  CHECK(nlohmann::json::parse(f.out).at("holds") == false);
}

TEST_CASE("causes lists every cause") {
  const Run r = run({"causes", "-m", model_path("rock_throwing_hits.cm"), "-c", "u1", "--effect", "BS=1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("ST=1") == 0);
  CHECK(r.out.find("BT=1") == std::string::npos);
}

TEST_CASE("conservative reports counterexamples") {
  const Run ok = run({"conservative", "--m1", model_path("rock_throwing.cm"), "--m2",
                      model_path("rock_throwing_hits.cm")});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out == "conservative\n");
  const Run bad = run({"conservative", "-m1", model_path("rock_throwing_hits.cm"), "-m2",
                       model_path("rock_throwing_extra_path.cm")});
  CHECK(bad.code == kExitNegative);
  CHECK(bad.out ==
        "not conservative: in context U=0, setting ST=0, BT=0, SH=0, BH=1 gives BS=1 in the base model but BS=0 in "
        "the extension\n");
  const Run js = run({"conservative", "--m1", model_path("rock_throwing_hits.cm"), "--m2",
                      model_path("rock_throwing_extra_path.cm"), "--json"});
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j.at("is_conservative") == false);
  CHECK(j.at("counterexample").at("variable") == "BS");
  CHECK(j.at("counterexample").at("context").at("U") == 0);
  const Run ce = run({"ce", "--m1", model_path("bogus_prevention.cm"), "--m2",
                      model_path("bogus_prevention_normality.cm")});
  CHECK(ce.code == kExitNegative);
  const Run mismatch = run({"conservative", "--m1", model_path("hall_reporters.cm"), "--m2",
                            model_path("hall_agreement.cm")});
  CHECK(mismatch.code == kExitError);
}

TEST_CASE("kill-witnesses prints a conservative extension") {
  const Run r = run({"kill-witnesses", "-m", model_path("hopkins_pearl.cm"), "-c", "u", "--cause", "A=1", "--effect",
                     "D=1"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.err.find("killed 1 witness") != std::string::npos);
  const ModelDocument killed = parse_model(r.out);
  CHECK(killed.name == "hopkins_pearl_killed");
  const ModelDocument base = corpus_model("hopkins_pearl.cm");
  CHECK(is_conservative_extension(killed.model, base.model).is_conservative);
  CHECK_FALSE(is_actual_cause(killed.model, killed.context("u"), cause_of(killed.model, "A=1"),
                              formula_of(killed.model, "D=1"), RuleVariant::Original)
                  .is_cause);
  const Run bad = run({"kill-witnesses", "-m", model_path("hopkins_pearl.cm"), "-c", "u", "--cause", "C=1",
                       "--effect", "D=1"});
  CHECK(bad.code == kExitError);
}

TEST_CASE("stability prints the builder's model") {
  for (int n : {0, 3, 4}) {
    const Run r = run({"stability", "--n", std::to_string(n)});
    REQUIRE(r.code == kExitOk);
    const ModelDocument doc = parse_model(r.out);
    const StabilityModel s = build_stability_model(n);
    CHECK(doc.model == s.model);
    CHECK(doc.context("u0") == s.u0);
    CHECK(doc.context("u1") == s.u1);
  }
  CHECK(run({"stability", "--n", "-1"}).code == kExitUsage);
}

TEST_CASE("respects and best") {
  CHECK(run({"respects", "-m", model_path("scanner_relay.cm"), "-c", "u", "--vars", "D'"}).code == kExitOk);
  const Run no = run({"respects", "-m", model_path("scanner.cm"), "-c", "u", "--vars", "D"});
  CHECK(no.code == kExitNegative);
  CHECK(no.out.find("violating world") != std::string::npos);
  const Run best = run({"best", "-m", model_path("jack_jill_normality.cm"), "-c", "u", "--cause", "L=0", "--effect",
                        "O=2"});
  CHECK(best.code == kExitOk);
  CHECK(best.out.find("rank 0") != std::string::npos);
  const Run none = run({"best", "-m", model_path("rock_throwing_hits.cm"), "-c", "u1", "--cause", "BT=1", "--effect",
                        "BS=1"});
  CHECK(none.code == kExitError);
}

TEST_CASE("corpus run passes on the bundled corpus") {
  const Run r = run({"corpus", "run"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("FAIL") == std::string::npos);
  CHECK(r.out.find("plurality-17-2") == std::string::npos);
  const Run j = run({"corpus", "run", "--json"});
  CHECK(j.code == kExitOk);
  CHECK(nlohmann::json::parse(j.out).is_object());
}

TEST_CASE("usage and engine errors map to exit codes") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"cause", "-m", model_path("hopkins_pearl.cm")}).code == kExitUsage);
  CHECK(run({"cause", "-m", model_path("hopkins_pearl.cm"), "-c", "u", "--cause", "A=1", "--effect", "D=1",
             "--variant", "sideways"})
            .code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
  const Run missing = run({"solve", "-m", model_path("missing.cm"), "-c", "u"});
  CHECK(missing.code == kExitError);
  CHECK(missing.err.find("error:") == 0);
  CHECK(run({"solve", "-m", model_path("hopkins_pearl.cm"), "-c", "nowhere"}).code == kExitError);
  CHECK(run({"cause", "-m", model_path("hopkins_pearl.cm"), "-c", "u", "--cause", "A=1", "--effect", "Q=1"}).code ==
        kExitError);
  CHECK(run({"cause", "-m", model_path("plurality_5_2.cm"), "-c", "u", "--cause", "V6=1", "--effect", "O=0",
             "--budget", "10"})
            .code == kExitError);
}
