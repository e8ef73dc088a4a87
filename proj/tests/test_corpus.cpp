#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "causal/error.hpp"
#include "causal/transforms.hpp"
#include "support.hpp"

using namespace causal;
using namespace causal::testing;

namespace {

// Value of `target` in each model for every assignment of the named inputs.
void check_same_function(const CausalModel& a, const CausalModel& b, const std::vector<std::string>& inputs,
                         const std::string& target) {
  std::vector<const Range*> ranges;
  for (const auto& name : inputs) ranges.push_back(&a.signature().endogenous_range(a.signature().endogenous_index(name)));
  const Context ua = a.all_contexts().front();
  const Context ub = b.all_contexts().front();
  for_each_assignment(ranges, [&](const std::vector<Value>& values) {
    std::vector<std::pair<std::string, Value>> named;
    for (std::size_t i = 0; i < inputs.size(); ++i) named.emplace_back(inputs[i], values[i]);
    const World wa = a.solve(ua, a.intervention_from(named));
    const World wb = b.solve(ub, b.intervention_from(named));
    CHECK(wa[a.signature().endogenous_index(target)] == wb[b.signature().endogenous_index(target)]);
    return true;
  });
}

}  // namespace

TEST_CASE("the bundled corpus reproduces every expected verdict") {
  const auto cases = load_corpus(default_corpus_dir());
  std::size_t fast = 0;
  for (const auto& c : cases) fast += c.slow ? 0 : 1;
  const CorpusReport report = verify_corpus(default_corpus_dir());
  CHECK(report.results.size() == fast);
  for (const CaseResult& r : report.results) {
    CAPTURE(r.spec.id);
    CAPTURE(r.error);
    CHECK(r.passed());
  }
  for (std::size_t i = 1; i < report.results.size(); ++i) {
    CHECK(report.results[i - 1].spec.id < report.results[i].spec.id);
  }
}

TEST_CASE("corpus entries are well formed") {
  const auto cases = load_corpus(default_corpus_dir());
  std::set<std::string> ids;
  for (const auto& c : cases) {
    CAPTURE(c.id);
    CHECK(ids.insert(c.id).second);
    CHECK_FALSE(c.source.empty());
    const ModelDocument doc = corpus_model(c.model);
    CHECK_NOTHROW(doc.context(c.context));
    CHECK_NOTHROW(parse_cause(c.cause, doc.model));
    CHECK_NOTHROW(parse_formula(c.effect, doc.model));
  }
}

TEST_CASE("malformed corpus files are rejected") {
  const auto dir = std::filesystem::temp_directory_path() / "causal_corpus_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "cases.json") << R"({"cases": [{"id": "x", "model": "m.cm"}]})";
  }
  CHECK_THROWS_AS(load_corpus(dir.string()), Error);
  {
    std::ofstream(dir / "cases.json") << R"({"cases": [{"id": "x", "model": "m.cm", "context": "u", "cause": "A=1",
      "effect": "B=1", "variant": "updated", "expected": "maybe"}]})";
  }
  CHECK_THROWS_AS(load_corpus(dir.string()), Error);
  {
    std::ofstream(dir / "cases.json") << "{ not json";
  }
  CHECK_THROWS_AS(load_corpus(dir.string()), Error);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(load_corpus(dir.string()), Error);
}

TEST_CASE("a missing model file is reported as a failed case") {
  CorpusCase c;
  c.id = "missing";
  c.model = "does_not_exist.cm";
  c.context = "u";
  c.cause = "A=1";
  c.effect = "B=1";
  const CaseResult r = run_case(default_corpus_dir(), c);
  CHECK_FALSE(r.passed());
  CHECK_FALSE(r.actual.has_value());
  CHECK_FALSE(r.error.empty());
}

TEST_CASE("the 17-2 plurality witness: eight A voters switch to C") {
  const ModelDocument doc = corpus_model("plurality_17_2.cm");
  const CausalModel& m = doc.model;
  const Context& u = doc.context("u");
  CHECK(m.solve(u)[m.signature().endogenous_index("O")] == 0);
  Witness w;
  for (int i = 1; i <= 8; ++i) w.contingency.push_back(at(m, "V" + std::to_string(i), 2));
  w.alternative = {2};
  const CandidateCause c = cause_of(m, "V18=1");
  const CausalFormula phi = formula_of(m, "O=0");
  CHECK(check_ac1(m, u, c, phi));
  CHECK(check_ac2a(m, u, c, phi, w, RuleVariant::Updated));
  CHECK(check_ac2b(m, u, c, phi, w, RuleVariant::Updated));
  // seven switches leave A ahead even without the B vote
  Witness short_by_one = w;
  short_by_one.contingency.pop_back();
  CHECK_FALSE(check_ac2a(m, u, c, phi, short_by_one, RuleVariant::Updated));
}

TEST_CASE("stability corpus files match the builder") {
  for (int n = 0; n <= 6; ++n) {
    CAPTURE(n);
    const ModelDocument doc = corpus_model("stability_" + std::to_string(n) + ".cm");
    const StabilityModel s = build_stability_model(n);
    CHECK(doc.model == s.model);
    CHECK(doc.context("u0") == s.u0);
    CHECK(doc.context("u1") == s.u1);
  }
}

TEST_CASE("alternative encodings compute the same outcome") {
  const CausalModel spohn = corpus_model("spohn_switch.cm").model;
  check_same_function(spohn, corpus_model("spohn_routes.cm").model, {"A", "B", "S"}, "C");
  check_same_function(spohn, corpus_model("spohn_b_switch.cm").model, {"A", "B", "S"}, "C");
  const CausalModel lamp = corpus_model("weslake_lamp.cm").model;
  check_same_function(lamp, corpus_model("weslake_two.cm").model, {"A", "B", "C"}, "L");
  check_same_function(lamp, corpus_model("weslake_not.cm").model, {"A", "B", "C"}, "L");
  const CausalModel vote = corpus_model("glymour_vote.cm").model;
  const std::vector<std::string> voters{"A1", "A2", "A3", "A4", "A5"};
  check_same_function(vote, corpus_model("glymour_mechanisms.cm").model, voters, "O");
  check_same_function(vote, corpus_model("glymour_split.cm").model, voters, "O");
  const CausalModel jj = corpus_model("jack_jill.cm").model;
  check_same_function(jj, corpus_model("jack_jill_normality.cm").model, {"J", "L", "R1", "R2", "R3", "R4", "R5"},
                      "O");
}

TEST_CASE("the agreement encoding recovers B from X and D") {
  const ModelDocument hall = corpus_model("hall_agreement.cm");
  for (const Context& u : hall.model.all_contexts()) {
    const World w = hall.model.solve(u);
    const auto& sig = hall.model.signature();
    CHECK(w[sig.endogenous_index("B")] == (w[sig.endogenous_index("X")] == w[sig.endogenous_index("D")] ? 1 : 0));
  }
}
