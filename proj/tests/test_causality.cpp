#include <doctest.h>

#include <algorithm>

#include "causal/error.hpp"
#include "support.hpp"

using namespace causal;
using namespace causal::testing;

namespace {

// Queries run in context "u1" when the model declares it, else "u".
Verdict decide(const ModelDocument& doc, const std::string& cause, const std::string& effect, RuleVariant v,
               const SearchOptions& options = {}) {
  const CausalModel& m = doc.model;
  const bool has_u1 = std::any_of(doc.contexts.begin(), doc.contexts.end(), [](const auto& c) { return c.first == "u1"; });
  const Context& ctx = doc.context(has_u1 ? "u1" : "u");
  if (v == RuleVariant::Extended) {
    return is_actual_cause(doc.extended(), ctx, cause_of(m, cause), formula_of(m, effect), v, options);
  }
  return is_actual_cause(m, ctx, cause_of(m, cause), formula_of(m, effect), v, options);
}

bool has_cause(const std::vector<std::pair<CandidateCause, Verdict>>& found, const CausalModel& m,
               const std::string& text) {
  const CandidateCause c = cause_of(m, text);
  return std::any_of(found.begin(), found.end(), [&](const auto& p) { return p.first == c; });
}

}  // namespace

TEST_CASE("variant names round trip") {
  for (RuleVariant v : {RuleVariant::Updated, RuleVariant::Original, RuleVariant::Extended}) {
    CHECK(parse_variant(to_string(v)) == v);
  }
  CHECK_THROWS(parse_variant("modified"));
  CHECK(to_string(FailedCondition::AC2bPrime) == "AC2(b')");
  CHECK(to_string(FailedCondition::AC2aPlus) == "AC2(a+)");
}

TEST_CASE("candidate causes are sorted and distinct") {
  CHECK(CandidateCause::of({{2, 1}, {0, 0}}).conjuncts == std::vector<Setting>{{0, 0}, {2, 1}});
  CHECK_THROWS_AS(CandidateCause::of({}), InvalidModel);
  CHECK_THROWS_AS(CandidateCause::of({{1, 0}, {1, 1}}), InvalidModel);
}

TEST_CASE("AC1 fails when the cause or the effect is not actual") {
  const ModelDocument doc = corpus_model("rock_throwing_hits.cm");
  const Context ctx = doc.context("u1");
  const CausalModel& m = doc.model;
  CHECK_FALSE(check_ac1(m, ctx, cause_of(m, "ST=0"), formula_of(m, "BS=1")));
  CHECK_FALSE(check_ac1(m, ctx, cause_of(m, "ST=1"), formula_of(m, "BS=0")));
  const Verdict v = is_actual_cause(m, ctx, cause_of(m, "ST=0"), formula_of(m, "BS=1"), RuleVariant::Updated);
  CHECK_FALSE(v.is_cause);
  CHECK(v.failure == FailedCondition::AC1);
}

TEST_CASE("preemption: the preempted thrower is not a cause") {
  const ModelDocument doc = corpus_model("rock_throwing_hits.cm");
  const CausalModel& m = doc.model;
  const Context ctx = doc.context("u1");
  const Verdict suzy = is_actual_cause(m, ctx, cause_of(m, "ST=1"), formula_of(m, "BS=1"), RuleVariant::Updated);
  REQUIRE(suzy.is_cause);
  CHECK_FALSE(suzy.failure.has_value());
  REQUIRE_FALSE(suzy.witnesses.empty());
  CHECK(suzy.witnesses.front().contingency == std::vector<Setting>{at(m, "BT", 0)});
  CHECK(suzy.witnesses.front().alternative == std::vector<Value>{0});
  const Witness billy_misses{{at(m, "BH", 0)}, {0}};
  CHECK(std::find(suzy.witnesses.begin(), suzy.witnesses.end(), billy_misses) != suzy.witnesses.end());
  for (std::size_t i = 1; i < suzy.witnesses.size(); ++i) {
    CHECK(suzy.witnesses[i - 1].contingency.size() <= suzy.witnesses[i].contingency.size());
  }
  const Verdict billy = is_actual_cause(m, ctx, cause_of(m, "BT=1"), formula_of(m, "BS=1"), RuleVariant::Updated);
  CHECK_FALSE(billy.is_cause);
  CHECK(billy.failure == FailedCondition::AC2b);
  CHECK(billy.witnesses.empty());
}

TEST_CASE("the witness detail separating the two reset clauses") {
  const ModelDocument doc = corpus_model("hopkins_pearl.cm");
  const CausalModel& m = doc.model;
  const Context ctx = doc.context("u");
  const CandidateCause a = cause_of(m, "A=1");
  const CausalFormula d = formula_of(m, "D=1");
  const Witness w{{at(m, "B", 1), at(m, "C", 0)}, {0}};
  CHECK(check_ac2a(m, ctx, a, d, w, RuleVariant::Original));
  CHECK(check_ac2b(m, ctx, a, d, w, RuleVariant::Original));
  CHECK_FALSE(check_ac2b(m, ctx, a, d, w, RuleVariant::Updated));
  CHECK(eval_formula(m, ctx, formula_of(m, "[A<-1, C<-0](D=0)")));

  const Verdict original = is_actual_cause(m, ctx, a, d, RuleVariant::Original);
  CHECK(original.is_cause);
  CHECK(std::find(original.witnesses.begin(), original.witnesses.end(), w) != original.witnesses.end());
  const Verdict updated = is_actual_cause(m, ctx, a, d, RuleVariant::Updated);
  CHECK_FALSE(updated.is_cause);
  CHECK(updated.failure == FailedCondition::AC2b);
}

TEST_CASE("the original rule reports its own reset clause") {
  const ModelDocument doc = corpus_model("hopkins_pearl_shot.cm");
  const Verdict v = decide(doc, "B=0", "D=1", RuleVariant::Original);
  CHECK_FALSE(v.is_cause);
  CHECK(v.failure == FailedCondition::AC2bPrime);
}

TEST_CASE("AC2(a) failure when no contingency makes a difference") {
  const ModelDocument doc = parse_model(R"(
model m
exogenous U: {0, 1}
endogenous A: {0, 1} = U
endogenous B: {0, 1} = U
context u { U = 1 }
)");
  const Verdict v = decide(doc, "A=1", "B=1 | B=0", RuleVariant::Updated);
  CHECK_FALSE(v.is_cause);
  CHECK(v.failure == FailedCondition::AC2a);
  // W may contain the effect variable itself, so here only the reset clause fails
  CHECK(decide(doc, "A=1", "B=1", RuleVariant::Updated).failure == FailedCondition::AC2b);
}

TEST_CASE("non-minimal conjunctions fail AC3 with the smaller cause") {
  const ModelDocument doc = corpus_model("rock_throwing.cm");
  const Verdict v = decide(doc, "ST=1 & BT=1", "BS=1", RuleVariant::Updated);
  CHECK_FALSE(v.is_cause);
  REQUIRE(v.failure == FailedCondition::AC3);
  REQUIRE(v.ac3_subset.has_value());
  CHECK(format_cause(*v.ac3_subset, doc.model.signature()) == "ST=1");
}

TEST_CASE("a conjunction can be a cause when no part is") {
  const ModelDocument doc = corpus_model("scanner_relay.cm");
  const Verdict v = decide(doc, "B=1 & C=1", "WIN=1", RuleVariant::Updated);
  CHECK(v.is_cause);
  REQUIRE_FALSE(v.witnesses.empty());
  CHECK(v.witnesses.front().contingency == std::vector<Setting>{at(doc.model, "A", 0)});
  CHECK(v.witnesses.front().alternative == std::vector<Value>{0, 0});
  CHECK_FALSE(decide(doc, "B=1", "WIN=1", RuleVariant::Updated).is_cause);
  CHECK_FALSE(decide(doc, "C=1", "WIN=1", RuleVariant::Updated).is_cause);
  CHECK_FALSE(decide(doc, "B=1 & C=1", "WIN=1", RuleVariant::Original).is_cause);
}

TEST_CASE("collect_all=false stops at the first witness") {
  const ModelDocument doc = corpus_model("rock_throwing_hits.cm");
  SearchOptions options;
  options.collect_all = false;
  const Verdict v = decide(doc, "ST=1", "BS=1", RuleVariant::Updated, options);
  CHECK(v.is_cause);
  CHECK(v.witnesses.size() == 1);
}

TEST_CASE("the solve budget is enforced") {
  const ModelDocument doc = corpus_model("plurality_5_2.cm");
  SearchOptions options;
  options.budget = 50;
  CHECK_THROWS_AS(decide(doc, "V6=1", "O=0", RuleVariant::Updated, options), SearchBudgetExceeded);
}

TEST_CASE("malformed queries are rejected") {
  const ModelDocument doc = corpus_model("rock_throwing.cm");
  const CausalModel& m = doc.model;
  CHECK_THROWS_AS(is_actual_cause(m, doc.context("u1"), cause_of(m, "ST=1"), formula_of(m, "[BT<-0](BS=1)"),
                                  RuleVariant::Updated),
                  MalformedPhi);
  CHECK_THROWS_AS(
      is_actual_cause(m, doc.context("u1"), cause_of(m, "ST=1"), formula_of(m, "BS=1"), RuleVariant::Extended),
      MissingNormalityOrder);
}

TEST_CASE("extended rule: an abnormal alternative fails AC2(a+)") {
  const ModelDocument doc = corpus_model("bogus_prevention_normality.cm");
  const Verdict v = decide(doc, "A=1", "VS=1", RuleVariant::Extended);
  CHECK_FALSE(v.is_cause);
  CHECK(v.failure == FailedCondition::AC2aPlus);
  CHECK(decide(doc, "A=1", "VS=1", RuleVariant::Updated).is_cause);
}

TEST_CASE("extended rule with a flat order matches the updated rule") {
  for (const char* file : {"rock_throwing_hits.cm", "hopkins_pearl.cm", "spohn_routes.cm", "weslake_two.cm"}) {
    CAPTURE(file);
    const ModelDocument doc = corpus_model(file);
    const CausalModel& m = doc.model;
    const Context& ctx = doc.contexts.back().second;
    const World actual = m.solve(ctx);
    const ExtendedCausalModel ext{m, NormalityOrder::flat()};
    for (VarIndex x = 0; x < m.endogenous_count(); ++x) {
      for (VarIndex y = 0; y < m.endogenous_count(); ++y) {
        const CandidateCause c = CandidateCause::of({{x, actual[x]}});
        const CausalFormula phi = CausalFormula::event(y, actual[y]);
        CHECK(is_actual_cause(m, ctx, c, phi, RuleVariant::Updated).is_cause ==
              is_actual_cause(ext, ctx, c, phi, RuleVariant::Extended).is_cause);
      }
    }
  }
}

TEST_CASE("find_all_causes lists causes by size") {
  const ModelDocument doc = corpus_model("rock_throwing_hits.cm");
  const CausalModel& m = doc.model;
  const auto found = find_all_causes(m, doc.context("u1"), formula_of(m, "BS=1"), RuleVariant::Updated);
  CHECK(has_cause(found, m, "ST=1"));
  CHECK(has_cause(found, m, "SH=1"));
  CHECK(has_cause(found, m, "BS=1"));
  CHECK_FALSE(has_cause(found, m, "BT=1"));
  CHECK_FALSE(has_cause(found, m, "ST=1 & BT=1"));
  for (const auto& [c, v] : found) CHECK(v.is_cause);

  const ModelDocument pair = corpus_model("scanner_relay.cm");
  const auto both = find_all_causes(pair.model, pair.context("u"), formula_of(pair.model, "WIN=1"),
                                    RuleVariant::Updated);
  CHECK(has_cause(both, pair.model, "B=1 & C=1"));
  CHECK(has_cause(both, pair.model, "A=1"));
  CHECK_FALSE(has_cause(both, pair.model, "B=1"));
  const auto singles = find_all_causes(pair.model, pair.context("u"), formula_of(pair.model, "WIN=1"),
                                       RuleVariant::Updated, {}, 1);
  CHECK_FALSE(has_cause(singles, pair.model, "B=1 & C=1"));
  CHECK(has_cause(singles, pair.model, "A=1"));
}

TEST_CASE("witness worlds apply the alternative and the contingency") {
  const ModelDocument doc = corpus_model("hopkins_pearl.cm");
  const CausalModel& m = doc.model;
  const World w = witness_world(m, doc.context("u"), cause_of(m, "A=1"), {{at(m, "B", 1), at(m, "C", 0)}, {0}});
  CHECK(w.values == std::vector<Value>{0, 1, 0, 0});
}

TEST_CASE("best witnesses grade causes by normality") {
  const ModelDocument doc = corpus_model("jack_jill_normality.cm");
  const ExtendedCausalModel ext = doc.extended();
  const CausalModel& m = doc.model;
  const Context& u = doc.context("u");
  const auto phi = formula_of(m, "O=2");
  const auto jack = best_witnesses(ext, u, cause_of(m, "J=0"), phi);
  const auto jill = best_witnesses(ext, u, cause_of(m, "L=0"), phi);
  REQUIRE_FALSE(jack.empty());
  REQUIRE_FALSE(jill.empty());
  CHECK(ext.order.strictly_more_normal(jill.front().world, jack.front().world));
  for (const auto& rw : jill) CHECK(rw.world == witness_world(m, u, cause_of(m, "L=0"), rw.witness));
  // maximality among the returned set
  for (const auto& a : jack) {
    for (const auto& b : jack) CHECK_FALSE(ext.order.strictly_more_normal(a.world, b.world));
  }
}

TEST_CASE("best witnesses needs a plain cause") {
  const ModelDocument doc = corpus_model("rock_throwing_hits.cm");
  const CausalModel& m = doc.model;
  const ExtendedCausalModel ext = doc.extended();
  const Context& u = doc.context("u1");
  CHECK_THROWS_AS(best_witnesses(ext, u, cause_of(m, "BT=1"), formula_of(m, "BS=1")), NoWitness);
  CHECK_THROWS_AS(best_witnesses(ext, u, cause_of(m, "BT=0"), formula_of(m, "BS=1")), PreconditionViolated);
  const ModelDocument bare = corpus_model("rock_throwing.cm");
  CHECK_THROWS_AS(best_witnesses(bare.extended(), bare.context("u1"), cause_of(bare.model, "ST=1 & BT=1"),
                                 formula_of(bare.model, "BS=1")),
                  PreconditionViolated);
}
