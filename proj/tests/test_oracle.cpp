#include <doctest.h>

#include <random>

#include "oracle.hpp"

using namespace causal;
using namespace causal::oracle;

namespace {

struct Tally {
  int checked = 0;
  int causes = 0;
};

}  // namespace

TEST_CASE("engine verdicts match a brute force over the definition on 200 random models") {
  std::mt19937 rng(20240611);
  Tally tally;
  for (int round = 0; round < 200; ++round) {
    const TableModel t = random_table_model(rng);
    const CausalModel m = to_causal_model(t);
    const std::vector<int> ctx = random_context(rng, t.exo);
    const Context context{{ctx.begin(), ctx.end()}};
    const std::vector<int> actual = oracle_solve(t, ctx, std::vector<int>(t.endo, -1));
    REQUIRE(m.solve(context).values == actual);

    const Phi phi = random_phi(rng, t.endo, actual);
    const Oracle oracle(t, ctx, phi);
    const CausalFormula f = phi.formula();
    const ExtendedCausalModel ext{m, NormalityOrder::ranked([&t](const World& w) -> long {
                                    return t.ranks[world_index({w.values.begin(), w.values.end()})];
                                  })};

    for (int x = 0; x < t.endo; ++x) {
      for (int value = 0; value <= 1; ++value) {
        const std::vector<std::pair<int, int>> cause{{x, value}};
        const CandidateCause cc = CandidateCause::of({{static_cast<VarIndex>(x), value}});
        for (RuleVariant v : {RuleVariant::Updated, RuleVariant::Original, RuleVariant::Extended}) {
          CAPTURE(round);
          CAPTURE(x);
          CAPTURE(value);
          CAPTURE(to_string(v));
          const bool expected = oracle.is_cause(cause, v);
          const Verdict got = v == RuleVariant::Extended ? is_actual_cause(ext, context, cc, f, v)
                                                         : is_actual_cause(m, context, cc, f, v);
          CHECK(got.is_cause == expected);
          ++tally.checked;
          tally.causes += expected ? 1 : 0;
          for (const Witness& w : got.witnesses) {
            CHECK(check_ac2b(m, context, cc, f, w, v == RuleVariant::Extended ? RuleVariant::Updated : v));
          }
        }
      }
    }
    // pairs exercise AC3
    if (t.endo >= 2) {
      const int a = std::uniform_int_distribution<int>(0, t.endo - 1)(rng);
      const int b = (a + 1) % t.endo;
      std::vector<std::pair<int, int>> cause{{std::min(a, b), actual[std::min(a, b)]},
                                             {std::max(a, b), actual[std::max(a, b)]}};
      const CandidateCause cc = CandidateCause::of({{static_cast<VarIndex>(cause[0].first), cause[0].second},
                                                    {static_cast<VarIndex>(cause[1].first), cause[1].second}});
      for (RuleVariant v : {RuleVariant::Updated, RuleVariant::Original}) {
        CAPTURE(round);
        CHECK(is_actual_cause(m, context, cc, f, v).is_cause == oracle.is_cause(cause, v));
      }
    }
  }
  // the sample must not be degenerate
  CHECK(tally.checked >= 1000);
  CHECK(tally.causes >= 50);
  MESSAGE("checked " << tally.checked << " singleton queries, " << tally.causes << " causes");
}
