#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "causal/causality.hpp"
#include "causal/formula.hpp"
#include "causal/model.hpp"
#include "causal/normality.hpp"

namespace causal {

using NamedSetting = std::pair<std::string, Value>;

// A context and setting of V - {X} under which X differs between the models.
struct ExtensionCounterexample {
  Context context;
  std::string variable;
  std::vector<NamedSetting> setting;
  Value value_in_base = 0;
  Value value_in_extension = 0;
};

// A context and intervention over V where the two normality thresholds disagree.
struct NormalityCounterexample {
  Context context;
  std::vector<NamedSetting> setting;
  bool base_at_least_as_normal = false;
  bool extension_at_least_as_normal = false;
};

struct ExtensionReport {
  bool is_conservative = true;
  std::optional<ExtensionCounterexample> counterexample;
  std::optional<NormalityCounterexample> normality_counterexample;
};

// Exhaustive check that m_prime conservatively extends m. Throws
// SignatureMismatch unless the exogenous signatures are equal and every
// endogenous variable of m exists in m_prime with the same range.
ExtensionReport is_conservative_extension(const CausalModel& m_prime, const CausalModel& m);

// Both the base check and the normality-threshold condition over every
// intervention on V(m).
ExtensionReport is_conservative_extension_extended(const ExtendedCausalModel& m_prime,
                                                   const ExtendedCausalModel& m);

struct FormulaDisagreement {
  CausalFormula formula;  // over m's signature
  Context context;
  bool holds_in_base = false;
};

struct FormulaAgreement {
  bool agree = true;
  std::size_t formulas_checked = 0;
  std::optional<FormulaDisagreement> disagreement;
};

// Random causal formulas over V(m), each evaluated in every context of both
// models.
FormulaAgreement check_formula_agreement(const CausalModel& m_prime, const CausalModel& m, std::size_t samples,
                                         std::uint64_t seed);
// Same comparison for the given formulas (over m's signature).
FormulaAgreement find_formula_disagreement(const CausalModel& m_prime, const CausalModel& m,
                                           const std::vector<CausalFormula>& formulas);
// The formula [W<-w](X=x) that a conservativity counterexample falsifies.
CausalFormula counterexample_formula(const CausalModel& m, const ExtensionCounterexample& cex);

// A random formula over the model's variables: a boolean combination of
// events, optionally under one intervention prefix.
CausalFormula random_formula(const CausalModel& m, std::mt19937_64& rng, int max_depth);

struct DeviationRecord {
  World world;
  std::string variable;
  Value expected = 0;
  Value actual = 0;
};

std::vector<DeviationRecord> deviating_variables(const CausalModel& m, const Context& ctx, const World& s);
// Whether variable v takes a value in s other than its equation gives.
bool deviates(const CausalModel& m, const Context& ctx, const World& s, VarIndex v);

struct RespectReport {
  bool respects = true;
  std::optional<World> violating_world;
};

RespectReport respects_equations(const ExtendedCausalModel& m, const Context& ctx,
                                 const std::vector<VarIndex>& vars);

// Rank 0 for worlds with no deviation on vars, rank 1 otherwise.
NormalityOrder normality_from_respect(const CausalModel& m, const Context& ctx, const std::vector<VarIndex>& vars);

// Adds fresh_name = (X=x & W=w) and overrides Y's equation in the two
// special cases of the construction. Variables downstream of Y are left out
// of the Z conditions. Throws NotAWitness, WitnessEqualsActual.
CausalModel kill_witness(const CausalModel& m, const Context& ctx, const Setting& cause, const Setting& effect,
                         const Witness& w, const std::string& fresh_name);

struct KillResult {
  CausalModel model;
  std::vector<Witness> killed;  // in the order they were removed
};

// Repeats kill_witness on the first remaining witness under the original
// rule until the cause is gone. Throws PreconditionViolated unless the
// cause holds under the original rule but not under the updated one.
KillResult kill_all_witnesses(const CausalModel& m, const Context& ctx, const Setting& cause,
                              const Setting& effect, std::size_t max_iterations = 64);

struct StabilityModel {
  CausalModel model;
  Context u0;
  Context u1;
};

// The n-th model of the stability family: A, B, then X1, Y1, X2, ...
StabilityModel build_stability_model(int n);

}  // namespace causal
