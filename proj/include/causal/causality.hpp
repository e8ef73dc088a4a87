#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "causal/formula.hpp"
#include "causal/model.hpp"
#include "causal/normality.hpp"

namespace causal {

enum class RuleVariant : std::uint8_t {
  Updated,   // AC2(b): every subset of W and of Z is reset
  Original,  // AC2(b'): W stays fully set, only Z subsets are reset
  Extended,  // AC2(b) plus the witness world must be at least as normal as the actual one
};

enum class FailedCondition : std::uint8_t { AC1, AC2a, AC2aPlus, AC2b, AC2bPrime, AC3 };

std::string_view to_string(RuleVariant v);
std::string_view to_string(FailedCondition c);
// Accepts "updated", "original", "extended". Throws Error otherwise.
RuleVariant parse_variant(std::string_view text);

// Conjunction X⃗ = x⃗ over distinct endogenous variables, sorted by variable.
struct CandidateCause {
  std::vector<Setting> conjuncts;

  // Sorts, and throws InvalidModel when empty or a variable repeats.
  static CandidateCause of(std::vector<Setting> conjuncts);
  std::size_t size() const { return conjuncts.size(); }
  friend auto operator<=>(const CandidateCause&, const CandidateCause&) = default;
};

// (W⃗, w⃗, x⃗'): contingency settings over variables disjoint from the cause,
// and alternative values aligned with the cause's conjuncts.
struct Witness {
  std::vector<Setting> contingency;
  std::vector<Value> alternative;

  friend auto operator<=>(const Witness&, const Witness&) = default;
};

struct Verdict {
  bool is_cause = false;
  RuleVariant variant = RuleVariant::Updated;
  // Canonical order: |W⃗| ascending, then variables, then values.
  std::vector<Witness> witnesses;
  std::optional<FailedCondition> failure;
  // Set when AC3 fails: a strict sub-conjunction satisfying AC1 and AC2.
  std::optional<CandidateCause> ac3_subset;
};

struct SearchOptions {
  // Cap on model solves per query; exceeding it raises SearchBudgetExceeded.
  std::uint64_t budget = 10'000'000;
  // When false, the search stops at the first witness.
  bool collect_all = true;
};

struct RankedWitness {
  Witness witness;
  World world;
};

bool check_ac1(const CausalModel& model, const Context& ctx, const CandidateCause& cause,
               const CausalFormula& phi);

// Extended on a bare model throws MissingNormalityOrder.
bool check_ac2a(const CausalModel& model, const Context& ctx, const CandidateCause& cause,
                const CausalFormula& phi, const Witness& w, RuleVariant variant);
bool check_ac2a(const ExtendedCausalModel& model, const Context& ctx, const CandidateCause& cause,
                const CausalFormula& phi, const Witness& w, RuleVariant variant);

bool check_ac2b(const CausalModel& model, const Context& ctx, const CandidateCause& cause,
                const CausalFormula& phi, const Witness& w, RuleVariant variant);

// Full AC1-AC3 decision. For the bare variants witnesses only range over
// variables that can influence phi; others cannot change any AC2 clause.
Verdict is_actual_cause(const CausalModel& model, const Context& ctx, const CandidateCause& cause,
                        const CausalFormula& phi, RuleVariant variant, const SearchOptions& options = {});
Verdict is_actual_cause(const ExtendedCausalModel& model, const Context& ctx, const CandidateCause& cause,
                        const CausalFormula& phi, RuleVariant variant, const SearchOptions& options = {});

// All causes of phi, by increasing conjunct count; max_conjuncts == 0 means
// no limit.
std::vector<std::pair<CandidateCause, Verdict>> find_all_causes(const CausalModel& model, const Context& ctx,
                                                                const CausalFormula& phi, RuleVariant variant,
                                                                const SearchOptions& options = {},
                                                                std::size_t max_conjuncts = 0);
std::vector<std::pair<CandidateCause, Verdict>> find_all_causes(const ExtendedCausalModel& model,
                                                                const Context& ctx, const CausalFormula& phi,
                                                                RuleVariant variant,
                                                                const SearchOptions& options = {},
                                                                std::size_t max_conjuncts = 0);

// Witnesses (under the updated rule, no normality threshold) whose worlds
// are maximal in the order. Throws NoWitness when there are none and
// PreconditionViolated when the cause fails AC1 or AC3.
std::vector<RankedWitness> best_witnesses(const ExtendedCausalModel& model, const Context& ctx,
                                          const CandidateCause& cause, const CausalFormula& phi,
                                          const SearchOptions& options = {});

// s_{X⃗=x⃗', W⃗=w⃗, u⃗}
World witness_world(const CausalModel& model, const Context& ctx, const CandidateCause& cause, const Witness& w);

}  // namespace causal
