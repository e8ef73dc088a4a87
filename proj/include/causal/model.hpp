#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "causal/expression.hpp"
#include "causal/types.hpp"

namespace causal {

// Settings over distinct endogenous variables, kept sorted by variable.
class Intervention {
 public:
  Intervention() = default;
  // Throws InvalidModel on a repeated variable.
  explicit Intervention(std::vector<Setting> settings);

  const std::vector<Setting>& settings() const { return settings_; }
  bool empty() const { return settings_.empty(); }
  std::size_t size() const { return settings_.size(); }

  friend bool operator==(const Intervention&, const Intervention&) = default;

 private:
  std::vector<Setting> settings_;
};

class CausalModel;

// Either a topological order of the endogenous variables or a cycle.
struct RecursionCheck {
  std::vector<VarIndex> order;
  std::vector<VarIndex> cycle;
  bool is_recursive() const { return cycle.empty(); }
};

// Syntactic dependency analysis: a reference anywhere in an equation counts,
// including references inside case arms that can never fire. Ties in the
// order go to the earlier declared variable.
RecursionCheck check_recursive(const Signature& sig, std::span<const Expression> equations);

class CausalModel {
 public:
  // Validates the signature/equation pairing, references, produced values and
  // recursiveness. Throws InvalidModel, UnknownVariable, ValueOutOfRange or
  // CyclicModel.
  static CausalModel create(Signature sig, std::vector<Expression> equations);

  const Signature& signature() const { return sig_; }
  const std::vector<Expression>& equations() const { return equations_; }
  const Expression& equation(VarIndex v) const { return equations_[v]; }
  const std::vector<VarIndex>& order() const { return order_; }
  // Endogenous variables referenced by v's equation (sorted, distinct).
  const std::vector<VarIndex>& parents(VarIndex v) const { return parents_[v]; }
  std::size_t endogenous_count() const { return sig_.endogenous_count(); }

  // Throws UnknownVariable / ValueOutOfRange.
  void validate(const Intervention& iv) const;
  void validate(const Context& ctx) const;

  CausalModel intervene(const Intervention& iv) const;

  World solve(const Context& ctx) const;
  World solve(const Context& ctx, const Intervention& iv) const;
  // Hot path: fixed[v] != kUnset pins v. No validation.
  void solve_into(std::span<const Value> exo, std::span<const Value> fixed, std::span<Value> out) const;

  // Every context, lexicographic over exogenous declaration order.
  std::vector<Context> all_contexts() const;
  Context context_from(const std::vector<std::pair<std::string, Value>>& named) const;
  Intervention intervention_from(const std::vector<std::pair<std::string, Value>>& named) const;

  // Endogenous variables whose value can be influenced by v (excluding v).
  std::vector<bool> descendants(VarIndex v) const;
  // Endogenous variables that can influence any of targets (including them).
  std::vector<bool> ancestors_of(std::span<const VarIndex> targets) const;

  // Free-form provenance notes; not part of model identity.
  const std::vector<std::string>& notes() const { return notes_; }
  CausalModel with_note(std::string note) const;

  friend bool operator==(const CausalModel& a, const CausalModel& b) {
    return a.sig_ == b.sig_ && a.equations_ == b.equations_;
  }

 private:
  CausalModel() = default;

  Signature sig_;
  std::vector<Expression> equations_;
  std::vector<VarIndex> order_;
  std::vector<std::vector<VarIndex>> parents_;
  std::vector<std::string> notes_;
};

}  // namespace causal
