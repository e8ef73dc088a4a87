#pragma once

#include <memory>
#include <span>
#include <vector>

#include "causal/model.hpp"

namespace causal {

// Causal formula: boolean combinations of primitive events X=x and of
// intervention-prefixed bodies [Y<-y](phi), where the body itself never
// contains another prefix.
class CausalFormula {
 public:
  enum class Kind : std::uint8_t { Event, Not, And, Or, Held };

  static CausalFormula event(VarIndex var, Value value);
  static CausalFormula negation(CausalFormula f);
  static CausalFormula conjunction(CausalFormula a, CausalFormula b);
  static CausalFormula disjunction(CausalFormula a, CausalFormula b);
  // Throws MalformedFormula when body already carries a prefix.
  static CausalFormula held(Intervention iv, CausalFormula body);
  // Nested And over the settings; needs at least one setting.
  static CausalFormula all_of(std::span<const Setting> settings);

  Kind kind() const;
  Setting event_setting() const;
  const CausalFormula& operand() const;  // Not, Held body
  const CausalFormula& lhs() const;
  const CausalFormula& rhs() const;
  const Intervention& intervention() const;

  bool intervention_free() const;
  // Truth in a world; the formula must be intervention-free.
  bool holds(const World& w) const;
  bool holds(std::span<const Value> world) const;

  // Throws UnknownVariable / ValueOutOfRange.
  void validate(const CausalModel& model) const;
  void collect_vars(std::vector<VarIndex>& out) const;

  // Re-express over another signature by variable name.
  CausalFormula rebind(const Signature& from, const Signature& to) const;

  friend bool operator==(const CausalFormula& a, const CausalFormula& b);

 private:
  struct Node;
  explicit CausalFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

bool eval_formula(const CausalModel& model, const Context& ctx, const CausalFormula& f);
// True iff f holds in every context of the model.
bool valid_in_model(const CausalModel& model, const CausalFormula& f);

}  // namespace causal
