#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "causal/causality.hpp"
#include "causal/formula.hpp"
#include "causal/model.hpp"
#include "causal/normality.hpp"

namespace causal {

// The normality block of a model file.
struct NormalitySpec {
  enum class Kind { RespectEquations, Ranks };
  Kind kind = Kind::Ranks;
  // respect_equations(context) { vars }
  std::string context;
  std::vector<std::string> variables;
  // ranks { guard -> rank; ...; default -> rank }, evaluated over the world
  std::vector<Expression::CaseArm> rules;
  Expression fallback;
};

struct ModelDocument {
  std::string name;
  CausalModel model;
  std::vector<std::pair<std::string, Context>> contexts;
  std::optional<NormalitySpec> normality;

  // Throws UnknownContext.
  const Context& context(std::string_view name) const;
  // The model with its normality order; flat when the file declares none.
  ExtendedCausalModel extended() const;
};

// Throws ParseError, UnknownVariable, UnknownContext, DuplicateDefinition,
// ValueOutOfRange, InvalidModel or CyclicModel.
ModelDocument parse_model(std::string_view text);
ModelDocument load_model_file(const std::string& path);
// Canonical text; parse_model(print_model(d)) yields the same model.
std::string print_model(const ModelDocument& doc);

std::string format_expression(const Expression& e, const Signature& sig);

// `[A<-1, C<-0](D=0)`, `X=1 & !(Y=0)`, `X!=1`. Only endogenous variables.
CausalFormula parse_formula(std::string_view text, const CausalModel& model);
std::string format_formula(const CausalFormula& f, const Signature& sig);

// A conjunction of events such as `B=1 & C=1`.
CandidateCause parse_cause(std::string_view text, const CausalModel& model);
std::string format_cause(const CandidateCause& c, const Signature& sig);
std::string format_settings(std::span<const Setting> settings, const Signature& sig);

}  // namespace causal
