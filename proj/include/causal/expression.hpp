#pragma once

#include <memory>
#include <set>
#include <span>
#include <vector>

#include "causal/types.hpp"

namespace causal {

// Immutable expression tree for structural equations. Boolean operators
// treat any nonzero value as true and produce 0/1.
class Expression {
 public:
  enum class Op : std::uint8_t {
    Const,
    Var,
    Not,
    And,
    Or,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Case,
  };

  struct CaseArm;

  Expression();  // the constant 0

  static Expression constant(Value v);
  static Expression var(VarRef ref);
  static Expression exo(VarIndex i) { return var(VarRef::exogenous(i)); }
  static Expression endo(VarIndex i) { return var(VarRef::endogenous(i)); }
  static Expression logical_not(Expression e);
  static Expression binary(Op op, Expression lhs, Expression rhs);
  // First matching guard wins; the fallback arm is mandatory.
  static Expression cases(std::vector<CaseArm> arms, Expression fallback);

  Op op() const;
  Value constant_value() const;
  VarRef var_ref() const;
  const Expression& operand() const;  // Not
  const Expression& lhs() const;
  const Expression& rhs() const;
  std::span<const CaseArm> arms() const;
  const Expression& fallback() const;

  Value eval(std::span<const Value> exo, std::span<const Value> endo) const;

  void collect_refs(std::vector<VarRef>& out) const;
  bool references(VarRef ref) const;

  // Every value the expression can produce when each variable ranges over
  // its declared range. Over-approximate for arithmetic.
  std::set<Value> possible_values(const Signature& sig) const;

  // Replace every endogenous reference i by mapping[i].
  Expression remap_endogenous(std::span<const VarIndex> mapping) const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Expression::CaseArm {
  Expression guard;
  Expression value;
  friend bool operator==(const CaseArm&, const CaseArm&) = default;
};

// Shorthands for building equations in code.
namespace expr {
inline Expression lit(Value v) { return Expression::constant(v); }
inline Expression lnot(Expression e) { return Expression::logical_not(std::move(e)); }
inline Expression eq(Expression a, Expression b) {
  return Expression::binary(Expression::Op::Eq, std::move(a), std::move(b));
}
inline Expression ne(Expression a, Expression b) {
  return Expression::binary(Expression::Op::Ne, std::move(a), std::move(b));
}
inline Expression land(Expression a, Expression b) {
  return Expression::binary(Expression::Op::And, std::move(a), std::move(b));
}
inline Expression lor(Expression a, Expression b) {
  return Expression::binary(Expression::Op::Or, std::move(a), std::move(b));
}
// Left-nested conjunction/disjunction; empty input yields 1 resp. 0.
Expression all_of(std::vector<Expression> terms);
Expression any_of(std::vector<Expression> terms);
}  // namespace expr

}  // namespace causal
