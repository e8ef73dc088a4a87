#include "causal/expression.hpp"

#include <algorithm>
#include <cassert>

#include "causal/error.hpp"

namespace causal {

struct Expression::Node {
  Op op = Op::Const;
  Value value = 0;
  VarRef ref{};
  std::vector<Expression> children;  // Not: 1; binary: 2; Case: fallback only
  std::vector<CaseArm> arms;
};

namespace {

bool truthy(Value v) { return v != 0; }

constexpr std::size_t kPossibleCap = 4096;

std::set<Value> combine(const std::set<Value>& a, const std::set<Value>& b, Expression::Op op) {
  std::set<Value> out;
  for (Value x : a) {
    for (Value y : b) {
      out.insert(op == Expression::Op::Add ? x + y : x - y);
      if (out.size() > kPossibleCap) {
        // Fall back to the full interval between the extremes.
        const Value lo = op == Expression::Op::Add ? *a.begin() + *b.begin() : *a.begin() - *b.rbegin();
        const Value hi = op == Expression::Op::Add ? *a.rbegin() + *b.rbegin() : *a.rbegin() - *b.begin();
        std::set<Value> interval;
        for (Value v = lo; v <= hi; ++v) interval.insert(v);
        return interval;
      }
    }
  }
  return out;
}

}  // namespace

Expression::Expression() : Expression(constant(0)) {}

Expression Expression::constant(Value v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return Expression(std::move(n));
}

Expression Expression::var(VarRef ref) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->ref = ref;
  return Expression(std::move(n));
}

Expression Expression::logical_not(Expression e) {
  auto n = std::make_shared<Node>();
  n->op = Op::Not;
  n->children.push_back(std::move(e));
  return Expression(std::move(n));
}

Expression Expression::binary(Op op, Expression lhs, Expression rhs) {
  assert(op != Op::Const && op != Op::Var && op != Op::Not && op != Op::Case);
  auto n = std::make_shared<Node>();
  n->op = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expression(std::move(n));
}

Expression Expression::cases(std::vector<CaseArm> arms, Expression fallback) {
  auto n = std::make_shared<Node>();
  n->op = Op::Case;
  n->arms = std::move(arms);
  n->children.push_back(std::move(fallback));
  return Expression(std::move(n));
}

Expression::Op Expression::op() const { return node_->op; }
Value Expression::constant_value() const { return node_->value; }
VarRef Expression::var_ref() const { return node_->ref; }
const Expression& Expression::operand() const { return node_->children[0]; }
const Expression& Expression::lhs() const { return node_->children[0]; }
const Expression& Expression::rhs() const { return node_->children[1]; }
std::span<const Expression::CaseArm> Expression::arms() const { return node_->arms; }
const Expression& Expression::fallback() const { return node_->children[0]; }

Value Expression::eval(std::span<const Value> exo, std::span<const Value> endo) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      return n.ref.is_exogenous() ? exo[n.ref.index] : endo[n.ref.index];
    case Op::Not:
      return truthy(n.children[0].eval(exo, endo)) ? 0 : 1;
    case Op::And:
      return truthy(n.children[0].eval(exo, endo)) && truthy(n.children[1].eval(exo, endo)) ? 1 : 0;
    case Op::Or:
      return truthy(n.children[0].eval(exo, endo)) || truthy(n.children[1].eval(exo, endo)) ? 1 : 0;
    case Op::Eq:
      return n.children[0].eval(exo, endo) == n.children[1].eval(exo, endo) ? 1 : 0;
    case Op::Ne:
      return n.children[0].eval(exo, endo) != n.children[1].eval(exo, endo) ? 1 : 0;
    case Op::Lt:
      return n.children[0].eval(exo, endo) < n.children[1].eval(exo, endo) ? 1 : 0;
    case Op::Le:
      return n.children[0].eval(exo, endo) <= n.children[1].eval(exo, endo) ? 1 : 0;
    case Op::Gt:
      return n.children[0].eval(exo, endo) > n.children[1].eval(exo, endo) ? 1 : 0;
    case Op::Ge:
      return n.children[0].eval(exo, endo) >= n.children[1].eval(exo, endo) ? 1 : 0;
    case Op::Add:
      return n.children[0].eval(exo, endo) + n.children[1].eval(exo, endo);
    case Op::Sub:
      return n.children[0].eval(exo, endo) - n.children[1].eval(exo, endo);
    case Op::Case:
      for (const CaseArm& arm : n.arms) {
        if (truthy(arm.guard.eval(exo, endo))) return arm.value.eval(exo, endo);
      }
      return n.children[0].eval(exo, endo);
  }
  return 0;
}

void Expression::collect_refs(std::vector<VarRef>& out) const {
  const Node& n = *node_;
  if (n.op == Op::Var) {
    out.push_back(n.ref);
    return;
  }
  for (const CaseArm& arm : n.arms) {
    arm.guard.collect_refs(out);
    arm.value.collect_refs(out);
  }
  for (const Expression& c : n.children) c.collect_refs(out);
}

bool Expression::references(VarRef ref) const {
  std::vector<VarRef> refs;
  collect_refs(refs);
  return std::find(refs.begin(), refs.end(), ref) != refs.end();
}

std::set<Value> Expression::possible_values(const Signature& sig) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const:
      return {n.value};
    case Op::Var: {
      const auto& vals = sig.range_of(n.ref).values();
      return {vals.begin(), vals.end()};
    }
    case Op::Add:
    case Op::Sub:
      return combine(n.children[0].possible_values(sig), n.children[1].possible_values(sig), n.op);
    case Op::Case: {
      std::set<Value> out = n.children[0].possible_values(sig);
      for (const CaseArm& arm : n.arms) {
        auto more = arm.value.possible_values(sig);
        out.insert(more.begin(), more.end());
      }
      return out;
    }
    default:
      return {0, 1};
  }
}

Expression Expression::remap_endogenous(std::span<const VarIndex> mapping) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const:
      return *this;
    case Op::Var:
      return n.ref.is_exogenous() ? *this : endo(mapping[n.ref.index]);
    case Op::Not:
      return logical_not(n.children[0].remap_endogenous(mapping));
    case Op::Case: {
      std::vector<CaseArm> arms;
      arms.reserve(n.arms.size());
      for (const CaseArm& arm : n.arms) {
        arms.push_back({arm.guard.remap_endogenous(mapping), arm.value.remap_endogenous(mapping)});
      }
      return cases(std::move(arms), n.children[0].remap_endogenous(mapping));
    }
    default:
      return binary(n.op, n.children[0].remap_endogenous(mapping), n.children[1].remap_endogenous(mapping));
  }
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.op != y.op) return false;
  switch (x.op) {
    case Expression::Op::Const:
      return x.value == y.value;
    case Expression::Op::Var:
      return x.ref == y.ref;
    default:
      return x.children == y.children && x.arms == y.arms;
  }
}

namespace expr {

Expression all_of(std::vector<Expression> terms) {
  if (terms.empty()) return lit(1);
  Expression acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = land(std::move(acc), terms[i]);
  return acc;
}

Expression any_of(std::vector<Expression> terms) {
  if (terms.empty()) return lit(0);
  Expression acc = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) acc = lor(std::move(acc), terms[i]);
  return acc;
}

}  // namespace expr

}  // namespace causal
