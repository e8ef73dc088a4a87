#include "causal/formula.hpp"

#include <cassert>

#include "causal/error.hpp"

namespace causal {

struct CausalFormula::Node {
  Kind kind = Kind::Event;
  Setting event{};
  Intervention intervention;
  std::vector<CausalFormula> children;
};

CausalFormula CausalFormula::event(VarIndex var, Value value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Event;
  n->event = {var, value};
  return CausalFormula(std::move(n));
}

CausalFormula CausalFormula::negation(CausalFormula f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children.push_back(std::move(f));
  return CausalFormula(std::move(n));
}

CausalFormula CausalFormula::conjunction(CausalFormula a, CausalFormula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = {std::move(a), std::move(b)};
  return CausalFormula(std::move(n));
}

CausalFormula CausalFormula::disjunction(CausalFormula a, CausalFormula b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = {std::move(a), std::move(b)};
  return CausalFormula(std::move(n));
}

CausalFormula CausalFormula::held(Intervention iv, CausalFormula body) {
  if (!body.intervention_free()) throw MalformedFormula("intervention prefixes cannot be nested");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Held;
  n->intervention = std::move(iv);
  n->children.push_back(std::move(body));
  return CausalFormula(std::move(n));
}

CausalFormula CausalFormula::all_of(std::span<const Setting> settings) {
  if (settings.empty()) throw MalformedFormula("empty conjunction of events");
  CausalFormula acc = event(settings[0].var, settings[0].value);
  for (std::size_t i = 1; i < settings.size(); ++i) {
    acc = conjunction(std::move(acc), event(settings[i].var, settings[i].value));
  }
  return acc;
}

CausalFormula::Kind CausalFormula::kind() const { return node_->kind; }
Setting CausalFormula::event_setting() const { return node_->event; }
const CausalFormula& CausalFormula::operand() const { return node_->children[0]; }
const CausalFormula& CausalFormula::lhs() const { return node_->children[0]; }
const CausalFormula& CausalFormula::rhs() const { return node_->children[1]; }
const Intervention& CausalFormula::intervention() const { return node_->intervention; }

bool CausalFormula::intervention_free() const {
  if (node_->kind == Kind::Held) return false;
  for (const auto& c : node_->children) {
    if (!c.intervention_free()) return false;
  }
  return true;
}

bool CausalFormula::holds(std::span<const Value> world) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Event:
      return world[n.event.var] == n.event.value;
    case Kind::Not:
      return !n.children[0].holds(world);
    case Kind::And:
      return n.children[0].holds(world) && n.children[1].holds(world);
    case Kind::Or:
      return n.children[0].holds(world) || n.children[1].holds(world);
    case Kind::Held:
      break;
  }
  assert(false && "holds() needs an intervention-free formula");
  return false;
}

bool CausalFormula::holds(const World& w) const { return holds(std::span<const Value>(w.values)); }

void CausalFormula::validate(const CausalModel& model) const {
  const Node& n = *node_;
  const auto& sig = model.signature();
  auto check = [&](const Setting& s) {
    if (s.var >= sig.endogenous_count()) throw UnknownVariable("#" + std::to_string(s.var));
    if (!sig.endogenous_range(s.var).contains(s.value)) {
      throw ValueOutOfRange("value " + std::to_string(s.value) + " is outside the range of '" +
                            sig.endogenous_name(s.var) + "'");
    }
  };
  if (n.kind == Kind::Event) check(n.event);
  if (n.kind == Kind::Held) {
    for (const Setting& s : n.intervention.settings()) check(s);
  }
  for (const auto& c : n.children) c.validate(model);
}

void CausalFormula::collect_vars(std::vector<VarIndex>& out) const {
  const Node& n = *node_;
  if (n.kind == Kind::Event) out.push_back(n.event.var);
  if (n.kind == Kind::Held) {
    for (const Setting& s : n.intervention.settings()) out.push_back(s.var);
  }
  for (const auto& c : n.children) c.collect_vars(out);
}

CausalFormula CausalFormula::rebind(const Signature& from, const Signature& to) const {
  const Node& n = *node_;
  auto map = [&](VarIndex v) { return to.endogenous_index(from.endogenous_name(v)); };
  switch (n.kind) {
    case Kind::Event:
      return event(map(n.event.var), n.event.value);
    case Kind::Not:
      return negation(n.children[0].rebind(from, to));
    case Kind::And:
      return conjunction(n.children[0].rebind(from, to), n.children[1].rebind(from, to));
    case Kind::Or:
      return disjunction(n.children[0].rebind(from, to), n.children[1].rebind(from, to));
    case Kind::Held: {
      std::vector<Setting> settings;
      for (const Setting& s : n.intervention.settings()) settings.push_back({map(s.var), s.value});
      return held(Intervention(std::move(settings)), n.children[0].rebind(from, to));
    }
  }
  return *this;
}

bool operator==(const CausalFormula& a, const CausalFormula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind) return false;
  if (x.kind == CausalFormula::Kind::Event) return x.event == y.event;
  if (x.kind == CausalFormula::Kind::Held && !(x.intervention == y.intervention)) return false;
  return x.children == y.children;
}

namespace {

bool eval_with_actual(const CausalModel& model, const Context& ctx, const CausalFormula& f, const World& actual) {
  switch (f.kind()) {
    case CausalFormula::Kind::Event:
      return actual[f.event_setting().var] == f.event_setting().value;
    case CausalFormula::Kind::Not:
      return !eval_with_actual(model, ctx, f.operand(), actual);
    case CausalFormula::Kind::And:
      return eval_with_actual(model, ctx, f.lhs(), actual) && eval_with_actual(model, ctx, f.rhs(), actual);
    case CausalFormula::Kind::Or:
      return eval_with_actual(model, ctx, f.lhs(), actual) || eval_with_actual(model, ctx, f.rhs(), actual);
    case CausalFormula::Kind::Held:
      return f.operand().holds(model.solve(ctx, f.intervention()));
  }
  return false;
}

}  // namespace

bool eval_formula(const CausalModel& model, const Context& ctx, const CausalFormula& f) {
  f.validate(model);
  return eval_with_actual(model, ctx, f, model.solve(ctx));
}

bool valid_in_model(const CausalModel& model, const CausalFormula& f) {
  f.validate(model);
  for (const Context& ctx : model.all_contexts()) {
    if (!eval_with_actual(model, ctx, f, model.solve(ctx))) return false;
  }
  return true;
}

}  // namespace causal
