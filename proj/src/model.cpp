#include "causal/model.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "causal/error.hpp"

namespace causal {

CyclicModel::CyclicModel(std::vector<std::string> cycle)
    : Error([&] {
        std::string msg = "model is not recursive; cycle:";
        for (const auto& n : cycle) msg += " " + n;
        return msg;
      }()),
      cycle_(std::move(cycle)) {}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      message_(message) {}

Range Range::of(std::vector<Value> values) {
  if (values.empty()) throw InvalidModel("range must be nonempty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i - 1] >= values[i]) throw InvalidModel("range values must be strictly increasing");
  }
  Range r;
  r.values_ = std::move(values);
  return r;
}

bool Range::contains(Value v) const { return std::binary_search(values_.begin(), values_.end(), v); }

bool is_valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  std::size_t i = 1;
  while (i < name.size() && (std::isalnum(static_cast<unsigned char>(name[i])) || name[i] == '_')) ++i;
  while (i < name.size() && name[i] == '\'') ++i;
  return i == name.size();
}

Signature::Signature(std::vector<VariableDecl> exogenous, std::vector<VariableDecl> endogenous)
    : exogenous_(std::move(exogenous)), endogenous_(std::move(endogenous)) {
  if (endogenous_.empty()) throw InvalidModel("a model needs at least one endogenous variable");
  std::vector<std::string> names;
  for (const auto* list : {&exogenous_, &endogenous_}) {
    for (const auto& d : *list) {
      if (!is_valid_identifier(d.name)) throw InvalidModel("invalid variable name '" + d.name + "'");
      if (d.range.size() == 0) throw InvalidModel("variable '" + d.name + "' has an empty range");
      names.push_back(d.name);
    }
  }
  std::sort(names.begin(), names.end());
  auto dup = std::adjacent_find(names.begin(), names.end());
  if (dup != names.end()) throw DuplicateDefinition(*dup);
}

std::optional<VarIndex> Signature::find_exogenous(std::string_view name) const {
  for (VarIndex i = 0; i < exogenous_.size(); ++i) {
    if (exogenous_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<VarIndex> Signature::find_endogenous(std::string_view name) const {
  for (VarIndex i = 0; i < endogenous_.size(); ++i) {
    if (endogenous_[i].name == name) return i;
  }
  return std::nullopt;
}

VarIndex Signature::endogenous_index(std::string_view name) const {
  auto i = find_endogenous(name);
  if (!i) throw UnknownVariable(std::string(name));
  return *i;
}

VarIndex Signature::exogenous_index(std::string_view name) const {
  auto i = find_exogenous(name);
  if (!i) throw UnknownVariable(std::string(name));
  return *i;
}

const std::string& Signature::name_of(VarRef ref) const {
  return ref.is_exogenous() ? exogenous_[ref.index].name : endogenous_[ref.index].name;
}

const Range& Signature::range_of(VarRef ref) const {
  return ref.is_exogenous() ? exogenous_[ref.index].range : endogenous_[ref.index].range;
}

Intervention::Intervention(std::vector<Setting> settings) : settings_(std::move(settings)) {
  std::sort(settings_.begin(), settings_.end(),
            [](const Setting& a, const Setting& b) { return a.var < b.var; });
  for (std::size_t i = 1; i < settings_.size(); ++i) {
    if (settings_[i - 1].var == settings_[i].var) throw InvalidModel("intervention sets a variable twice");
  }
}

RecursionCheck check_recursive(const Signature& sig, std::span<const Expression> equations) {
  const std::size_t n = sig.endogenous_count();
  std::vector<std::vector<VarIndex>> children(n);
  std::vector<std::size_t> indegree(n, 0);
  for (VarIndex v = 0; v < n; ++v) {
    std::vector<VarRef> refs;
    equations[v].collect_refs(refs);
    std::vector<VarIndex> parents;
    for (const VarRef& r : refs) {
      if (!r.is_exogenous()) parents.push_back(r.index);
    }
    std::sort(parents.begin(), parents.end());
    parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
    for (VarIndex p : parents) children[p].push_back(v);
    indegree[v] = parents.size();
  }

  RecursionCheck result;
  std::vector<bool> done(n, false);
  // Kahn's algorithm, always releasing the earliest declared ready variable.
  for (std::size_t step = 0; step < n; ++step) {
    std::optional<VarIndex> next;
    for (VarIndex v = 0; v < n; ++v) {
      if (!done[v] && indegree[v] == 0) {
        next = v;
        break;
      }
    }
    if (!next) break;
    done[*next] = true;
    result.order.push_back(*next);
    for (VarIndex c : children[*next]) --indegree[c];
  }
  if (result.order.size() == n) return result;

  // Walk parent links among the unresolved variables until one repeats.
  std::vector<std::vector<VarIndex>> parents(n);
  for (VarIndex p = 0; p < n; ++p) {
    for (VarIndex c : children[p]) parents[c].push_back(p);
  }
  VarIndex start = 0;
  while (done[start]) ++start;
  std::vector<VarIndex> path;
  std::vector<int> seen_at(n, -1);
  VarIndex cur = start;
  while (seen_at[cur] < 0) {
    seen_at[cur] = static_cast<int>(path.size());
    path.push_back(cur);
    VarIndex pick = cur;
    for (VarIndex p : parents[cur]) {
      if (!done[p]) {
        pick = p;
        break;
      }
    }
    cur = pick;
  }
  std::vector<VarIndex> cycle(path.begin() + seen_at[cur], path.end());
  std::reverse(cycle.begin(), cycle.end());
  auto smallest = std::min_element(cycle.begin(), cycle.end());
  std::rotate(cycle.begin(), smallest, cycle.end());
  result.cycle = std::move(cycle);
  result.order.clear();
  return result;
}

CausalModel CausalModel::create(Signature sig, std::vector<Expression> equations) {
  const std::size_t n = sig.endogenous_count();
  if (equations.size() != n) throw InvalidModel("expected exactly one equation per endogenous variable");
  for (VarIndex v = 0; v < n; ++v) {
    std::vector<VarRef> refs;
    equations[v].collect_refs(refs);
    for (const VarRef& r : refs) {
      const std::size_t bound = r.is_exogenous() ? sig.exogenous_count() : n;
      if (r.index >= bound) throw UnknownVariable("#" + std::to_string(r.index));
    }
    const auto& range = sig.endogenous_range(v);
    for (Value produced : equations[v].possible_values(sig)) {
      if (!range.contains(produced)) {
        throw ValueOutOfRange("equation for '" + sig.endogenous_name(v) + "' can produce " +
                              std::to_string(produced) + ", outside its range");
      }
    }
  }

  RecursionCheck rc = check_recursive(sig, equations);
  if (!rc.is_recursive()) {
    std::vector<std::string> names;
    for (VarIndex v : rc.cycle) names.push_back(sig.endogenous_name(v));
    throw CyclicModel(std::move(names));
  }

  CausalModel m;
  m.parents_.resize(n);
  for (VarIndex v = 0; v < n; ++v) {
    std::vector<VarRef> refs;
    equations[v].collect_refs(refs);
    for (const VarRef& r : refs) {
      if (!r.is_exogenous()) m.parents_[v].push_back(r.index);
    }
    std::sort(m.parents_[v].begin(), m.parents_[v].end());
    m.parents_[v].erase(std::unique(m.parents_[v].begin(), m.parents_[v].end()), m.parents_[v].end());
  }
  m.sig_ = std::move(sig);
  m.equations_ = std::move(equations);
  m.order_ = std::move(rc.order);
  return m;
}

void CausalModel::validate(const Intervention& iv) const {
  for (const Setting& s : iv.settings()) {
    if (s.var >= endogenous_count()) throw UnknownVariable("#" + std::to_string(s.var));
    if (!sig_.endogenous_range(s.var).contains(s.value)) {
      throw ValueOutOfRange("value " + std::to_string(s.value) + " is outside the range of '" +
                            sig_.endogenous_name(s.var) + "'");
    }
  }
}

void CausalModel::validate(const Context& ctx) const {
  if (ctx.values.size() != sig_.exogenous_count()) throw InvalidModel("context must assign every exogenous variable");
  for (VarIndex i = 0; i < ctx.values.size(); ++i) {
    if (!sig_.exogenous()[i].range.contains(ctx.values[i])) {
      throw ValueOutOfRange("value " + std::to_string(ctx.values[i]) + " is outside the range of '" +
                            sig_.exogenous()[i].name + "'");
    }
  }
}

CausalModel CausalModel::intervene(const Intervention& iv) const {
  validate(iv);
  CausalModel out = *this;
  for (const Setting& s : iv.settings()) {
    out.equations_[s.var] = Expression::constant(s.value);
    out.parents_[s.var].clear();
  }
  // Removing edges never breaks an existing topological order.
  return out;
}

void CausalModel::solve_into(std::span<const Value> exo, std::span<const Value> fixed, std::span<Value> out) const {
  for (VarIndex v : order_) {
    out[v] = fixed[v] != kUnset ? fixed[v] : equations_[v].eval(exo, out);
  }
}

World CausalModel::solve(const Context& ctx) const { return solve(ctx, Intervention{}); }

World CausalModel::solve(const Context& ctx, const Intervention& iv) const {
  validate(ctx);
  validate(iv);
  std::vector<Value> fixed(endogenous_count(), kUnset);
  for (const Setting& s : iv.settings()) fixed[s.var] = s.value;
  World w;
  w.values.assign(endogenous_count(), 0);
  solve_into(ctx.values, fixed, w.values);
  return w;
}

std::vector<Context> CausalModel::all_contexts() const {
  std::vector<const Range*> ranges;
  for (const auto& d : sig_.exogenous()) ranges.push_back(&d.range);
  std::vector<Context> out;
  for_each_assignment(ranges, [&](const std::vector<Value>& vals) {
    out.push_back(Context{vals});
    return true;
  });
  return out;
}

Context CausalModel::context_from(const std::vector<std::pair<std::string, Value>>& named) const {
  Context ctx;
  ctx.values.assign(sig_.exogenous_count(), kUnset);
  for (const auto& [name, value] : named) {
    VarIndex i = sig_.exogenous_index(name);
    if (ctx.values[i] != kUnset) throw DuplicateDefinition(name);
    ctx.values[i] = value;
  }
  for (VarIndex i = 0; i < ctx.values.size(); ++i) {
    if (ctx.values[i] == kUnset) throw InvalidModel("context leaves '" + sig_.exogenous()[i].name + "' unset");
  }
  validate(ctx);
  return ctx;
}

Intervention CausalModel::intervention_from(const std::vector<std::pair<std::string, Value>>& named) const {
  std::vector<Setting> settings;
  for (const auto& [name, value] : named) settings.push_back({sig_.endogenous_index(name), value});
  Intervention iv(std::move(settings));
  validate(iv);
  return iv;
}

std::vector<bool> CausalModel::descendants(VarIndex v) const {
  const std::size_t n = endogenous_count();
  std::vector<bool> out(n, false);
  // order_ is topological, so one forward sweep suffices.
  std::vector<bool> reach(n, false);
  reach[v] = true;
  for (VarIndex u : order_) {
    for (VarIndex p : parents_[u]) {
      if (reach[p]) {
        reach[u] = true;
        break;
      }
    }
  }
  for (VarIndex u = 0; u < n; ++u) out[u] = reach[u] && u != v;
  return out;
}

std::vector<bool> CausalModel::ancestors_of(std::span<const VarIndex> targets) const {
  std::vector<bool> mark(endogenous_count(), false);
  for (VarIndex t : targets) mark[t] = true;
  for (auto it = order_.rbegin(); it != order_.rend(); ++it) {
    if (!mark[*it]) continue;
    for (VarIndex p : parents_[*it]) mark[p] = true;
  }
  return mark;
}

CausalModel CausalModel::with_note(std::string note) const {
  CausalModel out = *this;
  out.notes_.push_back(std::move(note));
  return out;
}

}  // namespace causal
