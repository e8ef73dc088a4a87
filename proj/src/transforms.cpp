#include "causal/transforms.hpp"

#include <algorithm>
#include <sstream>

#include "causal/error.hpp"

namespace causal {

namespace {

// Index in m_prime of every endogenous variable of m.
std::vector<VarIndex> embed(const CausalModel& m_prime, const CausalModel& m) {
  const Signature& big = m_prime.signature();
  const Signature& small = m.signature();
  if (big.exogenous() != small.exogenous()) {
    throw SignatureMismatch("the models have different exogenous variables");
  }
  std::vector<VarIndex> map;
  for (const VariableDecl& d : small.endogenous()) {
    auto idx = big.find_endogenous(d.name);
    if (!idx) throw SignatureMismatch("'" + d.name + "' is missing from the extension");
    if (!(big.endogenous_range(*idx) == d.range)) {
      throw SignatureMismatch("'" + d.name + "' has a different range in the extension");
    }
    map.push_back(*idx);
  }
  return map;
}

std::vector<NamedSetting> named(const Signature& sig, std::span<const Value> fixed) {
  std::vector<NamedSetting> out;
  for (VarIndex v = 0; v < fixed.size(); ++v) {
    if (fixed[v] != kUnset) out.emplace_back(sig.endogenous_name(v), fixed[v]);
  }
  return out;
}

}  // namespace

ExtensionReport is_conservative_extension(const CausalModel& m_prime, const CausalModel& m) {
  const std::vector<VarIndex> map = embed(m_prime, m);
  const std::size_t n = m.endogenous_count();
  const std::size_t n_prime = m_prime.endogenous_count();
  std::vector<Value> fixed(n), fixed_prime(n_prime), out(n), out_prime(n_prime);
  ExtensionReport report;
  for (const Context& ctx : m.all_contexts()) {
    for (VarIndex x = 0; x < n; ++x) {
      std::vector<VarIndex> others;
      std::vector<const Range*> ranges;
      for (VarIndex v = 0; v < n; ++v) {
        if (v == x) continue;
        others.push_back(v);
        ranges.push_back(&m.signature().endogenous_range(v));
      }
      for_each_assignment(ranges, [&](const std::vector<Value>& vals) {
        std::fill(fixed.begin(), fixed.end(), kUnset);
        std::fill(fixed_prime.begin(), fixed_prime.end(), kUnset);
        for (std::size_t i = 0; i < others.size(); ++i) {
          fixed[others[i]] = vals[i];
          fixed_prime[map[others[i]]] = vals[i];
        }
        m.solve_into(ctx.values, fixed, out);
        m_prime.solve_into(ctx.values, fixed_prime, out_prime);
        if (out[x] == out_prime[map[x]]) return true;
        report.is_conservative = false;
        report.counterexample = ExtensionCounterexample{ctx, m.signature().endogenous_name(x),
                                                        named(m.signature(), fixed), out[x], out_prime[map[x]]};
        return false;
      });
      if (!report.is_conservative) return report;
    }
  }
  return report;
}

ExtensionReport is_conservative_extension_extended(const ExtendedCausalModel& m_prime,
                                                   const ExtendedCausalModel& m) {
  ExtensionReport report = is_conservative_extension(m_prime.base, m.base);
  if (!report.is_conservative) return report;
  const std::vector<VarIndex> map = embed(m_prime.base, m.base);
  const std::size_t n = m.base.endogenous_count();
  // Each variable is either left alone (kUnset) or set to one of its values.
  std::vector<Range> choices;
  for (VarIndex v = 0; v < n; ++v) {
    std::vector<Value> vals{kUnset};
    const auto& r = m.base.signature().endogenous_range(v).values();
    vals.insert(vals.end(), r.begin(), r.end());
    choices.push_back(Range::of(std::move(vals)));
  }
  std::vector<const Range*> ranges;
  for (const Range& r : choices) ranges.push_back(&r);

  std::vector<Value> fixed_prime(m_prime.base.endogenous_count());
  World s{std::vector<Value>(n)};
  World s_prime{std::vector<Value>(m_prime.base.endogenous_count())};
  for (const Context& ctx : m.base.all_contexts()) {
    const World actual = m.base.solve(ctx);
    const World actual_prime = m_prime.base.solve(ctx);
    for_each_assignment(ranges, [&](const std::vector<Value>& fixed) {
      std::fill(fixed_prime.begin(), fixed_prime.end(), kUnset);
      for (VarIndex v = 0; v < n; ++v) fixed_prime[map[v]] = fixed[v];
      m.base.solve_into(ctx.values, fixed, s.values);
      m_prime.base.solve_into(ctx.values, fixed_prime, s_prime.values);
      const bool base = m.order.at_least_as_normal(s, actual);
      const bool ext = m_prime.order.at_least_as_normal(s_prime, actual_prime);
      if (base == ext) return true;
      report.is_conservative = false;
      report.normality_counterexample = NormalityCounterexample{ctx, named(m.base.signature(), fixed), base, ext};
      return false;
    });
    if (!report.is_conservative) return report;
  }
  return report;
}

CausalFormula random_formula(const CausalModel& m, std::mt19937_64& rng, int max_depth) {
  const Signature& sig = m.signature();
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto random_event = [&] {
    const auto v = static_cast<VarIndex>(pick(sig.endogenous_count()));
    const auto& vals = sig.endogenous_range(v).values();
    return CausalFormula::event(v, vals[pick(vals.size())]);
  };
  auto body = [&](auto& self, int depth) -> CausalFormula {
    if (depth <= 0 || pick(3) == 0) return random_event();
    switch (pick(3)) {
      case 0:
        return CausalFormula::negation(self(self, depth - 1));
      case 1: {
        CausalFormula l = self(self, depth - 1);
        return CausalFormula::conjunction(std::move(l), self(self, depth - 1));
      }
      default: {
        CausalFormula l = self(self, depth - 1);
        return CausalFormula::disjunction(std::move(l), self(self, depth - 1));
      }
    }
  };
  auto clause = [&] {
    CausalFormula b = body(body, max_depth);
    if (pick(4) == 0) return b;
    std::vector<Setting> settings;
    for (VarIndex v = 0; v < sig.endogenous_count(); ++v) {
      if (pick(2) == 0) continue;
      const auto& vals = sig.endogenous_range(v).values();
      settings.push_back({v, vals[pick(vals.size())]});
    }
    return CausalFormula::held(Intervention(std::move(settings)), std::move(b));
  };
  // Arguments are drawn in sequence so a seed gives the same formula everywhere.
  switch (pick(4)) {
    case 0: {
      CausalFormula l = clause();
      return CausalFormula::conjunction(std::move(l), clause());
    }
    case 1: {
      CausalFormula l = clause();
      return CausalFormula::disjunction(std::move(l), CausalFormula::negation(clause()));
    }
    default:
      return clause();
  }
}

FormulaAgreement find_formula_disagreement(const CausalModel& m_prime, const CausalModel& m,
                                           const std::vector<CausalFormula>& formulas) {
  embed(m_prime, m);
  FormulaAgreement result;
  const std::vector<Context> contexts = m.all_contexts();
  for (const CausalFormula& f : formulas) {
    ++result.formulas_checked;
    const CausalFormula f_prime = f.rebind(m.signature(), m_prime.signature());
    for (const Context& ctx : contexts) {
      const bool base = eval_formula(m, ctx, f);
      if (base != eval_formula(m_prime, ctx, f_prime)) {
        result.agree = false;
        result.disagreement = FormulaDisagreement{f, ctx, base};
        return result;
      }
    }
  }
  return result;
}

FormulaAgreement check_formula_agreement(const CausalModel& m_prime, const CausalModel& m, std::size_t samples,
                                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CausalFormula> formulas;
  formulas.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) formulas.push_back(random_formula(m, rng, 3));
  return find_formula_disagreement(m_prime, m, formulas);
}

CausalFormula counterexample_formula(const CausalModel& m, const ExtensionCounterexample& cex) {
  const VarIndex x = m.signature().endogenous_index(cex.variable);
  return CausalFormula::held(m.intervention_from(cex.setting), CausalFormula::event(x, cex.value_in_base));
}

bool deviates(const CausalModel& m, const Context& ctx, const World& s, VarIndex v) {
  return m.equation(v).eval(ctx.values, s.values) != s[v];
}

std::vector<DeviationRecord> deviating_variables(const CausalModel& m, const Context& ctx, const World& s) {
  m.validate(ctx);
  if (s.values.size() != m.endogenous_count()) throw InvalidModel("world does not cover every endogenous variable");
  std::vector<DeviationRecord> out;
  for (VarIndex v = 0; v < m.endogenous_count(); ++v) {
    const Value expected = m.equation(v).eval(ctx.values, s.values);
    if (expected != s[v]) out.push_back({s, m.signature().endogenous_name(v), expected, s[v]});
  }
  return out;
}

RespectReport respects_equations(const ExtendedCausalModel& m, const Context& ctx,
                                 const std::vector<VarIndex>& vars) {
  m.base.validate(ctx);
  for (VarIndex v : vars) {
    if (v >= m.base.endogenous_count()) throw UnknownVariable("#" + std::to_string(v));
  }
  const World actual = m.base.solve(ctx);
  std::vector<const Range*> ranges;
  for (const VariableDecl& d : m.base.signature().endogenous()) ranges.push_back(&d.range);
  RespectReport report;
  for_each_assignment(ranges, [&](const std::vector<Value>& vals) {
    World s{vals};
    const bool deviant =
        std::any_of(vars.begin(), vars.end(), [&](VarIndex v) { return deviates(m.base, ctx, s, v); });
    if (!deviant || !m.order.at_least_as_normal(s, actual)) return true;
    report.respects = false;
    report.violating_world = std::move(s);
    return false;
  });
  return report;
}

NormalityOrder normality_from_respect(const CausalModel& m, const Context& ctx, const std::vector<VarIndex>& vars) {
  m.validate(ctx);
  for (VarIndex v : vars) {
    if (v >= m.endogenous_count()) throw UnknownVariable("#" + std::to_string(v));
  }
  if (vars.empty()) return NormalityOrder::flat();
  return NormalityOrder::ranked([m, ctx, vars](const World& s) -> long {
    for (VarIndex v : vars) {
      if (deviates(m, ctx, s, v)) return 1;
    }
    return 0;
  });
}

namespace {

std::string describe(const Signature& sig, const Context& ctx) {
  std::ostringstream os;
  for (VarIndex i = 0; i < ctx.values.size(); ++i) {
    if (i) os << ", ";
    os << sig.exogenous()[i].name << "=" << ctx.values[i];
  }
  return os.str();
}

}  // namespace

CausalModel kill_witness(const CausalModel& m, const Context& ctx, const Setting& cause, const Setting& effect,
                         const Witness& w, const std::string& fresh_name) {
  using namespace expr;
  const Signature& sig = m.signature();
  m.validate(ctx);
  const CandidateCause c = CandidateCause::of({cause});
  const CausalFormula phi = CausalFormula::event(effect.var, effect.value);
  if (w.alternative.size() != 1) throw NotAWitness("a single-conjunct cause needs exactly one alternative value");
  if (!check_ac1(m, ctx, c, phi) || !check_ac2a(m, ctx, c, phi, w, RuleVariant::Original) ||
      !check_ac2b(m, ctx, c, phi, w, RuleVariant::Original)) {
    throw NotAWitness("not a witness under the original rule");
  }
  const World actual = m.solve(ctx);
  if (std::all_of(w.contingency.begin(), w.contingency.end(),
                  [&](const Setting& s) { return actual[s.var] == s.value; })) {
    throw WitnessEqualsActual();
  }
  const std::vector<bool> downstream = m.descendants(effect.var);
  for (const Setting& s : w.contingency) {
    if (s.var == effect.var || downstream[s.var]) {
      throw NotAWitness("the contingency sets '" + sig.endogenous_name(s.var) + "', which lies downstream of '" +
                        sig.endogenous_name(effect.var) + "'");
    }
  }
  if (sig.find_endogenous(fresh_name) || sig.find_exogenous(fresh_name)) throw DuplicateDefinition(fresh_name);

  const Value x = cause.value;
  const Value x_alt = w.alternative[0];
  const Range& y_range = sig.endogenous_range(effect.var);
  Value y_other = effect.value;
  for (Value v : y_range.values()) {
    if (v != effect.value) {
      y_other = v;
      break;
    }
  }
  if (y_other == effect.value) throw PreconditionViolated("the effect variable has a single value");

  auto solve_with = [&](Value xv) {
    std::vector<Setting> settings = w.contingency;
    settings.push_back({cause.var, xv});
    return m.solve(ctx, Intervention(std::move(settings)));
  };
  const World z_x = solve_with(x);
  const World z_alt = solve_with(x_alt);

  std::vector<bool> in_w(m.endogenous_count(), false);
  for (const Setting& s : w.contingency) in_w[s.var] = true;
  std::vector<VarIndex> z_vars;
  for (VarIndex v = 0; v < m.endogenous_count(); ++v) {
    if (v != effect.var && v != cause.var && !in_w[v] && !downstream[v]) z_vars.push_back(v);
  }

  const VarIndex nw = static_cast<VarIndex>(m.endogenous_count());
  std::vector<Expression> w_terms;
  for (const Setting& s : w.contingency) w_terms.push_back(eq(Expression::endo(s.var), lit(s.value)));
  auto guard = [&](Value xv, const World& z, Value nw_value) {
    std::vector<Expression> terms{eq(Expression::endo(cause.var), lit(xv))};
    terms.insert(terms.end(), w_terms.begin(), w_terms.end());
    for (VarIndex v : z_vars) terms.push_back(eq(Expression::endo(v), lit(z[v])));
    terms.push_back(eq(Expression::endo(nw), lit(nw_value)));
    return all_of(std::move(terms));
  };

  std::vector<Expression> equations = m.equations();
  std::vector<Expression> nw_terms{eq(Expression::endo(cause.var), lit(x))};
  nw_terms.insert(nw_terms.end(), w_terms.begin(), w_terms.end());
  equations[effect.var] = Expression::cases({{guard(x, z_x, 0), lit(y_other)}, {guard(x_alt, z_alt, 1), lit(effect.value)}},
                                            equations[effect.var]);
  equations.push_back(all_of(std::move(nw_terms)));

  std::vector<VariableDecl> endo = sig.endogenous();
  endo.push_back({fresh_name, Range::binary()});
  CausalModel out = CausalModel::create(Signature(sig.exogenous(), std::move(endo)), std::move(equations));
  for (const std::string& note : m.notes()) out = out.with_note(note);

  std::ostringstream note;
  note << fresh_name << " kills witness {";
  for (std::size_t i = 0; i < w.contingency.size(); ++i) {
    if (i) note << ", ";
    note << sig.endogenous_name(w.contingency[i].var) << "=" << w.contingency[i].value;
  }
  note << "}, " << sig.endogenous_name(cause.var) << "'=" << x_alt << " for " << sig.endogenous_name(cause.var)
       << "=" << x << " causing " << sig.endogenous_name(effect.var) << "=" << effect.value << " in context "
       << describe(sig, ctx);
  return out.with_note(note.str());
}

KillResult kill_all_witnesses(const CausalModel& m, const Context& ctx, const Setting& cause,
                              const Setting& effect, std::size_t max_iterations) {
  const CandidateCause c = CandidateCause::of({cause});
  const CausalFormula phi = CausalFormula::event(effect.var, effect.value);
  if (!is_actual_cause(m, ctx, c, phi, RuleVariant::Original).is_cause) {
    throw PreconditionViolated("not a cause under the original rule");
  }
  if (is_actual_cause(m, ctx, c, phi, RuleVariant::Updated).is_cause) {
    throw PreconditionViolated("already a cause under the updated rule, so witness killing cannot remove it");
  }
  KillResult result{m, {}};
  std::size_t next_name = 1;
  while (true) {
    SearchOptions first_only;
    first_only.collect_all = false;
    Verdict v = is_actual_cause(result.model, ctx, c, phi, RuleVariant::Original, first_only);
    if (!v.is_cause) return result;
    if (result.killed.size() >= max_iterations) {
      throw Error("witness killing did not finish within " + std::to_string(max_iterations) + " iterations");
    }
    std::string name;
    do {
      name = "NW" + std::to_string(next_name++);
    } while (result.model.signature().find_endogenous(name) || result.model.signature().find_exogenous(name));
    result.model = kill_witness(result.model, ctx, cause, effect, v.witnesses.front(), name);
    result.killed.push_back(v.witnesses.front());
  }
}

StabilityModel build_stability_model(int n) {
  using namespace expr;
  if (n < 0) throw InvalidModel("stability models are indexed from 0");
  const int xs = (n + 1) / 2;  // X1..X_xs
  const int ys = n / 2;        // Y1..Y_ys
  std::vector<VariableDecl> endo{{"A", Range::binary()}, {"B", Range::binary()}};
  std::vector<int> x_index(xs + 1), y_index(ys + 1);
  for (int j = 1; j <= xs; ++j) {
    x_index[j] = static_cast<int>(endo.size());
    endo.push_back({"X" + std::to_string(j), Range::binary()});
    if (j <= ys) {
      y_index[j] = static_cast<int>(endo.size());
      endo.push_back({"Y" + std::to_string(j), Range::binary()});
    }
  }
  const Expression u = Expression::exo(0);
  const Expression a = Expression::endo(0);
  auto X = [&](int j) { return Expression::endo(static_cast<VarIndex>(x_index[j])); };
  auto Y = [&](int j) { return Expression::endo(static_cast<VarIndex>(y_index[j])); };

  std::vector<Expression> eqs(endo.size());
  eqs[0] = u;
  if (n == 0) {
    eqs[1] = u;
  } else {
    // Pairs (X_j, Y_j) exist for j <= ys; when n is odd X_xs stands alone.
    std::vector<Expression> both_zero, differ;
    for (int j = 1; j <= ys; ++j) {
      both_zero.push_back(land(eq(X(j), lit(0)), eq(Y(j), lit(0))));
      differ.push_back(ne(X(j), Y(j)));
    }
    if (n % 2 == 1) both_zero.insert(both_zero.begin(), eq(X(xs), lit(0)));
    Expression blocked = land(eq(a, lit(0)), any_of(std::move(both_zero)));
    if (!differ.empty()) blocked = lor(std::move(blocked), land(eq(a, lit(1)), any_of(std::move(differ))));
    eqs[1] = land(u, lnot(blocked));
  }
  for (int j = 1; j <= xs; ++j) eqs[x_index[j]] = u;
  for (int j = 1; j <= ys; ++j) eqs[y_index[j]] = X(j);

  Signature sig({{"U", Range::binary()}}, std::move(endo));
  return StabilityModel{CausalModel::create(std::move(sig), std::move(eqs)), Context{{0}}, Context{{1}}};
}

}  // namespace causal
