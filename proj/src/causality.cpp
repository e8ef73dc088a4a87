#include "causal/causality.hpp"

#include <algorithm>

#include "causal/error.hpp"

namespace causal {

std::string_view to_string(RuleVariant v) {
  switch (v) {
    case RuleVariant::Updated:
      return "updated";
    case RuleVariant::Original:
      return "original";
    case RuleVariant::Extended:
      return "extended";
  }
  return "?";
}

std::string_view to_string(FailedCondition c) {
  switch (c) {
    case FailedCondition::AC1:
      return "AC1";
    case FailedCondition::AC2a:
      return "AC2(a)";
    case FailedCondition::AC2aPlus:
      return "AC2(a+)";
    case FailedCondition::AC2b:
      return "AC2(b)";
    case FailedCondition::AC2bPrime:
      return "AC2(b')";
    case FailedCondition::AC3:
      return "AC3";
  }
  return "?";
}

RuleVariant parse_variant(std::string_view text) {
  if (text == "updated") return RuleVariant::Updated;
  if (text == "original") return RuleVariant::Original;
  if (text == "extended") return RuleVariant::Extended;
  throw Error("unknown rule variant '" + std::string(text) + "' (expected original, updated or extended)");
}

CandidateCause CandidateCause::of(std::vector<Setting> conjuncts) {
  if (conjuncts.empty()) throw InvalidModel("a candidate cause needs at least one conjunct");
  std::sort(conjuncts.begin(), conjuncts.end(), [](const Setting& a, const Setting& b) { return a.var < b.var; });
  for (std::size_t i = 1; i < conjuncts.size(); ++i) {
    if (conjuncts[i - 1].var == conjuncts[i].var) throw InvalidModel("a candidate cause repeats a variable");
  }
  return CandidateCause{std::move(conjuncts)};
}

namespace {

void validate_settings(const CausalModel& model, std::span<const Setting> settings) {
  model.validate(Intervention(std::vector<Setting>(settings.begin(), settings.end())));
}

void validate_cause(const CausalModel& model, const CandidateCause& cause) {
  if (cause.conjuncts.empty()) throw InvalidModel("a candidate cause needs at least one conjunct");
  validate_settings(model, cause.conjuncts);
}

void validate_phi(const CausalModel& model, const CausalFormula& phi) {
  if (!phi.intervention_free()) throw MalformedPhi();
  phi.validate(model);
}

void validate_witness(const CausalModel& model, const CandidateCause& cause, const Witness& w) {
  if (w.alternative.size() != cause.size()) throw InvalidModel("witness alternative does not match the cause");
  validate_settings(model, w.contingency);
  for (const Setting& s : w.contingency) {
    for (const Setting& x : cause.conjuncts) {
      if (s.var == x.var) throw InvalidModel("witness contingency overlaps the cause");
    }
  }
  for (std::size_t i = 0; i < cause.size(); ++i) {
    if (!model.signature().endogenous_range(cause.conjuncts[i].var).contains(w.alternative[i])) {
      throw ValueOutOfRange("witness alternative value outside range");
    }
  }
}

struct Ac2Outcome {
  std::vector<Witness> witnesses;
  bool saw_ac2a = false;       // some (W, w, x') made phi false
  bool saw_ac2a_plus = false;  // ... in a world at least as normal as the actual one
};

// One query context: model, context, effect and rule variant, with a shared
// solve budget. All AC checks go through here.
class Searcher {
 public:
  Searcher(const CausalModel& model, const NormalityOrder* order, const Context& ctx, const CausalFormula& phi,
           RuleVariant variant, const SearchOptions& options)
      : model_(model),
        order_(order),
        ctx_(ctx),
        phi_(phi),
        variant_(variant),
        options_(options),
        n_(model.endogenous_count()),
        fixed_(n_, kUnset),
        buffer_(n_, 0) {
    if (variant_ == RuleVariant::Extended && order_ == nullptr) throw MissingNormalityOrder();
    model_.validate(ctx_);
    validate_phi(model_, phi_);
    actual_ = model_.solve(ctx_);
    std::vector<VarIndex> phi_vars;
    phi_.collect_vars(phi_vars);
    relevant_ = model_.ancestors_of(phi_vars);
  }

  const World& actual() const { return actual_; }
  const std::vector<bool>& relevant() const { return relevant_; }

  bool ac1(const CandidateCause& cause) const {
    for (const Setting& s : cause.conjuncts) {
      if (actual_[s.var] != s.value) return false;
    }
    return phi_.holds(actual_);
  }

  // Plain AC2(a); the world reached is left in buffer_.
  bool ac2a(const CandidateCause& cause, std::span<const Setting> contingency, std::span<const Value> alternative) {
    clear_fixed();
    for (std::size_t i = 0; i < cause.size(); ++i) fixed_[cause.conjuncts[i].var] = alternative[i];
    for (const Setting& s : contingency) fixed_[s.var] = s.value;
    run();
    return !phi_.holds(buffer_);
  }

  bool normal_enough() const { return order_->at_least_as_normal(World{buffer_}, actual_); }

  bool ac2b(const CandidateCause& cause, std::span<const Setting> contingency, RuleVariant rule) {
    std::vector<bool> in_cause(n_, false);
    for (const Setting& s : cause.conjuncts) in_cause[s.var] = true;
    std::vector<bool> in_w(n_, false);
    for (const Setting& s : contingency) in_w[s.var] = true;

    // Toggleable variables: relevant ones outside X. W members toggle
    // between w and "follow the equations" (updated rule only); Z members
    // between the actual value and "follow the equations".
    std::vector<Setting> toggles;
    for (const Setting& s : contingency) {
      if (relevant_[s.var] && rule != RuleVariant::Original) toggles.push_back(s);
    }
    for (VarIndex v = 0; v < n_; ++v) {
      if (relevant_[v] && !in_cause[v] && !in_w[v]) toggles.push_back({v, actual_[v]});
    }
    if (toggles.size() >= 63) throw SearchBudgetExceeded(options_.budget);
    const std::uint64_t subsets = std::uint64_t{1} << toggles.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
      clear_fixed();
      for (const Setting& s : cause.conjuncts) fixed_[s.var] = s.value;
      if (rule == RuleVariant::Original) {
        for (const Setting& s : contingency) fixed_[s.var] = s.value;
      }
      for (std::size_t i = 0; i < toggles.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) fixed_[toggles[i].var] = toggles[i].value;
      }
      run();
      if (!phi_.holds(buffer_)) return false;
    }
    return true;
  }

  // Enumerates witnesses in canonical order. unpruned forces W⃗ to range over
  // every variable, which matters whenever worlds are compared.
  Ac2Outcome search_ac2(const CandidateCause& cause, bool collect_all, RuleVariant rule, bool unpruned) {
    Ac2Outcome out;
    std::vector<bool> in_cause(n_, false);
    for (const Setting& s : cause.conjuncts) in_cause[s.var] = true;
    std::vector<VarIndex> others;
    for (VarIndex v = 0; v < n_; ++v) {
      if (!in_cause[v] && (unpruned || relevant_[v])) others.push_back(v);
    }
    std::vector<const Range*> cause_ranges;
    std::vector<Value> actual_x;
    for (const Setting& s : cause.conjuncts) {
      cause_ranges.push_back(&model_.signature().endogenous_range(s.var));
      actual_x.push_back(s.value);
    }
    const bool need_normality = rule == RuleVariant::Extended;

    for (std::size_t k = 0; k <= others.size(); ++k) {
      std::vector<std::size_t> pick(k);
      for (std::size_t i = 0; i < k; ++i) pick[i] = i;
      while (true) {
        std::vector<const Range*> w_ranges;
        std::vector<Setting> contingency(k);
        for (std::size_t i = 0; i < k; ++i) {
          contingency[i].var = others[pick[i]];
          w_ranges.push_back(&model_.signature().endogenous_range(others[pick[i]]));
        }
        bool stop = !for_each_assignment(w_ranges, [&](const std::vector<Value>& wvals) {
          for (std::size_t i = 0; i < k; ++i) contingency[i].value = wvals[i];
          int ac2b_state = -1;  // lazily computed, shared by every x⃗'
          return for_each_assignment(cause_ranges, [&](const std::vector<Value>& xalt) {
            if (xalt == actual_x) return true;
            if (!ac2a(cause, contingency, xalt)) return true;
            out.saw_ac2a = true;
            if (need_normality) {
              if (!normal_enough()) return true;
              out.saw_ac2a_plus = true;
            }
            if (ac2b_state < 0) ac2b_state = ac2b(cause, contingency, rule) ? 1 : 0;
            if (ac2b_state == 0) return true;
            out.witnesses.push_back(Witness{contingency, xalt});
            return collect_all;
          });
        });
        if (stop) return out;
        // next k-combination in lexicographic order
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == others.size() - k + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
      }
    }
    return out;
  }

  Verdict decide(const CandidateCause& cause) {
    validate_cause(model_, cause);
    Verdict v;
    v.variant = variant_;
    if (!ac1(cause)) {
      v.failure = FailedCondition::AC1;
      return v;
    }
    const bool unpruned = variant_ == RuleVariant::Extended;
    Ac2Outcome ac2 = search_ac2(cause, options_.collect_all, variant_, unpruned);
    if (ac2.witnesses.empty()) {
      if (!ac2.saw_ac2a) {
        v.failure = FailedCondition::AC2a;
      } else if (variant_ == RuleVariant::Extended && !ac2.saw_ac2a_plus) {
        v.failure = FailedCondition::AC2aPlus;
      } else {
        v.failure = variant_ == RuleVariant::Original ? FailedCondition::AC2bPrime : FailedCondition::AC2b;
      }
      return v;
    }
    v.witnesses = std::move(ac2.witnesses);
    if (auto sub = ac3_violation(cause, unpruned)) {
      v.failure = FailedCondition::AC3;
      v.ac3_subset = std::move(sub);
      return v;
    }
    v.is_cause = true;
    return v;
  }

  // Smallest strict sub-conjunction that satisfies AC1 and AC2, if any.
  std::optional<CandidateCause> ac3_violation(const CandidateCause& cause, bool unpruned) {
    const std::size_t m = cause.size();
    if (m < 2) return std::nullopt;
    for (std::size_t k = 1; k < m; ++k) {
      std::optional<CandidateCause> found;
      for_each_subset(m, k, [&](const std::vector<std::size_t>& idx) {
        CandidateCause sub;
        for (std::size_t i : idx) sub.conjuncts.push_back(cause.conjuncts[i]);
        if (!search_ac2(sub, false, variant_, unpruned).witnesses.empty()) {
          found = std::move(sub);
          return false;
        }
        return true;
      });
      if (found) return found;
    }
    return std::nullopt;
  }

  std::vector<std::pair<CandidateCause, Verdict>> all_causes(std::size_t max_conjuncts) {
    std::vector<std::pair<CandidateCause, Verdict>> out;
    if (!phi_.holds(actual_)) return out;
    const bool unpruned = variant_ == RuleVariant::Extended;
    // Under the bare variants a conjunct on a variable that cannot influence
    // phi never survives AC3, so candidates only draw from relevant ones.
    std::vector<VarIndex> pool;
    for (VarIndex v = 0; v < n_; ++v) {
      if (unpruned || relevant_[v]) pool.push_back(v);
    }
    const std::size_t limit = max_conjuncts == 0 ? pool.size() : std::min(max_conjuncts, pool.size());
    std::vector<std::vector<bool>> satisfied;  // member masks of AC2-satisfying candidates
    for (std::size_t k = 1; k <= limit; ++k) {
      for_each_subset(pool.size(), k, [&](const std::vector<std::size_t>& idx) {
        std::vector<bool> mask(n_, false);
        for (std::size_t i : idx) mask[pool[i]] = true;
        for (const auto& s : satisfied) {
          bool contained = true;
          for (VarIndex v = 0; v < n_ && contained; ++v) contained = !s[v] || mask[v];
          if (contained) return true;
        }
        CandidateCause cause;
        for (std::size_t i : idx) cause.conjuncts.push_back({pool[i], actual_[pool[i]]});
        Ac2Outcome ac2 = search_ac2(cause, options_.collect_all, variant_, unpruned);
        if (ac2.witnesses.empty()) return true;
        satisfied.push_back(mask);
        Verdict v;
        v.variant = variant_;
        v.is_cause = true;
        v.witnesses = std::move(ac2.witnesses);
        out.emplace_back(std::move(cause), std::move(v));
        return true;
      });
    }
    return out;
  }

 private:
  template <typename Fn>
  static void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      if (!fn(static_cast<const std::vector<std::size_t>&>(idx))) return;
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
      if (i == 0) return;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }

  void clear_fixed() { std::fill(fixed_.begin(), fixed_.end(), kUnset); }

  void run() {
    if (++spent_ > options_.budget) throw SearchBudgetExceeded(options_.budget);
    model_.solve_into(ctx_.values, fixed_, buffer_);
  }

  const CausalModel& model_;
  const NormalityOrder* order_;
  const Context& ctx_;
  const CausalFormula& phi_;
  RuleVariant variant_;
  SearchOptions options_;
  std::size_t n_;
  World actual_;
  std::vector<bool> relevant_;
  std::vector<Value> fixed_;
  std::vector<Value> buffer_;
  std::uint64_t spent_ = 0;
};

bool ac2a_impl(const CausalModel& model, const NormalityOrder* order, const Context& ctx,
               const CandidateCause& cause, const CausalFormula& phi, const Witness& w, RuleVariant variant) {
  validate_cause(model, cause);
  validate_witness(model, cause, w);
  Searcher s(model, order, ctx, phi, variant, SearchOptions{});
  if (!s.ac2a(cause, w.contingency, w.alternative)) return false;
  if (variant == RuleVariant::Extended) return s.normal_enough();
  return true;
}

}  // namespace

bool check_ac1(const CausalModel& model, const Context& ctx, const CandidateCause& cause,
               const CausalFormula& phi) {
  validate_cause(model, cause);
  Searcher s(model, nullptr, ctx, phi, RuleVariant::Updated, SearchOptions{});
  return s.ac1(cause);
}

bool check_ac2a(const CausalModel& model, const Context& ctx, const CandidateCause& cause,
                const CausalFormula& phi, const Witness& w, RuleVariant variant) {
  return ac2a_impl(model, nullptr, ctx, cause, phi, w, variant);
}

bool check_ac2a(const ExtendedCausalModel& model, const Context& ctx, const CandidateCause& cause,
                const CausalFormula& phi, const Witness& w, RuleVariant variant) {
  return ac2a_impl(model.base, &model.order, ctx, cause, phi, w, variant);
}

bool check_ac2b(const CausalModel& model, const Context& ctx, const CandidateCause& cause,
                const CausalFormula& phi, const Witness& w, RuleVariant variant) {
  validate_cause(model, cause);
  validate_witness(model, cause, w);
  const RuleVariant rule = variant == RuleVariant::Original ? RuleVariant::Original : RuleVariant::Updated;
  Searcher s(model, nullptr, ctx, phi, rule, SearchOptions{});
  return s.ac2b(cause, w.contingency, rule);
}

Verdict is_actual_cause(const CausalModel& model, const Context& ctx, const CandidateCause& cause,
                        const CausalFormula& phi, RuleVariant variant, const SearchOptions& options) {
  Searcher s(model, nullptr, ctx, phi, variant, options);
  return s.decide(cause);
}

Verdict is_actual_cause(const ExtendedCausalModel& model, const Context& ctx, const CandidateCause& cause,
                        const CausalFormula& phi, RuleVariant variant, const SearchOptions& options) {
  Searcher s(model.base, &model.order, ctx, phi, variant, options);
  return s.decide(cause);
}

std::vector<std::pair<CandidateCause, Verdict>> find_all_causes(const CausalModel& model, const Context& ctx,
                                                                const CausalFormula& phi, RuleVariant variant,
                                                                const SearchOptions& options,
                                                                std::size_t max_conjuncts) {
  Searcher s(model, nullptr, ctx, phi, variant, options);
  return s.all_causes(max_conjuncts);
}

std::vector<std::pair<CandidateCause, Verdict>> find_all_causes(const ExtendedCausalModel& model,
                                                                const Context& ctx, const CausalFormula& phi,
                                                                RuleVariant variant, const SearchOptions& options,
                                                                std::size_t max_conjuncts) {
  Searcher s(model.base, &model.order, ctx, phi, variant, options);
  return s.all_causes(max_conjuncts);
}

std::vector<RankedWitness> best_witnesses(const ExtendedCausalModel& model, const Context& ctx,
                                          const CandidateCause& cause, const CausalFormula& phi,
                                          const SearchOptions& options) {
  validate_cause(model.base, cause);
  Searcher s(model.base, &model.order, ctx, phi, RuleVariant::Updated, options);
  if (!s.ac1(cause)) throw PreconditionViolated("the cause fails AC1");
  Ac2Outcome ac2 = s.search_ac2(cause, true, RuleVariant::Updated, true);
  if (ac2.witnesses.empty()) throw NoWitness();
  if (s.ac3_violation(cause, false)) throw PreconditionViolated("the cause fails AC3");

  std::vector<RankedWitness> all;
  for (Witness& w : ac2.witnesses) {
    World world = witness_world(model.base, ctx, cause, w);
    all.push_back({std::move(w), std::move(world)});
  }
  std::vector<RankedWitness> best;
  for (const auto& cand : all) {
    bool dominated = std::any_of(all.begin(), all.end(), [&](const RankedWitness& other) {
      return model.order.strictly_more_normal(other.world, cand.world);
    });
    if (!dominated) best.push_back(cand);
  }
  return best;
}

World witness_world(const CausalModel& model, const Context& ctx, const CandidateCause& cause, const Witness& w) {
  validate_cause(model, cause);
  validate_witness(model, cause, w);
  std::vector<Setting> settings = w.contingency;
  for (std::size_t i = 0; i < cause.size(); ++i) settings.push_back({cause.conjuncts[i].var, w.alternative[i]});
  return model.solve(ctx, Intervention(std::move(settings)));
}

}  // namespace causal
