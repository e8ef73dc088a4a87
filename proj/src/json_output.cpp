#include "causal/json_output.hpp"

#include "causal/dsl.hpp"

namespace causal {

namespace {

Json settings_json(std::span<const Setting> settings, const Signature& sig) {
  Json out = Json::array();
  for (const Setting& s : settings) out.push_back({{"var", sig.endogenous_name(s.var)}, {"value", s.value}});
  return out;
}

Json named_json(const std::vector<NamedSetting>& settings) {
  Json out = Json::array();
  for (const auto& [name, value] : settings) out.push_back({{"var", name}, {"value", value}});
  return out;
}

Json context_json(const Context& ctx, const Signature& sig) {
  Json out = Json::object();
  for (VarIndex i = 0; i < ctx.values.size(); ++i) out[sig.exogenous()[i].name] = ctx.values[i];
  return out;
}

}  // namespace

Json witness_json(const Witness& w, const CandidateCause& cause, const Signature& sig) {
  std::vector<Setting> alt;
  for (std::size_t i = 0; i < cause.size(); ++i) alt.push_back({cause.conjuncts[i].var, w.alternative[i]});
  return Json{{"contingency", settings_json(w.contingency, sig)}, {"alt_cause", settings_json(alt, sig)}};
}

std::string failure_text(const Verdict& v, const Signature& sig) {
  if (!v.failure) return "";
  std::string text(to_string(*v.failure));
  if (*v.failure == FailedCondition::AC3 && v.ac3_subset) text += ": " + format_cause(*v.ac3_subset, sig);
  return text;
}

Json verdict_json(const Verdict& v, const CandidateCause& cause, const Signature& sig, const std::string& model,
                  const std::string& context) {
  Json witnesses = Json::array();
  for (const Witness& w : v.witnesses) witnesses.push_back(witness_json(w, cause, sig));
  Json failure = v.failure ? Json(failure_text(v, sig)) : Json(nullptr);
  return Json{{"is_cause", v.is_cause},
              {"witnesses", std::move(witnesses)},
              {"failure_reason", std::move(failure)},
              {"variant", std::string(to_string(v.variant))},
              {"model", model},
              {"context", context}};
}

Json world_json(const World& w, const Signature& sig) {
  Json out = Json::object();
  for (VarIndex i = 0; i < w.values.size(); ++i) out[sig.endogenous_name(i)] = w.values[i];
  return out;
}

Json extension_report_json(const ExtensionReport& r, const Signature& exo_sig) {
  Json out{{"is_conservative", r.is_conservative}, {"counterexample", nullptr}};
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    out["counterexample"] = Json{{"context", context_json(c.context, exo_sig)},
                                 {"variable", c.variable},
                                 {"setting", named_json(c.setting)},
                                 {"value_in_base", c.value_in_base},
                                 {"value_in_extension", c.value_in_extension}};
  }
  if (r.normality_counterexample) {
    const auto& c = *r.normality_counterexample;
    out["normality_counterexample"] = Json{{"context", context_json(c.context, exo_sig)},
                                           {"setting", named_json(c.setting)},
                                           {"base_at_least_as_normal", c.base_at_least_as_normal},
                                           {"extension_at_least_as_normal", c.extension_at_least_as_normal}};
  }
  return out;
}

}  // namespace causal
