#include "causal/cli.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "causal/corpus.hpp"
#include "causal/dsl.hpp"
#include "causal/error.hpp"
#include "causal/json_output.hpp"
#include "causal/transforms.hpp"

namespace causal {

namespace {

struct Options {
  std::string model, context, formula, cause, effect, variant = "updated";
  std::string base, extension, dir;
  std::vector<std::string> vars;
  bool json = false, all = false, timing = false;
  std::uint64_t budget = SearchOptions{}.budget;
  std::size_t max_size = 0;
  int n = 0;
};

std::string context_text(const Context& ctx, const Signature& sig) {
  std::string s;
  for (VarIndex i = 0; i < ctx.values.size(); ++i) {
    if (i) s += ", ";
    s += sig.exogenous()[i].name + "=" + std::to_string(ctx.values[i]);
  }
  return s;
}

std::string named_text(const std::vector<NamedSetting>& settings) {
  std::string s;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    if (i) s += ", ";
    s += settings[i].first + "=" + std::to_string(settings[i].second);
  }
  return s;
}

std::string witness_text(const Witness& w, const CandidateCause& cause, const Signature& sig) {
  std::vector<Setting> alt;
  for (std::size_t i = 0; i < cause.size(); ++i) alt.push_back({cause.conjuncts[i].var, w.alternative[i]});
  std::string s = "W={";
  for (std::size_t i = 0; i < w.contingency.size(); ++i) {
    if (i) s += ", ";
    s += sig.endogenous_name(w.contingency[i].var) + "=" + std::to_string(w.contingency[i].value);
  }
  return s + "} X'={" + format_settings(alt, sig) + "}";
}

std::vector<VarIndex> parse_var_list(const std::vector<std::string>& items, const Signature& sig) {
  std::vector<VarIndex> out;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string name;
    while (std::getline(ss, name, ',')) {
      name.erase(std::remove_if(name.begin(), name.end(), [](unsigned char c) { return std::isspace(c); }),
                 name.end());
      if (!name.empty()) out.push_back(sig.endogenous_index(name));
    }
  }
  return out;
}

SearchOptions search_options(const Options& o) {
  SearchOptions s;
  s.budget = o.budget;
  return s;
}

Setting single_event(const std::string& text, const CausalModel& model, const char* what) {
  CandidateCause c = parse_cause(text, model);
  if (c.size() != 1) throw Error(std::string(what) + " must be a single event X=x");
  return c.conjuncts[0];
}

int cmd_solve(const Options& o, std::ostream& out) {
  const ModelDocument doc = load_model_file(o.model);
  const World w = doc.model.solve(doc.context(o.context));
  const Signature& sig = doc.model.signature();
  if (o.json) {
    out << Json{{"model", doc.name}, {"context", o.context}, {"world", world_json(w, sig)}}.dump(2) << "\n";
  } else {
    for (VarIndex v = 0; v < w.values.size(); ++v) out << sig.endogenous_name(v) << " = " << w[v] << "\n";
  }
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const ModelDocument doc = load_model_file(o.model);
  const CausalFormula f = parse_formula(o.formula, doc.model);
  const bool holds = eval_formula(doc.model, doc.context(o.context), f);
  if (o.json) {
    out << Json{{"model", doc.name}, {"context", o.context}, {"formula", format_formula(f, doc.model.signature())},
                {"holds", holds}}
               .dump(2)
        << "\n";
  } else {
    out << (holds ? "true" : "false") << "\n";
  }
  return holds ? kExitOk : kExitNegative;
}

int cmd_cause(const Options& o, std::ostream& out) {
  const ModelDocument doc = load_model_file(o.model);
  const Signature& sig = doc.model.signature();
  const Context& ctx = doc.context(o.context);
  const CandidateCause cause = parse_cause(o.cause, doc.model);
  const CausalFormula effect = parse_formula(o.effect, doc.model);
  const RuleVariant variant = parse_variant(o.variant);
  const Verdict v = variant == RuleVariant::Extended
                        ? is_actual_cause(doc.extended(), ctx, cause, effect, variant, search_options(o))
                        : is_actual_cause(doc.model, ctx, cause, effect, variant, search_options(o));
  if (o.json) {
    out << verdict_json(v, cause, sig, doc.name, o.context).dump(2) << "\n";
  } else {
    out << format_cause(cause, sig) << (v.is_cause ? " is" : " is not") << " an actual cause of "
        << format_formula(effect, sig) << " in (" << doc.name << ", " << o.context << ") under the "
        << to_string(variant) << " rule\n";
    if (!v.is_cause) out << "failed: " << failure_text(v, sig) << "\n";
    for (const Witness& w : v.witnesses) out << "witness: " << witness_text(w, cause, sig) << "\n";
  }
  return v.is_cause ? kExitOk : kExitNegative;
}

int cmd_causes(const Options& o, std::ostream& out) {
  const ModelDocument doc = load_model_file(o.model);
  const Signature& sig = doc.model.signature();
  const Context& ctx = doc.context(o.context);
  const CausalFormula effect = parse_formula(o.effect, doc.model);
  const RuleVariant variant = parse_variant(o.variant);
  const auto causes = variant == RuleVariant::Extended
                          ? find_all_causes(doc.extended(), ctx, effect, variant, search_options(o), o.max_size)
                          : find_all_causes(doc.model, ctx, effect, variant, search_options(o), o.max_size);
  if (o.json) {
    Json arr = Json::array();
    for (const auto& [c, v] : causes) {
      Json item{{"cause", format_cause(c, sig)}};
      item.update(verdict_json(v, c, sig, doc.name, o.context));
      arr.push_back(std::move(item));
    }
    out << arr.dump(2) << "\n";
  } else {
    for (const auto& [c, v] : causes) {
      out << format_cause(c, sig) << "  (" << v.witnesses.size() << " witness"
          << (v.witnesses.size() == 1 ? "" : "es") << ", first " << witness_text(v.witnesses.front(), c, sig)
          << ")\n";
    }
    if (causes.empty()) out << "no causes\n";
  }
  return causes.empty() ? kExitNegative : kExitOk;
}

void print_report(const ExtensionReport& r, const ModelDocument& base, const Options& o, std::ostream& out) {
  const Signature& sig = base.model.signature();
  if (o.json) {
    out << extension_report_json(r, sig).dump(2) << "\n";
    return;
  }
  if (r.is_conservative) {
    out << "conservative\n";
  } else if (r.counterexample) {
    const auto& c = *r.counterexample;
    out << "not conservative: in context " << context_text(c.context, sig) << ", setting " << named_text(c.setting)
        << " gives " << c.variable << "=" << c.value_in_base << " in the base model but " << c.variable << "="
        << c.value_in_extension << " in the extension\n";
  } else if (r.normality_counterexample) {
    const auto& c = *r.normality_counterexample;
    out << "not conservative: in context " << context_text(c.context, sig) << ", intervening with {"
        << named_text(c.setting) << "} yields a world that is " << (c.base_at_least_as_normal ? "" : "not ")
        << "at least as normal as the actual one in the base model but "
        << (c.extension_at_least_as_normal ? "is" : "is not") << " in the extension\n";
  }
}

int cmd_conservative(const Options& o, std::ostream& out, bool extended) {
  const ModelDocument base = load_model_file(o.base);
  const ModelDocument ext = load_model_file(o.extension);
  const ExtensionReport r = extended ? is_conservative_extension_extended(ext.extended(), base.extended())
                                     : is_conservative_extension(ext.model, base.model);
  print_report(r, base, o, out);
  return r.is_conservative ? kExitOk : kExitNegative;
}

int cmd_kill(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelDocument doc = load_model_file(o.model);
  const Context& ctx = doc.context(o.context);
  const Setting cause = single_event(o.cause, doc.model, "--cause");
  const Setting effect = single_event(o.effect, doc.model, "--effect");
  KillResult r = kill_all_witnesses(doc.model, ctx, cause, effect);
  ModelDocument killed{doc.name + "_killed", std::move(r.model), doc.contexts, std::nullopt};
  out << print_model(killed);
  err << "killed " << r.killed.size() << " witness" << (r.killed.size() == 1 ? "" : "es") << "\n";
  return kExitOk;
}

int cmd_stability(const Options& o, std::ostream& out) {
  StabilityModel s = build_stability_model(o.n);
  ModelDocument doc{"stability_" + std::to_string(o.n), std::move(s.model), {{"u0", s.u0}, {"u1", s.u1}},
                    std::nullopt};
  out << print_model(doc);
  return kExitOk;
}

int cmd_respects(const Options& o, std::ostream& out) {
  const ModelDocument doc = load_model_file(o.model);
  const Signature& sig = doc.model.signature();
  const RespectReport r = respects_equations(doc.extended(), doc.context(o.context), parse_var_list(o.vars, sig));
  if (o.json) {
    Json j{{"respects", r.respects}, {"violating_world", nullptr}};
    if (r.violating_world) j["violating_world"] = world_json(*r.violating_world, sig);
    out << j.dump(2) << "\n";
  } else {
    out << (r.respects ? "true" : "false") << "\n";
    if (r.violating_world) {
      out << "violating world:";
      for (VarIndex v = 0; v < r.violating_world->values.size(); ++v) {
        out << " " << sig.endogenous_name(v) << "=" << (*r.violating_world)[v];
      }
      out << "\n";
    }
  }
  return r.respects ? kExitOk : kExitNegative;
}

int cmd_best(const Options& o, std::ostream& out) {
  const ModelDocument doc = load_model_file(o.model);
  const Signature& sig = doc.model.signature();
  const ExtendedCausalModel ext = doc.extended();
  const CandidateCause cause = parse_cause(o.cause, doc.model);
  const CausalFormula effect = parse_formula(o.effect, doc.model);
  const auto best = best_witnesses(ext, doc.context(o.context), cause, effect, search_options(o));
  if (o.json) {
    Json arr = Json::array();
    for (const RankedWitness& rw : best) {
      Json item = witness_json(rw.witness, cause, sig);
      item["world"] = world_json(rw.world, sig);
      auto rank = ext.order.rank(rw.world);
      item["rank"] = rank ? Json(*rank) : Json(nullptr);
      arr.push_back(std::move(item));
    }
    out << arr.dump(2) << "\n";
  } else {
    for (const RankedWitness& rw : best) {
      out << witness_text(rw.witness, cause, sig);
      if (auto rank = ext.order.rank(rw.world)) out << "  rank " << *rank;
      out << "\n";
    }
  }
  return kExitOk;
}

int cmd_corpus(const Options& o, std::ostream& out) {
  const std::string dir = o.dir.empty() ? default_corpus_dir() : o.dir;
  const CorpusReport report = verify_corpus(dir, o.all, search_options(o));
  auto verdict = [](std::optional<bool> v) -> std::string {
    if (!v) return "error";
    return *v ? "cause" : "not-cause";
  };
  if (o.json) {
    Json cases = Json::array();
    for (const CaseResult& r : report.results) {
      Json item{{"id", r.spec.id},
                {"expected", r.spec.expect_cause ? "cause" : "not-cause"},
                {"actual", verdict(r.actual)},
                {"passed", r.passed()},
                {"failure_reason", r.failure_reason.empty() ? Json(nullptr) : Json(r.failure_reason)},
                {"error", r.error.empty() ? Json(nullptr) : Json(r.error)},
                {"source", r.spec.source}};
      if (o.timing) item["millis"] = r.millis;
      cases.push_back(std::move(item));
    }
    out << Json{{"passed", report.passed()}, {"total", report.results.size()}, {"cases", std::move(cases)}}.dump(2)
        << "\n";
  } else {
    for (const CaseResult& r : report.results) {
      out << (r.passed() ? "PASS " : "FAIL ") << r.spec.id << "  expected " << (r.spec.expect_cause ? "cause" : "not-cause")
          << ", got " << verdict(r.actual);
      if (!r.error.empty()) out << " (" << r.error << ")";
      if (o.timing) out << "  " << std::fixed << std::setprecision(1) << r.millis << " ms";
      out << "\n";
    }
    out << report.passed() << "/" << report.results.size() << " cases passed\n";
  }
  return report.all_passed() ? kExitOk : kExitNegative;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Actual causality in finite structural equation models", "causal"};
  app.require_subcommand(1);

  auto model_ctx = [&](CLI::App* sub) {
    sub->add_option("-m,--model", o.model, "Model file (.cm)")->required();
    sub->add_option("-c,--context", o.context, "Context name declared in the model file")->required();
  };
  auto json = [&](CLI::App* sub) { sub->add_flag("--json", o.json, "Structured JSON output"); };
  auto budget = [&](CLI::App* sub) { sub->add_option("--budget", o.budget, "Maximum number of model solves"); };
  auto variant = [&](CLI::App* sub) {
    sub->add_option("--variant", o.variant, "original, updated or extended")
        ->check(CLI::IsMember({"original", "updated", "extended"}));
  };

  auto* solve = app.add_subcommand("solve", "Print the world of a context");
  model_ctx(solve);
  json(solve);

  auto* eval = app.add_subcommand("eval", "Evaluate a causal formula");
  model_ctx(eval);
  eval->add_option("-f,--formula", o.formula, "Formula, e.g. \"[A<-1, C<-0](D=0)\"")->required();
  json(eval);

  auto* cause = app.add_subcommand("cause", "Decide whether a conjunction of events is an actual cause");
  model_ctx(cause);
  cause->add_option("--cause", o.cause, "Candidate cause, e.g. \"B=1 & C=1\"")->required();
  cause->add_option("--effect", o.effect, "Effect formula")->required();
  variant(cause);
  json(cause);
  budget(cause);

  auto* causes = app.add_subcommand("causes", "List every actual cause of an effect");
  model_ctx(causes);
  causes->add_option("--effect", o.effect, "Effect formula")->required();
  causes->add_option("--max-size", o.max_size, "Largest conjunction to consider (0 = no limit)");
  variant(causes);
  json(causes);
  budget(causes);

  auto* conservative = app.add_subcommand("conservative", "Check that one model conservatively extends another");
  auto* ce = app.add_subcommand("ce", "Conservative-extension check including the normality condition");
  for (auto* sub : {conservative, ce}) {
    sub->add_option("--m1", o.base, "Base model")->required();
    sub->add_option("--m2", o.extension, "Extended model")->required();
    json(sub);
  }

  auto* kill = app.add_subcommand("kill-witnesses", "Add variables until a cause under the original rule is gone");
  model_ctx(kill);
  kill->add_option("--cause", o.cause, "Single event X=x")->required();
  kill->add_option("--effect", o.effect, "Single event Y=y")->required();

  auto* stability = app.add_subcommand("stability", "Print a model of the stability family");
  stability->add_option("--n", o.n, "Index of the model")->required()->check(CLI::NonNegativeNumber);

  auto* respects = app.add_subcommand("respects", "Check that the normality order respects the equations");
  model_ctx(respects);
  respects->add_option("--vars", o.vars, "Variables (comma separated or repeated)")->required();
  json(respects);

  auto* best = app.add_subcommand("best", "Witnesses with the most normal witness worlds");
  model_ctx(best);
  best->add_option("--cause", o.cause, "Candidate cause")->required();
  best->add_option("--effect", o.effect, "Effect formula")->required();
  json(best);
  budget(best);

  auto* corpus = app.add_subcommand("corpus", "Bundled example corpus");
  auto* corpus_run = corpus->add_subcommand("run", "Run every corpus case against its expected verdict");
  corpus->require_subcommand(1);
  corpus_run->add_option("--dir", o.dir, "Corpus directory");
  corpus_run->add_flag("--all", o.all, "Include cases marked slow");
  corpus_run->add_flag("--timing", o.timing, "Report per-case runtime");
  json(corpus_run);
  budget(corpus_run);

  std::vector<std::string> argv;
  for (const std::string& a : args) {
    if (a == "-m1") {
      argv.push_back("--m1");
    } else if (a == "-m2") {
      argv.push_back("--m2");
    } else {
      argv.push_back(a);
    }
  }
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (cause->parsed()) return cmd_cause(o, out);
    if (causes->parsed()) return cmd_causes(o, out);
    if (conservative->parsed()) return cmd_conservative(o, out, false);
    if (ce->parsed()) return cmd_conservative(o, out, true);
    if (kill->parsed()) return cmd_kill(o, out, err);
    if (stability->parsed()) return cmd_stability(o, out);
    if (respects->parsed()) return cmd_respects(o, out);
    if (best->parsed()) return cmd_best(o, out);
    if (corpus_run->parsed()) return cmd_corpus(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << "usage error: no command\n";
  return kExitUsage;
}

}  // namespace causal
