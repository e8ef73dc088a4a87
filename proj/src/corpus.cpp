#include "causal/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "causal/dsl.hpp"
#include "causal/error.hpp"
#include "causal/json_output.hpp"

namespace causal {

std::size_t CorpusReport::passed() const {
  return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const CaseResult& r) { return r.passed(); }));
}

std::string default_corpus_dir() { return CAUSAL_CORPUS_DIR; }

std::vector<CorpusCase> load_corpus(const std::string& dir) {
  const std::filesystem::path path = std::filesystem::path(dir) / "cases.json";
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  std::vector<CorpusCase> out;
  for (const auto& item : doc.at("cases")) {
    try {
      CorpusCase c;
      c.id = item.at("id").get<std::string>();
      c.model = item.at("model").get<std::string>();
      c.context = item.at("context").get<std::string>();
      c.cause = item.at("cause").get<std::string>();
      c.effect = item.at("effect").get<std::string>();
      c.variant = parse_variant(item.at("variant").get<std::string>());
      const std::string expected = item.at("expected").get<std::string>();
      if (expected != "cause" && expected != "not-cause") {
        throw Error("expected must be \"cause\" or \"not-cause\"");
      }
      c.expect_cause = expected == "cause";
      c.source = item.value("source", "");
      c.slow = item.value("slow", false);
      out.push_back(std::move(c));
    } catch (const nlohmann::json::exception& e) {
      throw Error(path.string() + ": malformed case: " + e.what());
    }
  }
  return out;
}

CaseResult run_case(const std::string& dir, const CorpusCase& c, const SearchOptions& options) {
  CaseResult r{c, std::nullopt, "", "", 0};
  const auto start = std::chrono::steady_clock::now();
  try {
    const ModelDocument doc = load_model_file((std::filesystem::path(dir) / c.model).string());
    const Context& ctx = doc.context(c.context);
    const CandidateCause cause = parse_cause(c.cause, doc.model);
    const CausalFormula effect = parse_formula(c.effect, doc.model);
    const Verdict v = c.variant == RuleVariant::Extended
                          ? is_actual_cause(doc.extended(), ctx, cause, effect, c.variant, options)
                          : is_actual_cause(doc.model, ctx, cause, effect, c.variant, options);
    r.actual = v.is_cause;
    r.failure_reason = failure_text(v, doc.model.signature());
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

CorpusReport verify_corpus(const std::string& dir, bool include_slow, const SearchOptions& options) {
  std::vector<CorpusCase> cases = load_corpus(dir);
  std::sort(cases.begin(), cases.end(), [](const CorpusCase& a, const CorpusCase& b) { return a.id < b.id; });
  CorpusReport report;
  for (const CorpusCase& c : cases) {
    if (c.slow && !include_slow) continue;
    report.results.push_back(run_case(dir, c, options));
  }
  return report;
}

}  // namespace causal
