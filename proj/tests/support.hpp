#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "causal/corpus.hpp"
#include "causal/dsl.hpp"

namespace causal::testing {

// (base, extension) pairs in the corpus where the extension is conservative.
inline const std::vector<std::pair<const char*, const char*>> kConservativePairs = {
    {"rock_throwing.cm", "rock_throwing_hits.cm"},   {"spohn_switch.cm", "spohn_routes.cm"},
    {"spohn_switch.cm", "spohn_b_switch.cm"},        {"weslake_lamp.cm", "weslake_two.cm"},
    {"weslake_lamp.cm", "weslake_not.cm"},           {"glymour_vote.cm", "glymour_mechanisms.cm"},
    {"glymour_vote.cm", "glymour_split.cm"},         {"hopkins_pearl.cm", "hopkins_pearl_shot.cm"},
    {"bogus_prevention.cm", "bogus_prevention_neutralized.cm"},
    {"scanner.cm", "scanner_relay.cm"},              {"scanner_relay.cm", "scanner_double_relay.cm"},
};

inline ModelDocument corpus_model(const std::string& file) {
  return load_model_file((std::filesystem::path(default_corpus_dir()) / file).string());
}

inline Setting at(const CausalModel& m, const std::string& name, Value v) {
  return {m.signature().endogenous_index(name), v};
}

inline CandidateCause cause_of(const CausalModel& m, const std::string& text) { return parse_cause(text, m); }
inline CausalFormula formula_of(const CausalModel& m, const std::string& text) { return parse_formula(text, m); }

}  // namespace causal::testing
