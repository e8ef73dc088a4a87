#pragma once

#include <optional>
#include <string>
#include <vector>

#include "causal/causality.hpp"

namespace causal {

struct CorpusCase {
  std::string id;
  std::string model;  // file name relative to the corpus directory
  std::string context;
  std::string cause;
  std::string effect;
  RuleVariant variant = RuleVariant::Updated;
  bool expect_cause = false;
  std::string source;
  bool slow = false;
};

struct CaseResult {
  CorpusCase spec;
  std::optional<bool> actual;  // empty when the case raised an error
  std::string error;
  std::string failure_reason;
  double millis = 0;
  bool passed() const { return actual && *actual == spec.expect_cause; }
};

struct CorpusReport {
  std::vector<CaseResult> results;  // sorted by id
  std::size_t passed() const;
  bool all_passed() const { return passed() == results.size(); }
};

// Reads cases.json from dir. Throws Error on malformed entries.
std::vector<CorpusCase> load_corpus(const std::string& dir);

std::string default_corpus_dir();

CorpusReport verify_corpus(const std::string& dir, bool include_slow = false, const SearchOptions& options = {});
CaseResult run_case(const std::string& dir, const CorpusCase& c, const SearchOptions& options = {});

}  // namespace causal
