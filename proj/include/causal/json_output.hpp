#pragma once

#include <string>

#include <json.hpp>

#include "causal/causality.hpp"
#include "causal/transforms.hpp"

namespace causal {

using Json = nlohmann::ordered_json;

// {"contingency": [{"var", "value"}...], "alt_cause": [{"var", "value"}...]}
Json witness_json(const Witness& w, const CandidateCause& cause, const Signature& sig);

// {is_cause, witnesses, failure_reason, variant, model, context}
Json verdict_json(const Verdict& v, const CandidateCause& cause, const Signature& sig, const std::string& model,
                  const std::string& context);

// "AC2(b)", "AC3: B=1", or empty for a cause.
std::string failure_text(const Verdict& v, const Signature& sig);

Json world_json(const World& w, const Signature& sig);
Json extension_report_json(const ExtensionReport& r, const Signature& exo_sig);

}  // namespace causal
