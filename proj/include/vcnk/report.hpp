#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace vcnk {

// Structured record of one audited claim: what was checked, the computed
// quantities, and whether the instance confirmed it.
struct AuditReport {
    enum class Verdict { Verified, Consistent, Violated, Vacuous };

    std::string audit;   // e.g. "almost-metric"
    std::string claim;   // human-readable statement of the checked inequality
    std::string inputs_digest;
    Verdict verdict = Verdict::Vacuous;
    std::vector<std::pair<std::string, std::string>> quantities;  // insertion order kept
    std::vector<std::string> witnesses;  // for Violated: minimal reproducing witness first
    std::string note;

    void add(const std::string& name, const std::string& value) {
        quantities.emplace_back(name, value);
    }

    nlohmann::json to_json() const;
};

const char* verdict_name(AuditReport::Verdict v);

// Stable fixed-format rendering for floating-point quantities.
std::string format_double(double v);

// FNV-1a 64-bit digest, rendered as hex.
std::string digest_of(const std::string& data);

}  // namespace vcnk
