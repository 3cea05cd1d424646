#include "vcnk/report.hpp"

#include <cstdio>

namespace vcnk {

const char* verdict_name(AuditReport::Verdict v) {
    switch (v) {
        case AuditReport::Verdict::Verified: return "verified";
        case AuditReport::Verdict::Consistent: return "consistent";
        case AuditReport::Verdict::Violated: return "violated";
        case AuditReport::Verdict::Vacuous: return "vacuous";
    }
    return "unknown";
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string digest_of(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

nlohmann::json AuditReport::to_json() const {
    nlohmann::json q = nlohmann::json::array();
    for (const auto& [name, value] : quantities) {
        q.push_back({{"name", name}, {"value", value}});
    }
    nlohmann::json j{
        {"audit", audit},
        {"claim", claim},
        {"inputs_digest", inputs_digest},
        {"verdict", verdict_name(verdict)},
        {"quantities", q},
        {"witnesses", witnesses},
    };
    if (!note.empty()) j["note"] = note;
    return j;
}

}  // namespace vcnk
