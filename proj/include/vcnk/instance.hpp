#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vcnk/hypotheses.hpp"
#include "vcnk/losses.hpp"

namespace vcnk {

// A parsed instance file: universe, hypothesis class, loss, named measures.
struct InstanceSpec {
    Universe universe;
    HypothesisClass cls;
    LossTable loss;
    std::vector<std::pair<std::string, ProbTemplate>> measures;  // sorted by name
    std::string canonical_text;  // re-serialized canonical form, for digests
};

InstanceSpec parse_instance_text(const std::string& text, const Limits& limits = {});
InstanceSpec parse_instance(const std::string& path, const Limits& limits = {});

// Class generators, also used by the random test harnesses.
HypothesisClass generate_constants(const ClassContext& ctx);
HypothesisClass generate_all_functions(const ClassContext& ctx, std::uint64_t member_cap = 4096);
HypothesisClass generate_indicators(const ClassContext& ctx);
HypothesisClass generate_random_class(const ClassContext& ctx, int count, std::uint64_t seed,
                                      int rank_cap);

}  // namespace vcnk
