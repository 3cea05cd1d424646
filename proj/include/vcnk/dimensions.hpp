#pragma once

#include <optional>
#include <vector>

#include "vcnk/hypotheses.hpp"
#include "vcnk/partite.hpp"
#include "vcnk/report.hpp"

namespace vcnk {

// Finite family of functions [0, domain_size) -> value ids, deduplicated.
struct FunctionFamily {
    int domain_size = 0;
    std::vector<std::vector<int>> functions;
    std::vector<int> source_member;  // first class member realizing each function

    static FunctionFamily from_tables(int domain_size,
                                      const std::vector<std::vector<int>>& tables);
};

struct ShatteringWitness {
    std::vector<int> points;    // domain indices, ascending
    std::vector<int> f0, f1;    // disagreeing value maps, per point
    std::vector<int> selectors; // function index per subset bitmask of `points`
};

bool witness_is_valid(const FunctionFamily& fam, const ShatteringWitness& w);

// Exhaustive search for a Natarajan-shattering witness of A; the (f0, f1)
// candidates range over value pairs realized by the family at each point.
std::optional<ShatteringWitness> natarajan_shatters(const FunctionFamily& fam,
                                                    const std::vector<int>& a_points,
                                                    const Limits& limits = {});

struct DimResult {
    std::optional<int> value;  // nullopt encodes -infinity (empty family)
    std::optional<ShatteringWitness> witness;
};

DimResult natarajan_dimension(const FunctionFamily& fam, const Limits& limits = {});

// Family obtained by fixing `fixed_positions` of a product grid to
// `fixed_values` and restricting each table to the residual coordinates.
FunctionFamily slice_tables(const std::vector<std::vector<int>>& tables, const Grid& full,
                            const std::vector<int>& fixed_positions,
                            const std::vector<int>& fixed_values);

// The induced family H(x) at an anchor over E_{k-1}: residual coordinates are
// the E_k coordinates whose subsets contain k; values are sym labels.
struct Slice {
    ConfigPoint anchor;
    std::vector<int> residual_positions;  // positions in the E_k coordinate list
    FunctionFamily family;
};

Slice slice_at_anchor(const HypothesisClass& cls, const ConfigPoint& anchor,
                      const ClassContext& ctx);

struct VcnResult {
    std::optional<int> value;  // nullopt encodes -infinity
    std::optional<ConfigPoint> anchor;
    std::optional<ShatteringWitness> witness;
    std::vector<int> residual_positions;
    int partite_side = -1;                  // partite only: the left-out index a
    std::vector<int> partite_anchor;        // partite only: fixed coordinate values
    std::vector<int> partite_fixed_positions;
    std::vector<int> partite_residual_positions;
};

VcnResult vcn_dimension(const HypothesisClass& cls, const ClassContext& ctx,
                        const Limits& limits = {});

VcnResult partite_vcn_dimension(const PartiteClass& cls, const PartiteContext& ctx,
                                const Limits& limits = {});

// For rank <= 1 classes with dimension >= 1, checks the exact rational bound
// max_patterns(m) <= ((labels^2 * (m+1)) / 2) ^ (dim * m^(k-1)) at
// m in {k, k+1, k+2}.
AuditReport audit_growth_bound(const HypothesisClass& cls, const ClassContext& ctx,
                               const Limits& limits = {});

}  // namespace vcnk
