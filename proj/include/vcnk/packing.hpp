#pragma once

#include <cstdint>
#include <vector>

#include "vcnk/dimensions.hpp"
#include "vcnk/losses.hpp"
#include "vcnk/report.hpp"

namespace vcnk {

// h2(t) = t*log2(1/t) + (1-t)*log2(1/(1-t)), with h2(0) = h2(1) = 0.
double binary_entropy(double t);

struct CenterSet {
    enum class Method { Greedy, Optimal };

    std::vector<int> centers;  // member indices
    Rat epsilon;
    Method method = Method::Greedy;
};

// True iff every member is within epsilon of some center in total loss.
bool is_valid_cover(const std::vector<int>& centers, const std::vector<std::vector<Rat>>& losses,
                    const Rat& epsilon);

// First-uncovered greedy cover; centers are class members, canonical order
// tie-break. Throws InvalidCentersError when no member cover exists.
CenterSet greedy_centers(const HypothesisClass& cls, const ProbTemplate& mu,
                         const LossTable& loss, const Rat& epsilon, const ClassContext& ctx);

// Exact minimum cover size via branch and bound over the loss matrix.
int optimal_cover_size(const HypothesisClass& cls, const ProbTemplate& mu, const LossTable& loss,
                       const Rat& epsilon, const ClassContext& ctx, const Limits& limits = {});

// Greedy maximal subset with all pairwise losses (both orientations) > epsilon.
int separated_subset_size(const HypothesisClass& cls, const ProbTemplate& mu,
                          const LossTable& loss, const Rat& epsilon, const ClassContext& ctx);

// Matrix variants, for callers that already hold pairwise losses.
CenterSet greedy_centers_from_matrix(const std::vector<std::vector<Rat>>& losses,
                                     const Rat& epsilon);
int optimal_cover_size_from_matrix(const std::vector<std::vector<Rat>>& losses, const Rat& epsilon,
                                   const Limits& limits = {});
int separated_subset_from_matrix(const std::vector<std::vector<Rat>>& losses, const Rat& epsilon);

// Checks that C (subsets of [n] as bitmasks) covers 2^[n] within radius c*n,
// then audits both n <= log2|C| / (1 - h2(c)) and the Hamming-ball volume
// bound sum_{i<=floor(cn)} binom(n,i) <= 2^(h2(c)*n).
AuditReport check_cover_bound(const std::vector<std::uint32_t>& cover, int n, const Rat& c,
                              const Limits& limits = {});

// The mixture (1/k)(uniform on V + sum of point masses at the anchor's
// singleton coordinates); arities >= 2 get the uniform measure.
ProbTemplate adversarial_template(const ConfigPoint& anchor, const std::vector<int>& v_elements,
                                  const Universe& uni);

// Audits, per shattered slice witness, that the exact optimal cover size N at
// precision epsilon under the adversarial measure satisfies
// |V| <= log2(N) / (1 - h2(epsilon * k^k / (s * k!))), together with the exact
// per-pair loss lower bound L >= s*k!/(k^k*n) * |D'|.
AuditReport audit_hp_to_vcnk(const HypothesisClass& cls, const LossTable& loss, const Rat& epsilon,
                             const ClassContext& ctx, const Limits& limits = {});

// Partite counterpart with threshold epsilon / s.
AuditReport audit_hp_to_vcnk_partite(const PartiteClass& cls, const LossTable& loss,
                                     const Rat& epsilon, const PartiteContext& ctx,
                                     const Limits& limits = {});

}  // namespace vcnk
