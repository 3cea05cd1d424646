#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "vcnk/hypotheses.hpp"
#include "vcnk/report.hpp"
#include "vcnk/universe.hpp"

namespace vcnk {

struct LossFlags {
    bool bounded = true;  // always true for finite tables, kept for fidelity
    bool separated = false;
    bool metric = false;
};

// A loss on (x, y, y') where y, y' range over an encoded finite label space
// (sym labels in the non-partite case, plain partite labels otherwise).
// x-dependence goes through a stratum map; the default is constant in x.
class LossTable {
public:
    enum class Kind { ZeroOne, Table };

    static LossTable zero_one(int label_count);
    static LossTable from_matrix(int label_count, std::vector<Rat> matrix);  // row y, col y'
    static LossTable from_strata(int label_count, std::vector<int> x_stratum,
                                 std::vector<std::vector<Rat>> strata);

    Kind kind() const { return kind_; }
    int label_count() const { return label_count_; }
    int stratum_count() const { return kind_ == Kind::ZeroOne ? 1 : static_cast<int>(strata_.size()); }
    int stratum_of(std::uint64_t x_index) const {
        return x_stratum_.empty() ? 0 : x_stratum_[x_index];
    }
    const std::vector<Rat>& stratum_matrix(int stratum) const;  // Table kind only

    Rat value(std::uint64_t x_index, int y, int yp) const;

    // Cached constants; recomputed on construction, never trusted from input.
    const Rat& min_distinct() const { return s_ell_; }       // s(l); 1 when no distinct pair exists
    bool min_distinct_is_infinite() const { return s_infinite_; }
    const Rat& sup_norm() const { return sup_norm_; }
    const LossFlags& flags() const { return flags_; }
    bool diagonal_is_zero() const { return diag_zero_; }

private:
    void recompute();

    Kind kind_ = Kind::ZeroOne;
    int label_count_ = 0;
    std::vector<int> x_stratum_;            // empty => single stratum
    std::vector<std::vector<Rat>> strata_;  // per stratum: label_count^2 entries, row-major
    Rat s_ell_{1};
    bool s_infinite_ = false;
    Rat sup_norm_{1};
    LossFlags flags_;
    bool diag_zero_ = true;
};

struct LossConstants {
    Rat min_distinct;
    bool min_distinct_is_infinite = false;
    Rat sup_norm;
    LossFlags flags;
};

// Exact min/max/predicate scan over the full table.
LossConstants loss_constants(const LossTable& loss);

// L_{mu,F,l}(H): exact expectation of l(x, H*_k(x), F*_k(x)) under mu^k.
Rat total_loss(const ProbTemplate& mu, const Hypothesis& f, const LossTable& loss,
               const Hypothesis& h, const ClassContext& ctx);

// mu^k-mass of the set where the two k-patterns differ.
Rat disagreement_mass(const ProbTemplate& mu, const Hypothesis& f, const Hypothesis& h,
                      const ClassContext& ctx);

// Checks, exactly and exhaustively over the class, the loss/disagreement
// sandwich and (for separated losses) the rescaled triangle inequality.
AuditReport check_almost_metric(const ProbTemplate& mu, const LossTable& loss,
                                const HypothesisClass& cls, const ClassContext& ctx);

// True iff some member attains total loss exactly zero.
bool is_realizable(const Hypothesis& f, const HypothesisClass& cls, const LossTable& loss,
                   const ProbTemplate& mu, const ClassContext& ctx);

// Pairwise total-loss matrix: entry (i, j) is the loss of member j against
// target member i.
std::vector<std::vector<Rat>> loss_matrix(const HypothesisClass& cls, const ProbTemplate& mu,
                                          const LossTable& loss, const ClassContext& ctx);

}  // namespace vcnk
