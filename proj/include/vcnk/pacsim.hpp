#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vcnk/losses.hpp"
#include "vcnk/packing.hpp"

namespace vcnk {

// A labeled draw: a configuration over [m] plus the target's pattern on it.
struct Sample {
    ConfigPoint x;
    Pattern labels;  // one label per injection [k] -> [m]
};

Sample make_sample(const ProbTemplate& mu, const Hypothesis& target, int m,
                   const ClassContext& ctx, std::uint64_t seed);

// Reusable per-m machinery: injection pullback plans and the composition table
// used to read S_k-tuples out of a sample pattern.
class SampleContext {
public:
    SampleContext(int m, const ClassContext& ctx);

    int m() const { return m_; }
    const std::shared_ptr<const IndexSet>& em_index() const { return em_; }
    const Grid& em_grid() const { return em_grid_; }
    const std::vector<Injection>& injections() const { return injections_; }

    // E_k grid index of alpha*(x) for injection #a.
    std::uint64_t pulled_index(size_t a, const std::vector<int>& x_values) const;

    // Sym label of the pattern restricted to injection #a.
    int restricted_sym(size_t a, const Pattern& labels, const ClassContext& ctx) const;

    // Pattern of a hypothesis at x.
    Pattern pattern_of(const Hypothesis& h, const std::vector<int>& x_values,
                       const ClassContext& ctx) const;

private:
    int m_;
    std::shared_ptr<const IndexSet> em_;
    Grid em_grid_;
    std::vector<Injection> injections_;
    std::vector<std::vector<int>> plans_;      // per injection: E_k coord <- E_m position
    std::vector<std::vector<int>> composed_;   // [a][t] = injection index of alpha_a o tau_t
    const Grid* ek_grid_;
};

// First member minimizing the empirical loss over the sample's injections.
int erm_learner(const Sample& sample, const HypothesisClass& cls, const LossTable& loss,
                const ClassContext& ctx);

// One seeded draw-learn-evaluate round; returns the exact total loss of the
// learned hypothesis. Throws NotRealizableError when the target is not
// realizable in the class.
Rat pac_trial(const ProbTemplate& mu, const Hypothesis& target, const HypothesisClass& cls,
              const LossTable& loss, int m, std::uint64_t seed, const ClassContext& ctx);

// Exact probability, under mu^m, that the ERM output has total loss > epsilon.
Rat exact_failure_probability(const ProbTemplate& mu, const Hypothesis& target,
                              const HypothesisClass& cls, const LossTable& loss,
                              const Rat& epsilon, int m, const ClassContext& ctx,
                              const Limits& limits = {});

struct PacEstimate {
    Rat epsilon;
    Rat delta;
    int m_hat = 0;
    std::uint64_t trials = 0;  // 0 for exact mode
    Rat observed_failure_rate; // worst rate over the families at m_hat
    std::string confidence_note;
    bool exact = true;
};

// Smallest m whose worst-case failure rate over all (measure, target) pairs is
// at most delta, certified at m and m+1. Exact mode enumerates all atoms.
PacEstimate estimate_sample_complexity_exact(const HypothesisClass& cls, const LossTable& loss,
                                             const Rat& epsilon, const Rat& delta,
                                             const std::vector<ProbTemplate>& measures,
                                             const std::vector<Hypothesis>& targets,
                                             const ClassContext& ctx, const Limits& limits = {});

PacEstimate estimate_sample_complexity_mc(const HypothesisClass& cls, const LossTable& loss,
                                          const Rat& epsilon, const Rat& delta,
                                          const std::vector<ProbTemplate>& measures,
                                          const std::vector<Hypothesis>& targets,
                                          std::uint64_t trials, std::uint64_t seed,
                                          const ClassContext& ctx, const Limits& limits = {});

struct CoverBudget {
    Rat delta_star;            // grid value attaining the minimum
    int m_tilde = 0;           // pac threshold at delta_star
    std::uint64_t max_patterns = 0;  // pattern count at m_tilde
    long long displayed = 0;   // min ceil(gamma/(1-delta)) - 2
    long long supported = 0;   // min ceil(gamma/(1-delta)); what the counting argument yields
    long long usable = 1;      // max(displayed, 1)
    bool degenerate = false;   // displayed < 1
    BigInt trivial_bound;      // same minimization with gamma replaced by |labels|^((m)_k)
};

// Evaluates the cover-budget formula over a delta grid, with the pac threshold
// supplied as a closure. Both the displayed (-2) value and the value the
// counting argument actually supports are reported.
CoverBudget cover_budget_bound(const HypothesisClass& cls, const LossTable& loss,
                               const std::function<int(const Rat&)>& pac_threshold,
                               const std::vector<Rat>& delta_grid, const ClassContext& ctx);

std::vector<Rat> default_delta_grid();

// Per measure: computes the cover budget from exact pac thresholds, runs the
// greedy cover at epsilon, asserts cover size <= supported budget, and replays
// the counting argument (at-most-one escape per pattern, G(x) >= t - |Y(x)|,
// integral of G <= t*delta) by exact enumeration on small grids. Grid deltas
// whose exact threshold scan would exceed exact_atom_cap are skipped (the
// budget minimization over the remaining deltas stays sound); a measure with
// no feasible delta is reported vacuous.
AuditReport audit_pac_to_hp(const HypothesisClass& cls, const LossTable& loss, const Rat& epsilon,
                            const std::vector<std::pair<std::string, ProbTemplate>>& measures,
                            const ClassContext& ctx, const Limits& limits = {},
                            const std::vector<Rat>& delta_grid = default_delta_grid(),
                            std::uint64_t replay_atom_cap = 100000,
                            std::uint64_t exact_atom_cap = 1000000);

}  // namespace vcnk
