#pragma once

#include "vcnk/packing.hpp"
#include "vcnk/partite.hpp"

namespace vcnk {

// Per-subset copies of the arity-indexed ground sets; partite labels are the
// S_k-tuple names of the base labels.
PartiteUniverse partize_universe(const Universe& uni, const ClassContext& ctx);

PartiteProbTemplate partize_template(const ProbTemplate& mu, const Universe& uni);

// The index translation E_1(partite) -> E_k: coordinate A reads the partite
// value at the unique function A -> [1].
ConfigPoint partite_to_config(const std::vector<int>& z, const ClassContext& ctx,
                              const PartiteContext& pctx);

// Inverse direction for the m = k case.
std::vector<int> config_to_partite_e1(const ConfigPoint& x, const ClassContext& ctx,
                                      const PartiteContext& pctx);

// Block re-indexing of a configuration over [m] into a partite configuration
// over [floor(m/k)]: coordinate f reads the subset {(i-1)floor(m/k)+f(i)}.
std::vector<int> config_to_partite(const ConfigPoint& x, const ClassContext& ctx,
                                   const PartiteContext& pctx);

// beta_alpha(i) = (i-1)*floor(m/k) + alpha(i); always injective.
Injection block_injection(const std::vector<int>& alpha, int m, int k);

// Entrywise re-indexing of an injection-indexed pattern into a tuple-indexed
// partite pattern of S_k-encoded values.
PartitePattern pattern_to_partite(const Pattern& y, int m, const ClassContext& ctx);

PartiteHypothesis partize_hypothesis(const Hypothesis& f, const ClassContext& ctx,
                                     const PartiteContext& pctx);

PartiteClass partize_class(const HypothesisClass& cls, const ClassContext& ctx,
                           const PartiteContext& pctx);

// Inverse of partization; throws NotInImageError when the table is not a
// partized hypothesis.
Hypothesis departize_hypothesis(const PartiteHypothesis& g, const ClassContext& ctx,
                                const PartiteContext& pctx);

// Pullback of the loss along the index translation. Constants and flags carry over.
LossTable partize_loss(const LossTable& loss, const ClassContext& ctx,
                       const PartiteContext& pctx);

// Exact equality of the total loss before and after partization.
AuditReport check_partization_loss_equality(const ProbTemplate& mu, const Hypothesis& f,
                                            const Hypothesis& h, const LossTable& loss,
                                            const ClassContext& ctx, const PartiteContext& pctx);

// Departizes a valid partite center set; the result covers the non-partite
// class at the same epsilon with the same cardinality (re-verified exactly).
CenterSet transfer_centers(const CenterSet& partite_centers, const PartiteClass& pcls,
                           const PartiteProbTemplate& pmu, const LossTable& ploss,
                           const PartiteContext& pctx, const HypothesisClass& cls,
                           const ProbTemplate& mu, const LossTable& loss,
                           const ClassContext& ctx);

// phi_k o iota = id, retained-coordinate bijectivity, exact pushforward
// equality, and the pattern re-indexing diagram at m in {k, 2k}.
AuditReport audit_partization_basics(const HypothesisClass& cls, const ProbTemplate& mu,
                                     const ClassContext& ctx, const Limits& limits = {});

// Greedy partite cover -> transfer -> exact re-verification.
AuditReport audit_center_transfer(const HypothesisClass& cls, const ProbTemplate& mu,
                                  const LossTable& loss, const Rat& epsilon,
                                  const ClassContext& ctx);

}  // namespace vcnk
