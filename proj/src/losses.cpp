#include "vcnk/losses.hpp"

#include <algorithm>

namespace vcnk {

LossTable LossTable::zero_one(int label_count) {
    LossTable t;
    t.kind_ = Kind::ZeroOne;
    t.label_count_ = label_count;
    t.recompute();
    return t;
}

LossTable LossTable::from_matrix(int label_count, std::vector<Rat> matrix) {
    return from_strata(label_count, {}, {std::move(matrix)});
}

LossTable LossTable::from_strata(int label_count, std::vector<int> x_stratum,
                                 std::vector<std::vector<Rat>> strata) {
    LossTable t;
    t.kind_ = Kind::Table;
    t.label_count_ = label_count;
    t.x_stratum_ = std::move(x_stratum);
    t.strata_ = std::move(strata);
    if (t.strata_.empty()) throw DomainError("loss table needs at least one stratum");
    size_t cells = static_cast<size_t>(label_count) * label_count;
    for (const auto& s : t.strata_) {
        if (s.size() != cells) throw DomainError("loss matrix size mismatch");
        for (const auto& v : s) {
            if (v.is_negative()) throw DomainError("loss values must be non-negative");
        }
    }
    for (int st : t.x_stratum_) {
        if (st < 0 || st >= static_cast<int>(t.strata_.size())) {
            throw DomainError("x stratum out of range");
        }
    }
    t.recompute();
    return t;
}

Rat LossTable::value(std::uint64_t x_index, int y, int yp) const {
    if (kind_ == Kind::ZeroOne) return y != yp ? Rat(1) : Rat(0);
    return strata_[stratum_of(x_index)][static_cast<size_t>(y) * label_count_ + yp];
}

const std::vector<Rat>& LossTable::stratum_matrix(int stratum) const {
    if (kind_ == Kind::ZeroOne) throw DomainError("zero-one losses have no stored matrix");
    return strata_.at(stratum);
}

void LossTable::recompute() {
    if (kind_ == Kind::ZeroOne) {
        s_infinite_ = label_count_ < 2;
        s_ell_ = Rat(1);
        sup_norm_ = s_infinite_ ? Rat(0) : Rat(1);
        flags_ = {true, true, true};
        diag_zero_ = true;
        return;
    }
    bool have_distinct = false;
    bool diag_zero = true;
    Rat min_d(0), sup(0);
    for (const auto& s : strata_) {
        for (int y = 0; y < label_count_; ++y) {
            for (int yp = 0; yp < label_count_; ++yp) {
                const Rat& v = s[static_cast<size_t>(y) * label_count_ + yp];
                if (v > sup) sup = v;
                if (y == yp) {
                    if (!v.is_zero()) diag_zero = false;
                } else if (!have_distinct || v < min_d) {
                    have_distinct = true;
                    min_d = v;
                }
            }
        }
    }
    s_infinite_ = !have_distinct;
    s_ell_ = have_distinct ? min_d : Rat(1);
    sup_norm_ = sup;
    diag_zero_ = diag_zero;
    flags_.bounded = true;
    flags_.separated = diag_zero && (s_infinite_ || min_d > Rat(0));
    // Metric: symmetry, identity of indiscernibles, triangle, per stratum.
    bool metric = diag_zero && (s_infinite_ || min_d > Rat(0));
    for (const auto& s : strata_) {
        auto at = [&](int a, int b) -> const Rat& {
            return s[static_cast<size_t>(a) * label_count_ + b];
        };
        for (int y = 0; y < label_count_ && metric; ++y) {
            for (int yp = 0; yp < label_count_ && metric; ++yp) {
                if (at(y, yp) != at(yp, y)) metric = false;
                for (int ypp = 0; ypp < label_count_ && metric; ++ypp) {
                    if (at(y, ypp) > at(y, yp) + at(yp, ypp)) metric = false;
                }
            }
        }
        if (!metric) break;
    }
    flags_.metric = metric;
}

LossConstants loss_constants(const LossTable& loss) {
    LossConstants c;
    c.min_distinct = loss.min_distinct();
    c.min_distinct_is_infinite = loss.min_distinct_is_infinite();
    c.sup_norm = loss.sup_norm();
    c.flags = loss.flags();
    return c;
}

Rat total_loss(const ProbTemplate& mu, const Hypothesis& f, const LossTable& loss,
               const Hypothesis& h, const ClassContext& ctx) {
    auto sym_f = ctx.sym_table(f);
    auto sym_h = ctx.sym_table(h);
    auto cw = coordinate_weights(mu, *ctx.ek_index(), ctx.universe());
    const Grid& g = ctx.ek_grid();
    Rat acc(0);
    for (std::uint64_t i = 0; i < g.total; ++i) {
        Rat w = weight_at(cw, g.decode(i));
        if (w.is_zero()) continue;
        acc += w * loss.value(i, sym_h[i], sym_f[i]);
    }
    return acc;
}

Rat disagreement_mass(const ProbTemplate& mu, const Hypothesis& f, const Hypothesis& h,
                      const ClassContext& ctx) {
    auto sym_f = ctx.sym_table(f);
    auto sym_h = ctx.sym_table(h);
    auto cw = coordinate_weights(mu, *ctx.ek_index(), ctx.universe());
    const Grid& g = ctx.ek_grid();
    Rat acc(0);
    for (std::uint64_t i = 0; i < g.total; ++i) {
        if (sym_f[i] == sym_h[i]) continue;
        acc += weight_at(cw, g.decode(i));
    }
    return acc;
}

std::vector<std::vector<Rat>> loss_matrix(const HypothesisClass& cls, const ProbTemplate& mu,
                                          const LossTable& loss, const ClassContext& ctx) {
    size_t n = cls.members.size();
    std::vector<std::vector<int>> sym;
    sym.reserve(n);
    for (const auto& h : cls.members) sym.push_back(ctx.sym_table(h));
    auto cw = coordinate_weights(mu, *ctx.ek_index(), ctx.universe());
    const Grid& g = ctx.ek_grid();
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n, Rat(0)));
    for (std::uint64_t i = 0; i < g.total; ++i) {
        Rat w = weight_at(cw, g.decode(i));
        if (w.is_zero()) continue;
        for (size_t target = 0; target < n; ++target) {
            for (size_t cand = 0; cand < n; ++cand) {
                Rat v = loss.value(i, sym[cand][i], sym[target][i]);
                if (!v.is_zero()) m[target][cand] += w * v;
            }
        }
    }
    return m;
}

bool is_realizable(const Hypothesis& f, const HypothesisClass& cls, const LossTable& loss,
                   const ProbTemplate& mu, const ClassContext& ctx) {
    for (const auto& h : cls.members) {
        if (total_loss(mu, f, loss, h, ctx).is_zero()) return true;
    }
    return false;  // inf over the empty class is +infinity
}

AuditReport check_almost_metric(const ProbTemplate& mu, const LossTable& loss,
                                const HypothesisClass& cls, const ClassContext& ctx) {
    AuditReport rep;
    rep.audit = "almost-metric";
    rep.claim =
        "s*M(F,H) <= L(F,H) <= sup*M(F,H) for all pairs; for separated losses also "
        "L(F,F') <= (sup/s)*(L(F,H)+L(F',H)) for all triples";

    // The sandwich upper bound needs a vanishing diagonal.
    if (!loss.diagonal_is_zero()) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "loss has a non-zero diagonal entry; sandwich upper bound does not apply";
        return rep;
    }

    size_t n = cls.members.size();
    auto lm = loss_matrix(cls, mu, loss, ctx);
    std::vector<std::vector<Rat>> mass(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            mass[i][j] = disagreement_mass(mu, cls.members[i], cls.members[j], ctx);
        }
    }

    const Rat& s = loss.min_distinct();
    const Rat& sup = loss.sup_norm();
    std::uint64_t pair_checks = 0, triple_checks = 0;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            const Rat& L = lm[i][j];
            const Rat& M = mass[i][j];
            Rat lower = loss.min_distinct_is_infinite() ? Rat(0) : s * M;
            if (!(lower <= L && L <= sup * M)) {
                rep.verdict = AuditReport::Verdict::Violated;
                rep.witnesses.push_back("pair (F=" + std::to_string(i) + ",H=" + std::to_string(j) +
                                        "): L=" + L.str() + " M=" + M.str());
                rep.add("pairs_checked", std::to_string(pair_checks));
                return rep;
            }
            ++pair_checks;
        }
    }
    if (loss.flags().separated) {
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                for (size_t h = 0; h < n; ++h) {
                    bool ok;
                    if (loss.min_distinct_is_infinite()) {
                        ok = lm[i][j].is_zero();  // single label value: all losses vanish
                    } else {
                        ok = lm[i][j] <= (sup / s) * (lm[i][h] + lm[j][h]);
                    }
                    if (!ok) {
                        rep.verdict = AuditReport::Verdict::Violated;
                        rep.witnesses.push_back("triple (F=" + std::to_string(i) +
                                                ",F'=" + std::to_string(j) +
                                                ",H=" + std::to_string(h) + ")");
                        return rep;
                    }
                    ++triple_checks;
                }
            }
        }
    }
    rep.verdict = AuditReport::Verdict::Verified;
    rep.add("pairs_checked", std::to_string(pair_checks));
    rep.add("triples_checked", std::to_string(triple_checks));
    rep.add("s", loss.min_distinct_is_infinite() ? "+inf" : s.str());
    rep.add("sup", sup.str());
    return rep;
}

}  // namespace vcnk
