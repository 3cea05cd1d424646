#include "vcnk/partization.hpp"

#include <algorithm>
#include <map>

namespace vcnk {

PartiteUniverse partize_universe(const Universe& uni, const ClassContext& ctx) {
    PartiteUniverse p;
    p.k = uni.k;
    p.coords = enumerate_subsets(uni.k, uni.k);
    p.sets.reserve(p.coords.size());
    for (const auto& a : p.coords) {
        p.sets.push_back(uni.ground_sets[a.size() - 1]);
    }
    p.labels.reserve(ctx.sym_count());
    for (int s = 0; s < ctx.sym_count(); ++s) p.labels.push_back(ctx.sym_name(s));
    return p;
}

PartiteProbTemplate partize_template(const ProbTemplate& mu, const Universe& uni) {
    PartiteProbTemplate p;
    for (const auto& a : enumerate_subsets(uni.k, uni.k)) {
        p.per_coord.push_back(mu.per_arity[a.size() - 1]);
    }
    return p;
}

ConfigPoint partite_to_config(const std::vector<int>& z, const ClassContext& ctx,
                              const PartiteContext& pctx) {
    const auto& ek = ctx.ek_index();
    ConfigPoint x;
    x.idx = ek;
    x.values.resize(ek->subsets.size());
    for (size_t c = 0; c < ek->subsets.size(); ++c) {
        const Subset& a = ek->subsets[c];
        std::vector<int> ones(a.size(), 1);
        std::uint64_t pos = pctx.fn_position(1, static_cast<int>(c), ones);
        x.values[c] = z.at(pos);
    }
    return x;
}

std::vector<int> config_to_partite_e1(const ConfigPoint& x, const ClassContext& ctx,
                                      const PartiteContext& pctx) {
    return config_to_partite(x, ctx, pctx);
}

std::vector<int> config_to_partite(const ConfigPoint& x, const ClassContext& ctx,
                                   const PartiteContext& pctx) {
    int k = ctx.universe().k;
    int m = x.idx->base_size;
    if (m < k) throw DomainError("block re-indexing needs m >= k");
    int q = m / k;
    auto fns = enumerate_partite_fns(k, q);
    const auto& domains = pctx.universe().coords;
    std::vector<int> out;
    out.reserve(fns.size());
    for (const auto& f : fns) {
        const Subset& dom = domains[f.coord];
        Subset image;
        image.reserve(dom.size());
        for (size_t t = 0; t < dom.size(); ++t) {
            image.push_back((dom[t] - 1) * q + f.values[t]);
        }
        std::sort(image.begin(), image.end());
        if (std::adjacent_find(image.begin(), image.end()) != image.end()) {
            throw IndexCollisionError("block re-indexing produced a repeated element");
        }
        int pos = x.idx->position(image);
        if (pos < 0) throw MissingPointError("block subset missing from source configuration");
        out.push_back(x.values[pos]);
    }
    return out;
}

Injection block_injection(const std::vector<int>& alpha, int m, int k) {
    int q = m / k;
    if (q < 1) throw DomainError("block injection needs m >= k");
    Injection beta(k);
    for (int i = 1; i <= k; ++i) {
        int a = alpha.at(i - 1);
        if (a < 1 || a > q) throw DomainError("tuple entry outside [floor(m/k)]");
        beta[i - 1] = (i - 1) * q + a;
    }
    return beta;
}

PartitePattern pattern_to_partite(const Pattern& y, int m, const ClassContext& ctx) {
    int k = ctx.universe().k;
    int q = m / k;
    if (q < 1) throw DomainError("pattern re-indexing needs m >= k");
    auto injections = enumerate_injections(m, k);
    std::map<Injection, int> index_of;
    for (size_t a = 0; a < injections.size(); ++a) index_of[injections[a]] = static_cast<int>(a);
    const auto& perms = ctx.permutations();

    PartitePattern out;
    auto tuples = enumerate_tuples(q, k);
    out.entries.reserve(tuples.size());
    std::vector<int> digits(perms.size());
    Injection composed(k);
    for (const auto& alpha : tuples) {
        Injection beta = block_injection(alpha, m, k);
        for (size_t t = 0; t < perms.size(); ++t) {
            for (int i = 0; i < k; ++i) composed[i] = beta[perms[t][i] - 1];
            digits[t] = y.entries[index_of.at(composed)];
        }
        out.entries.push_back(ctx.encode_sym(digits));
    }
    return out;
}

PartiteHypothesis partize_hypothesis(const Hypothesis& f, const ClassContext& ctx,
                                     const PartiteContext& pctx) {
    const Grid& e1 = pctx.e1_grid();
    auto sym = ctx.sym_table(f);
    PartiteHypothesis g;
    g.table.resize(e1.total);
    for (std::uint64_t i = 0; i < e1.total; ++i) {
        ConfigPoint x = partite_to_config(e1.decode(i), ctx, pctx);
        g.table[i] = sym[ctx.ek_grid().index_of(x.values)];
    }
    return g;
}

PartiteClass partize_class(const HypothesisClass& cls, const ClassContext& ctx,
                           const PartiteContext& pctx) {
    PartiteClass p;
    p.name = cls.name + "^part";
    p.members.reserve(cls.members.size());
    for (const auto& h : cls.members) p.members.push_back(partize_hypothesis(h, ctx, pctx));
    return p;
}

Hypothesis departize_hypothesis(const PartiteHypothesis& g, const ClassContext& ctx,
                                const PartiteContext& pctx) {
    const Grid& e1 = pctx.e1_grid();
    if (g.table.size() != e1.total) throw NotInImageError("partite table size mismatch");
    Hypothesis f;
    f.table.resize(ctx.ek_grid().total);
    for (std::uint64_t i = 0; i < e1.total; ++i) {
        ConfigPoint x = partite_to_config(e1.decode(i), ctx, pctx);
        int sym = g.table[i];
        if (sym < 0 || sym >= ctx.sym_count()) throw NotInImageError("value is not a sym label");
        f.table[ctx.ek_grid().index_of(x.values)] = ctx.decode_sym(sym)[0];
    }
    PartiteHypothesis check = partize_hypothesis(f, ctx, pctx);
    if (check.table != g.table) {
        throw NotInImageError("table is not the partization of any hypothesis");
    }
    return f;
}

LossTable partize_loss(const LossTable& loss, const ClassContext& ctx,
                       const PartiteContext& pctx) {
    if (loss.kind() == LossTable::Kind::ZeroOne) {
        return LossTable::zero_one(loss.label_count());
    }
    const Grid& e1 = pctx.e1_grid();
    std::vector<std::vector<Rat>> strata;
    strata.reserve(loss.stratum_count());
    for (int st = 0; st < loss.stratum_count(); ++st) strata.push_back(loss.stratum_matrix(st));
    // Re-key the stratum of each partite point through the index translation.
    std::vector<int> strata_map(e1.total);
    bool constant = true;
    for (std::uint64_t i = 0; i < e1.total; ++i) {
        ConfigPoint x = partite_to_config(e1.decode(i), ctx, pctx);
        strata_map[i] = loss.stratum_of(ctx.ek_grid().index_of(x.values));
        if (strata_map[i] != 0) constant = false;
    }
    if (constant && loss.stratum_count() == 1) {
        return LossTable::from_matrix(loss.label_count(), std::move(strata[0]));
    }
    return LossTable::from_strata(loss.label_count(), std::move(strata_map), std::move(strata));
}

AuditReport check_partization_loss_equality(const ProbTemplate& mu, const Hypothesis& f,
                                            const Hypothesis& h, const LossTable& loss,
                                            const ClassContext& ctx, const PartiteContext& pctx) {
    AuditReport rep;
    rep.audit = "kpart-loss";
    rep.claim = "total loss is preserved by partization";
    Rat lhs = total_loss(mu, f, loss, h, ctx);
    PartiteProbTemplate pmu = partize_template(mu, ctx.universe());
    LossTable ploss = partize_loss(loss, ctx, pctx);
    Rat rhs = total_loss_partite(pmu, partize_hypothesis(f, ctx, pctx), ploss,
                                 partize_hypothesis(h, ctx, pctx), pctx);
    rep.add("non_partite", lhs.str());
    rep.add("partite", rhs.str());
    if (lhs == rhs) {
        rep.verdict = AuditReport::Verdict::Verified;
    } else {
        rep.verdict = AuditReport::Verdict::Violated;
        rep.witnesses.push_back("losses differ: " + lhs.str() + " vs " + rhs.str());
    }
    return rep;
}

CenterSet transfer_centers(const CenterSet& partite_centers, const PartiteClass& pcls,
                           const PartiteProbTemplate& pmu, const LossTable& ploss,
                           const PartiteContext& pctx, const HypothesisClass& cls,
                           const ProbTemplate& mu, const LossTable& loss,
                           const ClassContext& ctx) {
    auto pmatrix = loss_matrix_partite(pcls, pmu, ploss, pctx);
    if (!is_valid_cover(partite_centers.centers, pmatrix, partite_centers.epsilon)) {
        throw InvalidCentersError("partite centers do not cover the partite class");
    }
    for (int c : partite_centers.centers) {
        if (c < 0 || c >= static_cast<int>(cls.members.size())) {
            throw InvalidCentersError("center index outside the class");
        }
    }
    CenterSet out;
    out.centers = partite_centers.centers;
    out.epsilon = partite_centers.epsilon;
    out.method = partite_centers.method;
    auto matrix = loss_matrix(cls, mu, loss, ctx);
    if (!is_valid_cover(out.centers, matrix, out.epsilon)) {
        throw InvalidCentersError("transferred centers fail to cover the class");
    }
    return out;
}

AuditReport audit_partization_basics(const HypothesisClass& cls, const ProbTemplate& mu,
                                     const ClassContext& ctx, const Limits& limits) {
    AuditReport rep;
    rep.audit = "kpart-basics";
    rep.claim = "index translation inverts the k-block map; block re-indexing is bijective on "
                "the coordinates it reads and preserves atom weights exactly; the pattern "
                "re-indexing diagram commutes at m in {k, 2k}";
    const Universe& uni = ctx.universe();
    int k = uni.k;
    PartiteContext pctx(partize_universe(uni, ctx), limits);

    // phi_k o iota = identity, both directions, over the full E_1 grid.
    const Grid& e1 = pctx.e1_grid();
    for (std::uint64_t i = 0; i < e1.total; ++i) {
        auto z = e1.decode(i);
        ConfigPoint x = partite_to_config(z, ctx, pctx);
        auto back = config_to_partite(x, ctx, pctx);
        if (back != z) {
            rep.verdict = AuditReport::Verdict::Violated;
            rep.witnesses.push_back("round trip failed at partite atom " + std::to_string(i));
            return rep;
        }
    }
    rep.add("e1_round_trips", std::to_string(e1.total));

    PartiteProbTemplate pmu = partize_template(mu, uni);
    for (int m : {k, 2 * k}) {
        int q = m / k;
        // Retained-coordinate bijectivity: distinct partite coordinates read
        // distinct subsets.
        auto fns = enumerate_partite_fns(k, q);
        std::vector<Subset> read;
        for (const auto& f : fns) {
            const Subset& dom = pctx.universe().coords[f.coord];
            Subset image;
            for (size_t t = 0; t < dom.size(); ++t) image.push_back((dom[t] - 1) * q + f.values[t]);
            std::sort(image.begin(), image.end());
            read.push_back(image);
        }
        auto sorted = read;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            rep.verdict = AuditReport::Verdict::Violated;
            rep.witnesses.push_back("two partite coordinates read the same subset at m=" +
                                    std::to_string(m));
            return rep;
        }

        // Exact pushforward equality per partite atom.
        auto em = make_index_set(m, k);
        ConfigRange range(em, uni, limits.max_points);
        Grid pgrid = pctx.em_grid(q);
        std::vector<Rat> pushed(pgrid.total, Rat(0));
        auto cw = coordinate_weights(mu, *em, uni);
        for (std::uint64_t i = 0; i < range.size(); ++i) {
            ConfigPoint x = range.at(i);
            Rat w = weight_at(cw, x.values);
            if (w.is_zero()) continue;
            pushed[pgrid.index_of(config_to_partite(x, ctx, pctx))] += w;
        }
        for (std::uint64_t i = 0; i < pgrid.total; ++i) {
            auto values = pgrid.decode(i);
            Rat expect(1);
            for (size_t c = 0; c < values.size(); ++c) {
                expect *= pmu.per_coord[fns[c].coord][values[c]];
            }
            if (pushed[i] != expect) {
                rep.verdict = AuditReport::Verdict::Violated;
                rep.witnesses.push_back("pushforward weight mismatch at partite atom " +
                                        std::to_string(i) + ", m=" + std::to_string(m));
                return rep;
            }
        }
        rep.add("pushforward_atoms_m" + std::to_string(m), std::to_string(pgrid.total));

        // Commuting diagram for every member and every atom.
        std::uint64_t diagram_checks = 0;
        for (const auto& h : cls.members) {
            PartiteHypothesis ph = partize_hypothesis(h, ctx, pctx);
            for (std::uint64_t i = 0; i < range.size(); ++i) {
                ConfigPoint x = range.at(i);
                Pattern y = star_pattern(h, m, x, ctx);
                PartitePattern lhs = pattern_to_partite(y, m, ctx);
                PartitePattern rhs = star_partite(ph, q, config_to_partite(x, ctx, pctx), pctx);
                if (!(lhs == rhs)) {
                    rep.verdict = AuditReport::Verdict::Violated;
                    rep.witnesses.push_back("diagram mismatch at atom " + std::to_string(i) +
                                            ", m=" + std::to_string(m));
                    return rep;
                }
                ++diagram_checks;
            }
        }
        rep.add("diagram_checks_m" + std::to_string(m), std::to_string(diagram_checks));
    }
    rep.verdict = AuditReport::Verdict::Verified;
    return rep;
}

AuditReport audit_center_transfer(const HypothesisClass& cls, const ProbTemplate& mu,
                                  const LossTable& loss, const Rat& epsilon,
                                  const ClassContext& ctx) {
    AuditReport rep;
    rep.audit = "hp-transfer";
    rep.claim = "departized partite centers cover the class at the same epsilon with the same "
                "cardinality";
    if (cls.members.empty()) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "empty class";
        return rep;
    }
    PartiteContext pctx(partize_universe(ctx.universe(), ctx), ctx.limits());
    PartiteClass pcls = partize_class(cls, ctx, pctx);
    PartiteProbTemplate pmu = partize_template(mu, ctx.universe());
    LossTable ploss = partize_loss(loss, ctx, pctx);

    auto pmatrix = loss_matrix_partite(pcls, pmu, ploss, pctx);
    CenterSet partite = greedy_centers_from_matrix(pmatrix, epsilon);
    CenterSet moved = transfer_centers(partite, pcls, pmu, ploss, pctx, cls, mu, loss, ctx);

    rep.add("partite_centers", std::to_string(partite.centers.size()));
    rep.add("transferred_centers", std::to_string(moved.centers.size()));
    rep.add("epsilon", epsilon.str());
    if (partite.centers.size() == moved.centers.size()) {
        rep.verdict = AuditReport::Verdict::Verified;
    } else {
        rep.verdict = AuditReport::Verdict::Violated;
        rep.witnesses.push_back("cardinality changed in transfer");
    }
    return rep;
}

}  // namespace vcnk
