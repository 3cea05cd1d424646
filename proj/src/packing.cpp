#include "vcnk/packing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace vcnk {

double binary_entropy(double t) {
    if (t < 0.0 || t > 1.0) throw DomainError("binary entropy argument outside [0,1]");
    if (t == 0.0 || t == 1.0) return 0.0;
    return t * std::log2(1.0 / t) + (1.0 - t) * std::log2(1.0 / (1.0 - t));
}

bool is_valid_cover(const std::vector<int>& centers, const std::vector<std::vector<Rat>>& losses,
                    const Rat& epsilon) {
    for (size_t i = 0; i < losses.size(); ++i) {
        bool covered = false;
        for (int c : centers) {
            if (losses[i][c] <= epsilon) {
                covered = true;
                break;
            }
        }
        if (!covered) return false;
    }
    return true;
}

CenterSet greedy_centers_from_matrix(const std::vector<std::vector<Rat>>& losses,
                                     const Rat& epsilon) {
    size_t n = losses.size();
    CenterSet cs;
    cs.epsilon = epsilon;
    cs.method = CenterSet::Method::Greedy;
    std::vector<char> covered(n, 0);
    while (true) {
        size_t first = n;
        for (size_t i = 0; i < n; ++i) {
            if (!covered[i]) {
                first = i;
                break;
            }
        }
        if (first == n) break;
        if (std::find(cs.centers.begin(), cs.centers.end(), static_cast<int>(first)) !=
            cs.centers.end()) {
            throw InvalidCentersError("member " + std::to_string(first) +
                                      " cannot be covered by any member");
        }
        cs.centers.push_back(static_cast<int>(first));
        for (size_t i = 0; i < n; ++i) {
            if (!covered[i] && losses[i][first] <= epsilon) covered[i] = 1;
        }
    }
    return cs;
}

namespace {

struct SetCoverSolver {
    std::uint32_t full;
    const std::vector<std::uint32_t>& masks;
    int best;

    SetCoverSolver(std::uint32_t full_mask, const std::vector<std::uint32_t>& cover_masks,
                   int upper)
        : full(full_mask), masks(cover_masks), best(upper) {}

    void dfs(std::uint32_t covered, int used) {
        if (covered == full) {
            best = std::min(best, used);
            return;
        }
        if (used + 1 >= best) return;
        std::uint32_t remaining = full & ~covered;
        int max_gain = 0;
        for (auto m : masks) max_gain = std::max(max_gain, std::popcount(m & remaining));
        if (max_gain == 0) return;  // uncoverable under current masks
        int lower = (std::popcount(remaining) + max_gain - 1) / max_gain;
        if (used + lower >= best) return;
        // Branch on the uncovered element with the fewest covering sets.
        int pick = -1, options = 1 << 30;
        for (int e = 0; e < 32; ++e) {
            if (!(remaining & (1u << e))) continue;
            int cnt = 0;
            for (auto m : masks) {
                if (m & (1u << e)) ++cnt;
            }
            if (cnt < options) {
                options = cnt;
                pick = e;
            }
        }
        if (pick < 0 || options == 0) return;
        for (size_t j = 0; j < masks.size(); ++j) {
            if (masks[j] & (1u << pick)) dfs(covered | masks[j], used + 1);
        }
    }
};

std::vector<std::uint32_t> cover_masks(const std::vector<std::vector<Rat>>& losses,
                                       const Rat& epsilon) {
    size_t n = losses.size();
    std::vector<std::uint32_t> masks(n, 0);
    for (size_t j = 0; j < n; ++j) {
        for (size_t i = 0; i < n; ++i) {
            if (losses[i][j] <= epsilon) masks[j] |= 1u << i;
        }
    }
    return masks;
}

}  // namespace

int optimal_cover_size_from_matrix(const std::vector<std::vector<Rat>>& losses, const Rat& epsilon,
                                   const Limits& limits) {
    int n = static_cast<int>(losses.size());
    if (n == 0) return 0;
    if (n > limits.max_cover_class || n > 31) {
        throw ExplosionGuardError("class too large for exact set cover");
    }
    auto masks = cover_masks(losses, epsilon);
    std::uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    std::uint32_t reachable = 0;
    for (auto m : masks) reachable |= m;
    if (reachable != full) {
        throw InvalidCentersError("some member cannot be covered by any member");
    }
    CenterSet greedy = greedy_centers_from_matrix(losses, epsilon);
    SetCoverSolver solver(full, masks, static_cast<int>(greedy.centers.size()));
    solver.dfs(0, 0);
    return solver.best;
}

int separated_subset_from_matrix(const std::vector<std::vector<Rat>>& losses, const Rat& epsilon) {
    std::vector<int> kept;
    for (size_t i = 0; i < losses.size(); ++i) {
        bool far = true;
        for (int j : kept) {
            if (losses[i][j] <= epsilon || losses[j][i] <= epsilon) {
                far = false;
                break;
            }
        }
        if (far) kept.push_back(static_cast<int>(i));
    }
    return static_cast<int>(kept.size());
}

CenterSet greedy_centers(const HypothesisClass& cls, const ProbTemplate& mu,
                         const LossTable& loss, const Rat& epsilon, const ClassContext& ctx) {
    auto cs = greedy_centers_from_matrix(loss_matrix(cls, mu, loss, ctx), epsilon);
    return cs;
}

int optimal_cover_size(const HypothesisClass& cls, const ProbTemplate& mu, const LossTable& loss,
                       const Rat& epsilon, const ClassContext& ctx, const Limits& limits) {
    return optimal_cover_size_from_matrix(loss_matrix(cls, mu, loss, ctx), epsilon, limits);
}

int separated_subset_size(const HypothesisClass& cls, const ProbTemplate& mu,
                          const LossTable& loss, const Rat& epsilon, const ClassContext& ctx) {
    return separated_subset_from_matrix(loss_matrix(cls, mu, loss, ctx), epsilon);
}

namespace {

// Exact binomial sum: sum_{i <= t} binom(n, i).
BigInt hamming_ball_volume(int n, int t) {
    BigInt sum(0), binom(1);
    for (int i = 0; i <= std::min(t, n); ++i) {
        sum += binom;
        binom = binom * (n - i) / (i + 1);
    }
    return sum;
}

}  // namespace

AuditReport check_cover_bound(const std::vector<std::uint32_t>& cover, int n, const Rat& c,
                              const Limits& limits) {
    (void)limits;
    AuditReport rep;
    rep.audit = "cover-bound";
    rep.claim = "radius-cn cover of the n-cube has n <= log2|C| / (1 - h2(c)); "
                "ball volume sum_{i<=cn} binom(n,i) <= 2^(h2(c)n)";
    if (!(c > Rat(0) && c < Rat(BigInt(1), BigInt(2)))) {
        throw DomainError("cover bound requires c in (0, 1/2)");
    }
    if (n < 0 || n > 20) throw ExplosionGuardError("cover precondition check limited to n <= 20");
    std::uint64_t space = 1ull << n;
    // The collection size in the bound counts distinct sets.
    std::vector<std::uint32_t> sets = cover;
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    for (std::uint32_t v : sets) {
        if (v >= space) throw DomainError("cover set outside the power set of [n]");
    }
    Rat radius = c * Rat(n);
    for (std::uint64_t u = 0; u < space; ++u) {
        bool near = false;
        for (std::uint32_t v : sets) {
            int dist = std::popcount(static_cast<std::uint32_t>(u) ^ v);
            if (Rat(dist) <= radius) {
                near = true;
                break;
            }
        }
        if (!near) {
            throw NotACoverError("subset with mask " + std::to_string(u) +
                                 " has no cover set within radius " + radius.str());
        }
    }

    double h = binary_entropy(c.to_double());
    double rhs = std::log2(static_cast<double>(sets.size())) / (1.0 - h);
    rep.add("n", std::to_string(n));
    rep.add("cover_size", std::to_string(sets.size()));
    rep.add("c", c.str());
    rep.add("h2_c", format_double(h));
    rep.add("log2_bound", format_double(rhs));

    bool main_ok = static_cast<double>(n) <= rhs + 1e-9;

    int t = static_cast<int>(radius.floor().convert_to<long long>());
    BigInt volume = hamming_ball_volume(n, t);
    double lhs_log = std::log2(volume.convert_to<double>());
    double rhs_log = h * static_cast<double>(n);
    rep.add("ball_volume", volume.str());
    rep.add("volume_log2", format_double(lhs_log));
    rep.add("entropy_exponent", format_double(rhs_log));
    bool volume_ok = lhs_log <= rhs_log + 1e-9;

    if (main_ok && volume_ok) {
        rep.verdict = AuditReport::Verdict::Verified;
    } else {
        rep.verdict = AuditReport::Verdict::Violated;
        if (!main_ok) rep.witnesses.push_back("cover bound: n > log2|C|/(1-h2(c))");
        if (!volume_ok) rep.witnesses.push_back("ball volume exceeds entropy bound");
    }
    return rep;
}

ProbTemplate adversarial_template(const ConfigPoint& anchor, const std::vector<int>& v_elements,
                                  const Universe& uni) {
    if (v_elements.empty()) throw DomainError("adversarial measure needs a non-empty set V");
    for (size_t i = 0; i < v_elements.size(); ++i) {
        if (v_elements[i] < 0 || v_elements[i] >= uni.ground_size(1)) {
            throw DomainError("V element outside X_1");
        }
        for (size_t j = i + 1; j < v_elements.size(); ++j) {
            if (v_elements[i] == v_elements[j]) throw DomainError("V elements must be distinct");
        }
    }
    int k = uni.k;
    ProbTemplate mu;
    std::vector<Rat> w1(uni.ground_size(1), Rat(0));
    Rat per_v = Rat(BigInt(1), BigInt(static_cast<long long>(k) * v_elements.size()));
    for (int v : v_elements) w1[v] += per_v;
    for (int j = 1; j <= k - 1; ++j) {
        Subset singleton{j};
        int pos = anchor.idx->position(singleton);
        if (pos < 0) throw MissingPointError("anchor misses singleton coordinate");
        w1[anchor.values[pos]] += Rat(BigInt(1), BigInt(k));
    }
    mu.per_arity.push_back(std::move(w1));
    for (int arity = 2; arity <= k; ++arity) {
        int sz = uni.ground_size(arity);
        mu.per_arity.emplace_back(sz, Rat(BigInt(1), BigInt(sz)));
    }
    mu.validate(uni);
    return mu;
}

namespace {

// log2(N)/(1 - h2(threshold)) with the audit slack applied in the claim's favor.
bool packing_length_bound_holds(int n, int cover_size, double threshold) {
    double rhs = std::log2(static_cast<double>(cover_size)) / (1.0 - binary_entropy(threshold));
    return static_cast<double>(n) <= rhs + 1e-9;
}

std::uint64_t factorial(int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

std::uint64_t int_pow(std::uint64_t b, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

AuditReport audit_hp_to_vcnk(const HypothesisClass& cls, const LossTable& loss, const Rat& epsilon,
                             const ClassContext& ctx, const Limits& limits) {
    AuditReport rep;
    rep.audit = "hp-to-vcnk";
    rep.claim = "for each shattered slice set V under the adversarial measure, the exact "
                "optimal cover size N satisfies |V| <= log2(N)/(1-h2(eps*k^k/(s*k!)))";
    if (!loss.flags().separated) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "loss is not separated";
        return rep;
    }
    const Universe& uni = ctx.universe();
    int k = uni.k;
    if (class_rank(cls, ctx) > 1) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "class rank exceeds 1";
        return rep;
    }
    if (cls.members.empty()) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "empty class";
        return rep;
    }
    Rat s = loss.min_distinct_is_infinite() ? Rat(1) : loss.min_distinct();
    Rat kk(static_cast<long long>(int_pow(static_cast<std::uint64_t>(k), k)));
    Rat kfact(static_cast<long long>(factorial(k)));
    Rat eps_cap = s * kfact / (Rat(2) * kk);
    if (eps_cap > Rat(1)) eps_cap = Rat(1);
    if (!(epsilon > Rat(0) && epsilon < eps_cap)) {
        throw DomainError("epsilon outside (0, min(s*k!/(2k^k), 1))");
    }
    Rat threshold = epsilon * kk / (s * kfact);

    auto anchors = make_index_set(k - 1, k);
    ConfigRange range(anchors, uni, limits.max_points);
    int audited = 0;
    for (std::uint64_t ai = 0; ai < range.size(); ++ai) {
        ConfigPoint anchor = range.at(ai);
        Slice sl = slice_at_anchor(cls, anchor, ctx);
        DimResult dim = natarajan_dimension(sl.family, limits);
        if (!dim.value || *dim.value < 1) continue;
        const ShatteringWitness& w = *dim.witness;
        int n = static_cast<int>(w.points.size());

        // Project the shattered residual points onto the {k} coordinate.
        std::vector<int> residual_sizes;
        for (int c : sl.residual_positions) residual_sizes.push_back(ctx.ek_grid().sizes[c]);
        Grid rgrid = Grid::over(residual_sizes, limits.max_points);
        int k_coord = -1;
        for (size_t r = 0; r < sl.residual_positions.size(); ++r) {
            if (ctx.ek_index()->subsets[sl.residual_positions[r]] == Subset{k}) {
                k_coord = static_cast<int>(r);
            }
        }
        if (k_coord < 0) throw MissingPointError("residual coordinates miss {k}");
        std::vector<int> v_elems;
        for (int p : w.points) v_elems.push_back(rgrid.decode(p)[k_coord]);
        std::sort(v_elems.begin(), v_elems.end());
        if (std::adjacent_find(v_elems.begin(), v_elems.end()) != v_elems.end()) {
            rep.verdict = AuditReport::Verdict::Violated;
            rep.witnesses.push_back("rank<=1 shattered set projects onto repeated X_1 elements");
            return rep;
        }

        ProbTemplate mu = adversarial_template(anchor, v_elems, uni);
        auto matrix = loss_matrix(cls, mu, loss, ctx);
        int cover = optimal_cover_size_from_matrix(matrix, epsilon, limits);
        if (!packing_length_bound_holds(n, cover, threshold.to_double())) {
            rep.verdict = AuditReport::Verdict::Violated;
            rep.witnesses.push_back("anchor #" + std::to_string(ai) + ": n=" + std::to_string(n) +
                                    " cover=" + std::to_string(cover));
            return rep;
        }

        // Per-pair loss lower bound through the shattered selectors.
        Rat factor = s * kfact / (kk * Rat(n));
        std::uint64_t subset_count = 1ull << n;
        for (std::uint64_t u = 0; u < subset_count; ++u) {
            for (std::uint64_t up = 0; up < subset_count; ++up) {
                int fu = w.selectors[u];
                int fup = w.selectors[up];
                int mi = sl.family.source_member[fu];
                int mj = sl.family.source_member[fup];
                int dprime = 0;
                for (int p : w.points) {
                    if (sl.family.functions[fu][p] != sl.family.functions[fup][p]) ++dprime;
                }
                if (matrix[mi][mj] < factor * Rat(dprime)) {
                    rep.verdict = AuditReport::Verdict::Violated;
                    rep.witnesses.push_back("loss lower bound fails at anchor #" +
                                            std::to_string(ai) + " pair (" + std::to_string(u) +
                                            "," + std::to_string(up) + ")");
                    return rep;
                }
            }
        }
        ++audited;
        if (audited <= 4) {
            rep.add("anchor_" + std::to_string(ai),
                    "n=" + std::to_string(n) + " cover=" + std::to_string(cover));
        }
    }
    rep.add("threshold", threshold.str());
    rep.add("epsilon", epsilon.str());
    rep.add("shattered_slices_audited", std::to_string(audited));
    rep.verdict = audited > 0 ? AuditReport::Verdict::Verified : AuditReport::Verdict::Vacuous;
    if (audited == 0) rep.note = "no anchor slice shatters a non-empty set";
    return rep;
}

AuditReport audit_hp_to_vcnk_partite(const PartiteClass& cls, const LossTable& loss,
                                     const Rat& epsilon, const PartiteContext& ctx,
                                     const Limits& limits) {
    AuditReport rep;
    rep.audit = "hp-to-vcnk-partite";
    rep.claim = "partite variant: exact optimal cover size N under the adversarial partite "
                "template satisfies |V| <= log2(N)/(1-h2(eps/s))";
    if (!loss.flags().separated) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "loss is not separated";
        return rep;
    }
    if (partite_class_rank(cls, ctx) > 1) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "class rank exceeds 1";
        return rep;
    }
    if (cls.members.empty()) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "empty class";
        return rep;
    }
    const PartiteUniverse& uni = ctx.universe();
    Rat s = loss.min_distinct_is_infinite() ? Rat(1) : loss.min_distinct();
    Rat eps_cap = s / Rat(2);
    if (eps_cap > Rat(1)) eps_cap = Rat(1);
    if (!(epsilon > Rat(0) && epsilon < eps_cap)) {
        throw DomainError("epsilon outside (0, min(s/2, 1))");
    }
    Rat threshold = epsilon / s;

    std::vector<std::vector<int>> tables;
    for (const auto& h : cls.members) tables.push_back(h.table);

    int audited = 0;
    for (int a = 1; a <= uni.k; ++a) {
        std::vector<int> fixed_positions, residual_positions;
        for (size_t c = 0; c < uni.coords.size(); ++c) {
            bool contains_a =
                std::find(uni.coords[c].begin(), uni.coords[c].end(), a) != uni.coords[c].end();
            (contains_a ? residual_positions : fixed_positions).push_back(static_cast<int>(c));
        }
        int a_coord = -1;  // index of the singleton {a} inside the residual ordering
        std::vector<int> residual_sizes;
        for (size_t r = 0; r < residual_positions.size(); ++r) {
            residual_sizes.push_back(ctx.e1_grid().sizes[residual_positions[r]]);
            if (uni.coords[residual_positions[r]] == Subset{a}) a_coord = static_cast<int>(r);
        }
        if (a_coord < 0) throw MissingPointError("partite residual misses singleton coordinate");
        Grid rgrid = Grid::over(residual_sizes, limits.max_points);

        std::vector<int> anchor_sizes;
        for (int c : fixed_positions) anchor_sizes.push_back(ctx.e1_grid().sizes[c]);
        Grid agrid = Grid::over(anchor_sizes, limits.max_points);
        for (std::uint64_t ai = 0; ai < agrid.total; ++ai) {
            auto anchor_values = agrid.decode(ai);
            FunctionFamily fam =
                slice_tables(tables, ctx.e1_grid(), fixed_positions, anchor_values);
            DimResult dim = natarajan_dimension(fam, limits);
            if (!dim.value || *dim.value < 1) continue;
            const ShatteringWitness& w = *dim.witness;
            int n = static_cast<int>(w.points.size());

            std::vector<int> v_elems;
            for (int p : w.points) v_elems.push_back(rgrid.decode(p)[a_coord]);
            std::sort(v_elems.begin(), v_elems.end());
            if (std::adjacent_find(v_elems.begin(), v_elems.end()) != v_elems.end()) {
                rep.verdict = AuditReport::Verdict::Violated;
                rep.witnesses.push_back("partite shattered set repeats singleton values");
                return rep;
            }

            PartiteProbTemplate mu;
            mu.per_coord.resize(uni.coords.size());
            for (size_t f = 0; f < fixed_positions.size(); ++f) {
                std::vector<Rat> wts(uni.set_size(fixed_positions[f]), Rat(0));
                wts[anchor_values[f]] = Rat(1);
                mu.per_coord[fixed_positions[f]] = std::move(wts);
            }
            for (size_t r = 0; r < residual_positions.size(); ++r) {
                int c = residual_positions[r];
                std::vector<Rat> wts(uni.set_size(c), Rat(0));
                if (static_cast<int>(r) == a_coord) {
                    Rat per_v(BigInt(1), BigInt(static_cast<long long>(v_elems.size())));
                    for (int v : v_elems) wts[v] = per_v;
                } else {
                    wts[0] = Rat(1);  // the fixed point x'
                }
                mu.per_coord[c] = std::move(wts);
            }
            mu.validate(uni);

            auto matrix = loss_matrix_partite(cls, mu, loss, ctx);
            int cover = optimal_cover_size_from_matrix(matrix, epsilon, limits);
            if (!packing_length_bound_holds(n, cover, threshold.to_double())) {
                rep.verdict = AuditReport::Verdict::Violated;
                rep.witnesses.push_back("side " + std::to_string(a) + " anchor #" +
                                        std::to_string(ai) + ": n=" + std::to_string(n) +
                                        " cover=" + std::to_string(cover));
                return rep;
            }

            Rat factor = s / Rat(n);
            std::uint64_t subset_count = 1ull << n;
            for (std::uint64_t u = 0; u < subset_count; ++u) {
                for (std::uint64_t up = 0; up < subset_count; ++up) {
                    int fu = w.selectors[u];
                    int fup = w.selectors[up];
                    int dprime = 0;
                    for (int p : w.points) {
                        if (fam.functions[fu][p] != fam.functions[fup][p]) ++dprime;
                    }
                    int mi = fam.source_member[fu];
                    int mj = fam.source_member[fup];
                    if (matrix[mi][mj] < factor * Rat(dprime)) {
                        rep.verdict = AuditReport::Verdict::Violated;
                        rep.witnesses.push_back("partite loss lower bound fails, side " +
                                                std::to_string(a));
                        return rep;
                    }
                }
            }
            ++audited;
        }
    }
    rep.add("threshold", threshold.str());
    rep.add("epsilon", epsilon.str());
    rep.add("shattered_slices_audited", std::to_string(audited));
    rep.verdict = audited > 0 ? AuditReport::Verdict::Verified : AuditReport::Verdict::Vacuous;
    if (audited == 0) rep.note = "no partite slice shatters a non-empty set";
    return rep;
}

}  // namespace vcnk
