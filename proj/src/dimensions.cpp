#include "vcnk/dimensions.hpp"

#include <algorithm>
#include <map>

namespace vcnk {

FunctionFamily FunctionFamily::from_tables(int domain_size,
                                           const std::vector<std::vector<int>>& tables) {
    FunctionFamily fam;
    fam.domain_size = domain_size;
    for (size_t m = 0; m < tables.size(); ++m) {
        bool seen = false;
        for (const auto& f : fam.functions) {
            if (f == tables[m]) {
                seen = true;
                break;
            }
        }
        if (!seen) {
            fam.functions.push_back(tables[m]);
            fam.source_member.push_back(static_cast<int>(m));
        }
    }
    return fam;
}

bool witness_is_valid(const FunctionFamily& fam, const ShatteringWitness& w) {
    size_t n = w.points.size();
    if (w.f0.size() != n || w.f1.size() != n) return false;
    if (w.selectors.size() != (1ull << n)) return false;
    for (size_t i = 0; i < n; ++i) {
        if (w.f0[i] == w.f1[i]) return false;
    }
    for (std::uint64_t u = 0; u < (1ull << n); ++u) {
        int fi = w.selectors[u];
        if (fi < 0 || fi >= static_cast<int>(fam.functions.size())) return false;
        for (size_t i = 0; i < n; ++i) {
            int want = (u >> i) & 1 ? w.f1[i] : w.f0[i];
            if (fam.functions[fi][w.points[i]] != want) return false;
        }
    }
    return true;
}

namespace {

struct ShatterSearch {
    const FunctionFamily& fam;
    const std::vector<int>& points;
    std::uint64_t needed;
    std::vector<int> v0, v1;  // chosen pair per decided point
    std::vector<std::vector<int>> candidates;  // realized values passing the count filter

    explicit ShatterSearch(const FunctionFamily& f, const std::vector<int>& a)
        : fam(f), points(a), needed(1ull << a.size()) {}

    std::optional<ShatteringWitness> run() {
        size_t n = points.size();
        // A candidate value at a point must be shared by at least 2^(n-1)
        // functions: every selection pattern fixing that point needs its own
        // realizing function.
        std::uint64_t half = needed >> 1;
        candidates.resize(n);
        for (size_t i = 0; i < n; ++i) {
            std::map<int, std::uint64_t> counts;
            for (const auto& f : fam.functions) ++counts[f[points[i]]];
            for (const auto& [value, count] : counts) {
                if (count >= half) candidates[i].push_back(value);
            }
            if (candidates[i].size() < 2) return std::nullopt;
        }
        v0.assign(n, 0);
        v1.assign(n, 0);
        std::vector<std::uint32_t> bits(fam.functions.size(), 0);
        std::vector<char> alive(fam.functions.size(), 1);
        return descend(0, bits, alive, static_cast<std::uint64_t>(fam.functions.size()));
    }

    std::optional<ShatteringWitness> descend(size_t level, const std::vector<std::uint32_t>& bits,
                                             const std::vector<char>& alive,
                                             std::uint64_t alive_count) {
        if (alive_count < needed) return std::nullopt;
        size_t n = points.size();
        if (level == n) return collect(bits, alive);
        int p = points[level];
        for (int a : candidates[level]) {
            for (int b : candidates[level]) {
                if (a == b) continue;
                v0[level] = a;
                v1[level] = b;
                auto next_bits = bits;
                auto next_alive = alive;
                std::uint64_t next_count = alive_count;
                for (size_t f = 0; f < fam.functions.size(); ++f) {
                    if (!next_alive[f]) continue;
                    int val = fam.functions[f][p];
                    if (val == b) {
                        next_bits[f] |= 1u << level;
                    } else if (val != a) {
                        next_alive[f] = 0;
                        --next_count;
                    }
                }
                if (auto w = descend(level + 1, next_bits, next_alive, next_count)) return w;
            }
        }
        return std::nullopt;
    }

    std::optional<ShatteringWitness> collect(const std::vector<std::uint32_t>& bits,
                                             const std::vector<char>& alive) {
        std::vector<int> selector(needed, -1);
        std::uint64_t found = 0;
        for (size_t f = 0; f < fam.functions.size() && found < needed; ++f) {
            if (!alive[f]) continue;
            if (selector[bits[f]] < 0) {
                selector[bits[f]] = static_cast<int>(f);
                ++found;
            }
        }
        if (found < needed) return std::nullopt;
        ShatteringWitness w;
        w.points = points;
        w.f0 = v0;
        w.f1 = v1;
        w.selectors = std::move(selector);
        return w;
    }
};

}  // namespace

std::optional<ShatteringWitness> natarajan_shatters(const FunctionFamily& fam,
                                                    const std::vector<int>& a_points,
                                                    const Limits& limits) {
    if (static_cast<int>(a_points.size()) > limits.max_shatter_points) {
        throw ExplosionGuardError("shattering set larger than the configured cap");
    }
    for (int p : a_points) {
        if (p < 0 || p >= fam.domain_size) throw DomainError("shattering point out of domain");
    }
    if (fam.functions.empty()) return std::nullopt;
    if (a_points.empty()) {
        ShatteringWitness w;
        w.selectors = {0};
        return w;
    }
    if ((1ull << a_points.size()) > fam.functions.size()) return std::nullopt;
    ShatterSearch search(fam, a_points);
    return search.run();
}

namespace {

// Enumerate size-s combinations of `pool` in lexicographic order.
template <typename Fn>
bool for_each_combination(const std::vector<int>& pool, int s, Fn&& fn) {
    std::vector<int> pick(s);
    int n = static_cast<int>(pool.size());
    std::vector<int> at(s);
    for (int i = 0; i < s; ++i) at[i] = i;
    if (s > n) return false;
    while (true) {
        for (int i = 0; i < s; ++i) pick[i] = pool[at[i]];
        if (fn(pick)) return true;
        int i = s - 1;
        while (i >= 0 && at[i] == n - (s - i)) --i;
        if (i < 0) return false;
        ++at[i];
        for (int j = i + 1; j < s; ++j) at[j] = at[j - 1] + 1;
    }
}

}  // namespace

DimResult natarajan_dimension(const FunctionFamily& fam, const Limits& limits) {
    DimResult res;
    if (fam.functions.empty()) return res;  // -infinity
    std::vector<int> usable;
    for (int p = 0; p < fam.domain_size; ++p) {
        int first = fam.functions[0][p];
        for (const auto& f : fam.functions) {
            if (f[p] != first) {
                usable.push_back(p);
                break;
            }
        }
    }
    int s_max = 0;
    while ((1ull << (s_max + 1)) <= fam.functions.size()) ++s_max;
    s_max = std::min(s_max, static_cast<int>(usable.size()));
    if (s_max > limits.max_shatter_points) {
        throw ExplosionGuardError("candidate shattering size exceeds cap");
    }
    for (int s = s_max; s >= 1; --s) {
        std::optional<ShatteringWitness> found;
        for_each_combination(usable, s, [&](const std::vector<int>& a) {
            found = natarajan_shatters(fam, a, limits);
            return found.has_value();
        });
        if (found) {
            res.value = s;
            res.witness = std::move(found);
            return res;
        }
    }
    res.value = 0;
    ShatteringWitness empty;
    empty.selectors = {0};
    res.witness = empty;
    return res;
}

FunctionFamily slice_tables(const std::vector<std::vector<int>>& tables, const Grid& full,
                            const std::vector<int>& fixed_positions,
                            const std::vector<int>& fixed_values) {
    std::vector<char> is_fixed(full.sizes.size(), 0);
    for (int p : fixed_positions) is_fixed[p] = 1;
    std::vector<int> residual;
    for (size_t c = 0; c < full.sizes.size(); ++c) {
        if (!is_fixed[c]) residual.push_back(static_cast<int>(c));
    }
    std::uint64_t base = 0;
    for (size_t i = 0; i < fixed_positions.size(); ++i) {
        base += static_cast<std::uint64_t>(fixed_values[i]) * full.strides[fixed_positions[i]];
    }
    std::vector<int> residual_sizes;
    for (int c : residual) residual_sizes.push_back(full.sizes[c]);
    Grid rgrid = Grid::over(residual_sizes, Limits().max_points);

    std::vector<std::vector<int>> sliced(tables.size());
    for (size_t m = 0; m < tables.size(); ++m) {
        sliced[m].resize(rgrid.total);
        for (std::uint64_t ri = 0; ri < rgrid.total; ++ri) {
            auto digits = rgrid.decode(ri);
            std::uint64_t fi = base;
            for (size_t c = 0; c < residual.size(); ++c) {
                fi += static_cast<std::uint64_t>(digits[c]) * full.strides[residual[c]];
            }
            sliced[m][ri] = tables[m][fi];
        }
    }
    return FunctionFamily::from_tables(static_cast<int>(rgrid.total), sliced);
}

Slice slice_at_anchor(const HypothesisClass& cls, const ConfigPoint& anchor,
                      const ClassContext& ctx) {
    const auto& ek = *ctx.ek_index();
    int k = ctx.universe().k;
    std::vector<int> fixed_positions;
    std::vector<int> fixed_values;
    std::vector<int> residual_positions;
    for (size_t c = 0; c < ek.subsets.size(); ++c) {
        const Subset& a = ek.subsets[c];
        if (std::find(a.begin(), a.end(), k) == a.end()) {
            int apos = anchor.idx->position(a);
            if (apos < 0) throw MissingPointError("anchor misses a coordinate");
            fixed_positions.push_back(static_cast<int>(c));
            fixed_values.push_back(anchor.values[apos]);
        } else {
            residual_positions.push_back(static_cast<int>(c));
        }
    }
    std::vector<std::vector<int>> sym;
    sym.reserve(cls.members.size());
    for (const auto& h : cls.members) sym.push_back(ctx.sym_table(h));

    Slice s;
    s.anchor = anchor;
    s.residual_positions = residual_positions;
    s.family = slice_tables(sym, ctx.ek_grid(), fixed_positions, fixed_values);
    return s;
}

VcnResult vcn_dimension(const HypothesisClass& cls, const ClassContext& ctx,
                        const Limits& limits) {
    VcnResult best;
    auto anchors = make_index_set(ctx.universe().k - 1, ctx.universe().k);
    ConfigRange range(anchors, ctx.universe(), limits.max_points);
    for (std::uint64_t i = 0; i < range.size(); ++i) {
        ConfigPoint anchor = range.at(i);
        Slice s = slice_at_anchor(cls, anchor, ctx);
        DimResult d = natarajan_dimension(s.family, limits);
        if (!d.value) continue;  // empty family
        if (!best.value || *d.value > *best.value) {
            best.value = d.value;
            best.anchor = anchor;
            best.witness = d.witness;
            best.residual_positions = s.residual_positions;
        }
    }
    return best;
}

AuditReport audit_growth_bound(const HypothesisClass& cls, const ClassContext& ctx,
                               const Limits& limits) {
    AuditReport rep;
    rep.audit = "gamma-growth";
    rep.claim = "max pattern count at m is at most ((labels^2*(m+1))/2)^(dim*m^(k-1)) "
                "for rank <= 1 classes with dimension >= 1";
    int k = ctx.universe().k;
    if (class_rank(cls, ctx) > 1) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "class rank exceeds 1";
        return rep;
    }
    VcnResult vcn = vcn_dimension(cls, ctx, limits);
    if (!vcn.value || *vcn.value < 1) {
        rep.verdict = AuditReport::Verdict::Vacuous;
        rep.note = "dimension below 1; the bound degenerates";
        return rep;
    }
    int dim = *vcn.value;
    rep.add("dimension", std::to_string(dim));
    long long l2 = static_cast<long long>(ctx.universe().label_count()) *
                   ctx.universe().label_count();
    for (int m = k; m <= k + 2; ++m) {
        std::uint64_t gamma = max_pattern_count(cls, m, ctx).value;
        unsigned exponent = static_cast<unsigned>(dim);
        for (int e = 0; e < k - 1; ++e) exponent *= static_cast<unsigned>(m);
        Rat base(BigInt(l2 * (m + 1)), BigInt(2));
        Rat rhs = base.pow(exponent);
        rep.add("m" + std::to_string(m),
                "gamma=" + std::to_string(gamma) + " bound=" + rhs.str());
        if (Rat(static_cast<long long>(gamma)) > rhs) {
            rep.verdict = AuditReport::Verdict::Violated;
            rep.witnesses.push_back("m=" + std::to_string(m) + ": gamma=" +
                                    std::to_string(gamma) + " exceeds " + rhs.str());
            return rep;
        }
    }
    rep.verdict = AuditReport::Verdict::Verified;
    return rep;
}

VcnResult partite_vcn_dimension(const PartiteClass& cls, const PartiteContext& ctx,
                                const Limits& limits) {
    VcnResult best;
    const PartiteUniverse& uni = ctx.universe();
    std::vector<std::vector<int>> tables;
    tables.reserve(cls.members.size());
    for (const auto& h : cls.members) tables.push_back(h.table);

    for (int a = 1; a <= uni.k; ++a) {
        std::vector<int> fixed_positions;   // coordinates with domain inside [k] \ {a}
        std::vector<int> residual_positions;
        for (size_t c = 0; c < uni.coords.size(); ++c) {
            bool contains_a = std::find(uni.coords[c].begin(), uni.coords[c].end(), a) !=
                              uni.coords[c].end();
            if (contains_a) {
                residual_positions.push_back(static_cast<int>(c));
            } else {
                fixed_positions.push_back(static_cast<int>(c));
            }
        }
        std::vector<int> anchor_sizes;
        for (int c : fixed_positions) anchor_sizes.push_back(ctx.e1_grid().sizes[c]);
        Grid agrid = Grid::over(anchor_sizes, limits.max_points);
        for (std::uint64_t i = 0; i < agrid.total; ++i) {
            auto anchor_values = agrid.decode(i);
            FunctionFamily fam =
                slice_tables(tables, ctx.e1_grid(), fixed_positions, anchor_values);
            DimResult d = natarajan_dimension(fam, limits);
            if (!d.value) continue;
            if (!best.value || *d.value > *best.value) {
                best.value = d.value;
                best.witness = d.witness;
                best.partite_side = a;
                best.partite_anchor = anchor_values;
                best.partite_fixed_positions = fixed_positions;
                best.partite_residual_positions = residual_positions;
            }
        }
    }
    return best;
}

}  // namespace vcnk
