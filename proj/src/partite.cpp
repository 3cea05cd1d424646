#include "vcnk/partite.hpp"

#include <algorithm>

namespace vcnk {

std::vector<PartiteFn> enumerate_partite_fns(int k, int m) {
    auto domains = enumerate_subsets(k, k);
    std::vector<PartiteFn> out;
    for (size_t d = 0; d < domains.size(); ++d) {
        int a = static_cast<int>(domains[d].size());
        std::vector<int> values(a, 1);
        while (true) {
            out.push_back(PartiteFn{static_cast<int>(d), values});
            int i = a - 1;
            while (i >= 0 && values[i] == m) --i;
            if (i < 0) break;
            ++values[i];
            for (int j = i + 1; j < a; ++j) values[j] = 1;
        }
    }
    return out;
}

void PartiteProbTemplate::validate(const PartiteUniverse& uni) const {
    if (per_coord.size() != uni.coords.size()) {
        throw NormalizationError("partite template needs one distribution per coordinate");
    }
    for (size_t c = 0; c < per_coord.size(); ++c) {
        if (static_cast<int>(per_coord[c].size()) != uni.set_size(static_cast<int>(c))) {
            throw NormalizationError("partite distribution size mismatch");
        }
        Rat sum(0);
        for (const auto& w : per_coord[c]) {
            if (w.is_negative()) throw NormalizationError("negative weight");
            sum += w;
        }
        if (sum != Rat(1)) throw NormalizationError("partite weights sum to " + sum.str());
    }
}

PartiteContext::PartiteContext(PartiteUniverse uni, const Limits& limits)
    : uni_(std::move(uni)), limits_(limits), e1_grid_(em_grid(1)) {}

Grid PartiteContext::em_grid(int m) const {
    auto fns = enumerate_partite_fns(uni_.k, m);
    std::vector<int> sizes;
    sizes.reserve(fns.size());
    for (const auto& f : fns) sizes.push_back(uni_.set_size(f.coord));
    return Grid::over(sizes, limits_.max_points);
}

std::uint64_t PartiteContext::fn_position(int m, int coord, const std::vector<int>& values) const {
    // Functions are grouped by domain in canonical order; within a group the
    // value tuples are lexicographic with the last entry varying fastest.
    std::uint64_t offset = 0;
    for (int c = 0; c < coord; ++c) {
        std::uint64_t block = 1;
        for (size_t i = 0; i < uni_.coords[c].size(); ++i) block *= static_cast<std::uint64_t>(m);
        offset += block;
    }
    std::uint64_t within = 0;
    for (int v : values) {
        if (v < 1 || v > m) throw DomainError("partite function value out of range");
        within = within * static_cast<std::uint64_t>(m) + static_cast<std::uint64_t>(v - 1);
    }
    return offset + within;
}

Rat total_loss_partite(const PartiteProbTemplate& mu, const PartiteHypothesis& f,
                       const LossTable& loss, const PartiteHypothesis& h,
                       const PartiteContext& ctx) {
    const Grid& g = ctx.e1_grid();
    if (f.table.size() != g.total || h.table.size() != g.total) {
        throw MissingPointError("partite hypothesis table size mismatch");
    }
    Rat acc(0);
    for (std::uint64_t i = 0; i < g.total; ++i) {
        auto values = g.decode(i);
        Rat w(1);
        for (size_t c = 0; c < values.size(); ++c) w *= mu.per_coord[c][values[c]];
        if (w.is_zero()) continue;
        acc += w * loss.value(i, h.table[i], f.table[i]);
    }
    return acc;
}

Rat disagreement_mass_partite(const PartiteProbTemplate& mu, const PartiteHypothesis& f,
                              const PartiteHypothesis& h, const PartiteContext& ctx) {
    const Grid& g = ctx.e1_grid();
    Rat acc(0);
    for (std::uint64_t i = 0; i < g.total; ++i) {
        if (f.table[i] == h.table[i]) continue;
        auto values = g.decode(i);
        Rat w(1);
        for (size_t c = 0; c < values.size(); ++c) w *= mu.per_coord[c][values[c]];
        acc += w;
    }
    return acc;
}

std::vector<std::vector<Rat>> loss_matrix_partite(const PartiteClass& cls,
                                                  const PartiteProbTemplate& mu,
                                                  const LossTable& loss,
                                                  const PartiteContext& ctx) {
    const Grid& g = ctx.e1_grid();
    size_t n = cls.members.size();
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n, Rat(0)));
    for (std::uint64_t i = 0; i < g.total; ++i) {
        auto values = g.decode(i);
        Rat w(1);
        for (size_t c = 0; c < values.size(); ++c) w *= mu.per_coord[c][values[c]];
        if (w.is_zero()) continue;
        for (size_t target = 0; target < n; ++target) {
            for (size_t cand = 0; cand < n; ++cand) {
                Rat v = loss.value(i, cls.members[cand].table[i], cls.members[target].table[i]);
                if (!v.is_zero()) m[target][cand] += w * v;
            }
        }
    }
    return m;
}

int partite_rank(const PartiteHypothesis& h, const PartiteContext& ctx) {
    const Grid& g = ctx.e1_grid();
    const auto& coords = ctx.universe().coords;
    for (int r = 0; r <= ctx.universe().k; ++r) {
        size_t prefix = 0;
        while (prefix < coords.size() && static_cast<int>(coords[prefix].size()) <= r) ++prefix;
        std::uint64_t block = 1;
        for (size_t c = prefix; c < coords.size(); ++c) {
            block *= static_cast<std::uint64_t>(g.sizes[c]);
        }
        bool ok = true;
        for (std::uint64_t start = 0; start < g.total && ok; start += block) {
            for (std::uint64_t i = start + 1; i < start + block; ++i) {
                if (h.table[i] != h.table[start]) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) return r;
    }
    return ctx.universe().k;
}

int partite_class_rank(const PartiteClass& cls, const PartiteContext& ctx) {
    int r = 0;
    for (const auto& h : cls.members) r = std::max(r, partite_rank(h, ctx));
    return r;
}

std::vector<std::vector<int>> enumerate_tuples(int m, int k) {
    std::vector<std::vector<int>> out;
    if (m < 1) return out;
    std::vector<int> cur(k, 1);
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == m) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = 1;
    }
    return out;
}

PartitePattern star_partite(const PartiteHypothesis& f, int m,
                            const std::vector<int>& em_values, const PartiteContext& ctx) {
    const PartiteUniverse& uni = ctx.universe();
    const Grid& e1 = ctx.e1_grid();
    auto tuples = enumerate_tuples(m, uni.k);
    PartitePattern p;
    p.entries.reserve(tuples.size());
    std::vector<int> pulled(e1.sizes.size());
    std::vector<int> restricted;
    for (const auto& alpha : tuples) {
        for (size_t j = 0; j < uni.coords.size(); ++j) {
            restricted.clear();
            for (int a : uni.coords[j]) restricted.push_back(alpha[a - 1]);
            pulled[j] = em_values[ctx.fn_position(m, static_cast<int>(j), restricted)];
        }
        p.entries.push_back(f.table[e1.index_of(pulled)]);
    }
    return p;
}

}  // namespace vcnk
