#include "vcnk/universe.hpp"

#include <algorithm>
#include <random>

namespace vcnk {

std::vector<Subset> enumerate_subsets(int m, int arity_cap) {
    std::vector<Subset> out;
    int max_size = std::min(m, arity_cap);
    for (int size = 1; size <= max_size; ++size) {
        // Lexicographic combinations of the given size.
        Subset cur(size);
        for (int i = 0; i < size; ++i) cur[i] = i + 1;
        while (true) {
            out.push_back(cur);
            int i = size - 1;
            while (i >= 0 && cur[i] == m - (size - 1 - i)) --i;
            if (i < 0) break;
            ++cur[i];
            for (int j = i + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
        }
    }
    return out;
}

std::vector<Injection> enumerate_injections(int m, int k) {
    std::vector<Injection> out;
    if (m < k) return out;
    Injection cur;
    std::vector<bool> used(m + 1, false);
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = 1; v <= m; ++v) {
            if (used[v]) continue;
            used[v] = true;
            cur.push_back(v);
            self(self);
            cur.pop_back();
            used[v] = false;
        }
    };
    rec(rec);
    return out;
}

std::uint64_t falling_factorial(int m, int k) {
    if (m < k) return 0;
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r *= static_cast<std::uint64_t>(m - i);
    return r;
}

Universe::Universe(int arity, std::vector<std::vector<std::string>> sets,
                   std::vector<std::string> labs)
    : k(arity), ground_sets(std::move(sets)), labels(std::move(labs)) {
    if (k < 1) throw DomainError("universe arity must be >= 1");
    if (static_cast<int>(ground_sets.size()) != k) {
        throw DomainError("universe needs exactly one ground set per arity 1..k");
    }
    for (const auto& s : ground_sets) {
        if (s.empty()) throw DomainError("ground sets must be non-empty");
        for (size_t i = 0; i < s.size(); ++i) {
            for (size_t j = i + 1; j < s.size(); ++j) {
                if (s[i] == s[j]) throw DomainError("duplicate element '" + s[i] + "'");
            }
        }
    }
    if (labels.empty()) throw DomainError("label set must be non-empty");
    for (size_t i = 0; i < labels.size(); ++i) {
        for (size_t j = i + 1; j < labels.size(); ++j) {
            if (labels[i] == labels[j]) throw DomainError("duplicate label '" + labels[i] + "'");
        }
    }
}

int IndexSet::position(const Subset& a) const {
    for (size_t i = 0; i < subsets.size(); ++i) {
        if (subsets[i] == a) return static_cast<int>(i);
    }
    return -1;
}

std::shared_ptr<const IndexSet> make_index_set(int m, int arity_cap) {
    auto idx = std::make_shared<IndexSet>();
    idx->base_size = m;
    idx->arity_cap = arity_cap;
    idx->subsets = enumerate_subsets(m, arity_cap);
    return idx;
}

Grid Grid::over(const std::vector<int>& coordinate_sizes, std::uint64_t cap) {
    Grid g;
    g.sizes = coordinate_sizes;
    g.strides.assign(coordinate_sizes.size(), 1);
    g.total = 1;
    for (int i = static_cast<int>(coordinate_sizes.size()) - 1; i >= 0; --i) {
        g.strides[i] = g.total;
        std::uint64_t s = static_cast<std::uint64_t>(coordinate_sizes[i]);
        if (s == 0) throw DomainError("empty coordinate in grid");
        if (g.total > cap / s) {
            throw ExplosionGuardError("configuration grid exceeds point budget");
        }
        g.total *= s;
    }
    return g;
}

std::uint64_t Grid::index_of(const std::vector<int>& values) const {
    std::uint64_t r = 0;
    for (size_t i = 0; i < values.size(); ++i) {
        r += static_cast<std::uint64_t>(values[i]) * strides[i];
    }
    return r;
}

std::vector<int> Grid::decode(std::uint64_t index) const {
    std::vector<int> v(sizes.size());
    for (size_t i = 0; i < sizes.size(); ++i) {
        v[i] = static_cast<int>((index / strides[i]) % static_cast<std::uint64_t>(sizes[i]));
    }
    return v;
}

Grid config_grid(const IndexSet& idx, const Universe& uni, std::uint64_t cap) {
    std::vector<int> sizes;
    sizes.reserve(idx.subsets.size());
    for (const auto& a : idx.subsets) {
        sizes.push_back(uni.ground_size(static_cast<int>(a.size())));
    }
    return Grid::over(sizes, cap);
}

ProbTemplate ProbTemplate::uniform(const Universe& uni) {
    ProbTemplate mu;
    for (int arity = 1; arity <= uni.k; ++arity) {
        int n = uni.ground_size(arity);
        mu.per_arity.emplace_back(n, Rat(BigInt(1), BigInt(n)));
    }
    return mu;
}

ProbTemplate ProbTemplate::point_mass(const Universe& uni, const std::vector<int>& support) {
    ProbTemplate mu;
    for (int arity = 1; arity <= uni.k; ++arity) {
        std::vector<Rat> w(uni.ground_size(arity), Rat(0));
        w.at(support.at(arity - 1)) = Rat(1);
        mu.per_arity.push_back(std::move(w));
    }
    return mu;
}

void ProbTemplate::validate(const Universe& uni) const {
    if (static_cast<int>(per_arity.size()) != uni.k) {
        throw NormalizationError("probability template needs one distribution per arity");
    }
    for (int arity = 1; arity <= uni.k; ++arity) {
        const auto& w = per_arity[arity - 1];
        if (static_cast<int>(w.size()) != uni.ground_size(arity)) {
            throw NormalizationError("distribution size mismatch at arity " + std::to_string(arity));
        }
        Rat sum(0);
        for (const auto& p : w) {
            if (p.is_negative()) throw NormalizationError("negative weight");
            sum += p;
        }
        if (sum != Rat(1)) {
            throw NormalizationError("weights at arity " + std::to_string(arity) +
                                     " sum to " + sum.str() + ", not 1");
        }
    }
}

Rat product_weight(const ProbTemplate& mu, const ConfigPoint& x, const Universe& uni) {
    (void)uni;
    Rat w(1);
    for (size_t i = 0; i < x.values.size(); ++i) {
        int arity = static_cast<int>(x.idx->subsets[i].size());
        w *= mu.per_arity[arity - 1][x.values[i]];
    }
    return w;
}

std::vector<int> pullback_positions(const Injection& alpha, const IndexSet& target,
                                    const IndexSet& source) {
    for (size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] < 1 || alpha[i] > source.base_size) {
            throw DomainError("injection image out of range");
        }
        for (size_t j = i + 1; j < alpha.size(); ++j) {
            if (alpha[i] == alpha[j]) throw DomainError("map is not injective");
        }
    }
    std::vector<int> positions;
    positions.reserve(target.subsets.size());
    for (const auto& a : target.subsets) {
        Subset image;
        image.reserve(a.size());
        for (int e : a) image.push_back(alpha.at(e - 1));
        std::sort(image.begin(), image.end());
        int pos = source.position(image);
        if (pos < 0) throw MissingPointError("pullback image subset missing from source index");
        positions.push_back(pos);
    }
    return positions;
}

ConfigPoint pullback(const Injection& alpha, const ConfigPoint& x) {
    auto target = make_index_set(static_cast<int>(alpha.size()), x.idx->arity_cap);
    auto positions = pullback_positions(alpha, *target, *x.idx);
    ConfigPoint out;
    out.idx = target;
    out.values.reserve(positions.size());
    for (int p : positions) out.values.push_back(x.values[p]);
    return out;
}

ConfigRange::ConfigRange(std::shared_ptr<const IndexSet> idx, const Universe& uni,
                         std::uint64_t cap)
    : idx_(std::move(idx)), grid_(config_grid(*idx_, uni, cap)) {}

ConfigPoint ConfigRange::at(std::uint64_t index) const {
    ConfigPoint p;
    p.idx = idx_;
    p.values = grid_.decode(index);
    return p;
}

std::vector<std::vector<Rat>> coordinate_weights(const ProbTemplate& mu, const IndexSet& idx,
                                                 const Universe& uni) {
    (void)uni;
    std::vector<std::vector<Rat>> out;
    out.reserve(idx.subsets.size());
    for (const auto& a : idx.subsets) {
        out.push_back(mu.per_arity[a.size() - 1]);
    }
    return out;
}

Rat weight_at(const std::vector<std::vector<Rat>>& coord_weights, const std::vector<int>& values) {
    Rat w(1);
    for (size_t i = 0; i < values.size(); ++i) w *= coord_weights[i][values[i]];
    return w;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 step over seed xor salt.
    std::uint64_t z = seed ^ (salt + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
    // Rejection sampling keeps the draw independent of library internals.
    std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

int draw_from(const std::vector<Rat>& weights, std::mt19937_64& rng) {
    BigInt denom_lcm(1);
    for (const auto& w : weights) {
        denom_lcm = boost::multiprecision::lcm(denom_lcm, w.den());
    }
    // Scaled integer thresholds; the lcm stays small at desk scale.
    if (denom_lcm > BigInt(1) << 62) {
        throw ExplosionGuardError("sampling denominators too large");
    }
    std::uint64_t total = denom_lcm.convert_to<std::uint64_t>();
    std::uint64_t r = bounded_draw(rng, total);
    BigInt cum(0);
    for (size_t e = 0; e < weights.size(); ++e) {
        cum += weights[e].num() * (denom_lcm / weights[e].den());
        if (BigInt(r) < cum) return static_cast<int>(e);
    }
    throw Error("weights do not sum to 1 in draw_from");
}

}  // namespace

ConfigPoint sample_config(const ProbTemplate& mu, int m, const Universe& uni, std::uint64_t seed) {
    auto idx = make_index_set(m, uni.k);
    std::mt19937_64 rng(mix_seed(seed, 0x636f6e666967ULL));
    ConfigPoint p;
    p.idx = idx;
    p.values.reserve(idx->subsets.size());
    for (const auto& a : idx->subsets) {
        p.values.push_back(draw_from(mu.per_arity[a.size() - 1], rng));
    }
    return p;
}

}  // namespace vcnk
