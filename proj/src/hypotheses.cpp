#include "vcnk/hypotheses.hpp"

#include <algorithm>

namespace vcnk {

ClassContext::ClassContext(const Universe& uni, const Limits& limits)
    : uni_(&uni),
      limits_(limits),
      ek_(make_index_set(uni.k, uni.k)),
      ek_grid_(config_grid(*ek_, uni, limits.max_points)),
      perms_(enumerate_injections(uni.k, uni.k)) {
    sym_count_ = 1;
    for (size_t i = 0; i < perms_.size(); ++i) {
        if (static_cast<std::uint64_t>(sym_count_) * uni.label_count() > limits.max_points) {
            throw ExplosionGuardError("sym label space exceeds point budget");
        }
        sym_count_ *= uni.label_count();
    }
    perm_map_.reserve(perms_.size());
    for (const auto& sigma : perms_) {
        auto positions = pullback_positions(sigma, *ek_, *ek_);
        std::vector<std::uint32_t> map(ek_grid_.total);
        std::vector<int> values(ek_grid_.sizes.size());
        std::vector<int> pulled(ek_grid_.sizes.size());
        for (std::uint64_t i = 0; i < ek_grid_.total; ++i) {
            values = ek_grid_.decode(i);
            for (size_t c = 0; c < positions.size(); ++c) pulled[c] = values[positions[c]];
            map[i] = static_cast<std::uint32_t>(ek_grid_.index_of(pulled));
        }
        perm_map_.push_back(std::move(map));
    }
}

int ClassContext::encode_sym(const std::vector<int>& labels_by_perm) const {
    int v = 0;
    int base = uni_->label_count();
    for (int t = static_cast<int>(labels_by_perm.size()) - 1; t >= 0; --t) {
        v = v * base + labels_by_perm[t];
    }
    return v;
}

std::vector<int> ClassContext::decode_sym(int sym) const {
    std::vector<int> out(perms_.size());
    int base = uni_->label_count();
    for (size_t t = 0; t < perms_.size(); ++t) {
        out[t] = sym % base;
        sym /= base;
    }
    return out;
}

std::string ClassContext::sym_name(int sym) const {
    auto digits = decode_sym(sym);
    std::string s = "(";
    for (size_t t = 0; t < digits.size(); ++t) {
        if (t) s += ",";
        s += uni_->labels[digits[t]];
    }
    s += ")";
    return s;
}

std::vector<int> ClassContext::sym_table(const Hypothesis& h) const {
    if (h.table.size() != ek_grid_.total) {
        throw MissingPointError("hypothesis table size mismatch");
    }
    std::vector<int> out(ek_grid_.total);
    std::vector<int> digits(perms_.size());
    for (std::uint64_t i = 0; i < ek_grid_.total; ++i) {
        for (size_t t = 0; t < perms_.size(); ++t) digits[t] = h.table[perm_map_[t][i]];
        out[i] = encode_sym(digits);
    }
    return out;
}

int ClassContext::evaluate(const Hypothesis& h, const ConfigPoint& x) const {
    if (h.table.size() != ek_grid_.total) {
        throw MissingPointError("hypothesis table size mismatch");
    }
    return h.table[ek_grid_.index_of(x.values)];
}

int evaluate(const Hypothesis& h, const ConfigPoint& x, const Universe& uni) {
    Grid g = config_grid(*x.idx, uni, Limits().max_points);
    std::uint64_t i = g.index_of(x.values);
    if (i >= h.table.size()) throw MissingPointError("configuration outside hypothesis table");
    return h.table[i];
}

Pattern star_pattern(const Hypothesis& f, int m, const ConfigPoint& x, const ClassContext& ctx) {
    auto injections = enumerate_injections(m, ctx.universe().k);
    Pattern p;
    p.entries.reserve(injections.size());
    const Grid& ekg = ctx.ek_grid();
    std::vector<int> pulled(ekg.sizes.size());
    for (const auto& alpha : injections) {
        auto positions = pullback_positions(alpha, *ctx.ek_index(), *x.idx);
        for (size_t c = 0; c < positions.size(); ++c) pulled[c] = x.values[positions[c]];
        p.entries.push_back(f.table[ekg.index_of(pulled)]);
    }
    return p;
}

namespace {

// Pullback position plans for all injections [k] -> [m], computed once.
std::vector<std::vector<int>> injection_plans(int m, const ClassContext& ctx,
                                              const IndexSet& source) {
    auto injections = enumerate_injections(m, ctx.universe().k);
    std::vector<std::vector<int>> plans;
    plans.reserve(injections.size());
    for (const auto& alpha : injections) {
        plans.push_back(pullback_positions(alpha, *ctx.ek_index(), source));
    }
    return plans;
}

Pattern pattern_via_plans(const Hypothesis& f, const std::vector<std::vector<int>>& plans,
                          const std::vector<int>& values, const Grid& ekg) {
    Pattern p;
    p.entries.reserve(plans.size());
    std::vector<int> pulled(ekg.sizes.size());
    for (const auto& plan : plans) {
        for (size_t c = 0; c < plan.size(); ++c) pulled[c] = values[plan[c]];
        p.entries.push_back(f.table[ekg.index_of(pulled)]);
    }
    return p;
}

}  // namespace

std::vector<Pattern> pattern_set(const HypothesisClass& cls, int m, const ConfigPoint& x,
                                 const ClassContext& ctx) {
    auto plans = injection_plans(m, ctx, *x.idx);
    std::vector<Pattern> out;
    out.reserve(cls.members.size());
    for (const auto& h : cls.members) {
        out.push_back(pattern_via_plans(h, plans, x.values, ctx.ek_grid()));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PatternCountResult max_pattern_count(const HypothesisClass& cls, int m, const ClassContext& ctx) {
    auto em = make_index_set(m, ctx.universe().k);
    ConfigRange range(em, ctx.universe(), ctx.limits().max_points);
    auto plans = injection_plans(m, ctx, *em);

    PatternCountResult best;
    std::vector<Pattern> pats;
    pats.reserve(cls.members.size());
    for (std::uint64_t i = 0; i < range.size(); ++i) {
        std::vector<int> values = range.grid().decode(i);
        pats.clear();
        for (const auto& h : cls.members) {
            pats.push_back(pattern_via_plans(h, plans, values, ctx.ek_grid()));
        }
        std::sort(pats.begin(), pats.end());
        std::uint64_t distinct =
            static_cast<std::uint64_t>(std::unique(pats.begin(), pats.end()) - pats.begin());
        if (distinct > best.value) {
            best.value = distinct;
            best.witness.idx = em;
            best.witness.values = values;
        }
    }
    if (cls.members.empty()) {
        best.value = 0;
        best.witness.idx = em;
        best.witness.values = range.size() ? range.grid().decode(0) : std::vector<int>{};
    }
    return best;
}

int hypothesis_rank(const Hypothesis& h, const ClassContext& ctx) {
    const Grid& g = ctx.ek_grid();
    const auto& subsets = ctx.ek_index()->subsets;
    // Coordinates are sorted by arity, so arity <= r coordinates form a prefix
    // and factorization reduces to constancy on consecutive blocks.
    for (int r = 0; r <= ctx.universe().k; ++r) {
        size_t prefix = 0;
        while (prefix < subsets.size() && static_cast<int>(subsets[prefix].size()) <= r) ++prefix;
        std::uint64_t block = 1;
        for (size_t c = prefix; c < subsets.size(); ++c) {
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

int class_rank(const HypothesisClass& cls, const ClassContext& ctx) {
    int r = 0;
    for (const auto& h : cls.members) r = std::max(r, hypothesis_rank(h, ctx));
    return r;
}

void validate_class(const HypothesisClass& cls, const ClassContext& ctx) {
    for (size_t i = 0; i < cls.members.size(); ++i) {
        if (cls.members[i].table.size() != ctx.ek_grid().total) {
            throw MissingPointError("member " + std::to_string(i) + " table is not total on E_k");
        }
        for (int v : cls.members[i].table) {
            if (v < 0 || v >= ctx.universe().label_count()) {
                throw DomainError("member " + std::to_string(i) + " uses an unknown label");
            }
        }
        for (size_t j = i + 1; j < cls.members.size(); ++j) {
            if (cls.members[i].table == cls.members[j].table) {
                throw DomainError("members " + std::to_string(i) + " and " + std::to_string(j) +
                                  " have identical tables");
            }
        }
        if (cls.members[i].declared_rank) {
            int actual = hypothesis_rank(cls.members[i], ctx);
            if (actual > *cls.members[i].declared_rank) {
                throw DomainError("member " + std::to_string(i) + " declared rank " +
                                  std::to_string(*cls.members[i].declared_rank) +
                                  " but reads arity-" + std::to_string(actual) + " coordinates");
            }
        }
    }
}

}  // namespace vcnk
