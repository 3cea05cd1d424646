#pragma once

// Independent brute-force Natarajan machinery used as the test oracle. It
// shares no search code with the library: sizes are scanned ascending, the
// (f0, f1) pairs are enumerated as whole product tuples, and selection
// patterns are collected by direct scans.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "vcnk/dimensions.hpp"

namespace testutil {

inline bool naive_shatters(const vcnk::FunctionFamily& fam, const std::vector<int>& points) {
    size_t n = points.size();
    if (fam.functions.empty()) return false;
    if (n == 0) return true;
    std::uint64_t needed = 1ull << n;
    if (needed > fam.functions.size()) return false;

    // Realized values per point; a usable value needs at least 2^(n-1)
    // functions behind it (every pattern pinning this point needs its own).
    std::vector<std::vector<int>> values(n);
    for (size_t i = 0; i < n; ++i) {
        std::map<int, std::uint64_t> counts;
        for (const auto& f : fam.functions) ++counts[f[points[i]]];
        for (const auto& [v, c] : counts) {
            if (c >= needed / 2) values[i].push_back(v);
        }
        if (values[i].size() < 2) return false;
    }

    // Odometer over ordered (f0(a), f1(a)) choices at every point.
    std::vector<size_t> pick0(n, 0), pick1(n, 0);
    auto advance = [&]() {
        for (size_t i = 0; i < n; ++i) {
            if (++pick1[i] < values[i].size()) return true;
            pick1[i] = 0;
            if (++pick0[i] < values[i].size()) return true;
            pick0[i] = 0;
        }
        return false;
    };
    while (true) {
        bool distinct = true;
        for (size_t i = 0; i < n; ++i) {
            if (pick0[i] == pick1[i]) {
                distinct = false;
                break;
            }
        }
        if (distinct) {
            std::vector<char> seen(needed, 0);
            std::uint64_t found = 0;
            for (const auto& f : fam.functions) {
                std::uint64_t mask = 0;
                bool usable = true;
                for (size_t i = 0; i < n; ++i) {
                    int v = f[points[i]];
                    if (v == values[i][pick1[i]]) {
                        mask |= 1ull << i;
                    } else if (v != values[i][pick0[i]]) {
                        usable = false;
                        break;
                    }
                }
                if (usable && !seen[mask]) {
                    seen[mask] = 1;
                    ++found;
                }
            }
            if (found == needed) return true;
        }
        if (!advance()) return false;
    }
}

// Ascending scan; stops at the first size with no shattered set.
inline std::optional<int> naive_natarajan(const vcnk::FunctionFamily& fam) {
    if (fam.functions.empty()) return std::nullopt;
    int best = 0;
    for (int s = 1; s <= fam.domain_size; ++s) {
        if ((1ull << s) > fam.functions.size()) break;
        bool any = false;
        std::vector<int> pick(s);
        std::vector<int> at(s);
        for (int i = 0; i < s; ++i) at[i] = i;
        while (true) {
            for (int i = 0; i < s; ++i) pick[i] = at[i];
            if (naive_shatters(fam, pick)) {
                any = true;
                break;
            }
            int i = s - 1;
            while (i >= 0 && at[i] == fam.domain_size - (s - i)) --i;
            if (i < 0) break;
            ++at[i];
            for (int j = i + 1; j < s; ++j) at[j] = at[j - 1] + 1;
        }
        if (!any) break;
        best = s;
    }
    return best;
}

// Naive dimension over anchors: slices are re-derived with plain loops, not
// the library's slicing helper.
inline std::optional<int> naive_vcn(const vcnk::HypothesisClass& cls,
                                    const vcnk::ClassContext& ctx) {
    using namespace vcnk;
    if (cls.members.empty()) return std::nullopt;
    int k = ctx.universe().k;
    const Grid& ekg = ctx.ek_grid();
    const auto& subsets = ctx.ek_index()->subsets;

    std::vector<std::vector<int>> sym;
    for (const auto& h : cls.members) sym.push_back(ctx.sym_table(h));

    std::vector<size_t> fixed, residual;
    for (size_t c = 0; c < subsets.size(); ++c) {
        if (std::find(subsets[c].begin(), subsets[c].end(), k) == subsets[c].end()) {
            fixed.push_back(c);
        } else {
            residual.push_back(c);
        }
    }
    // Odometer over the fixed coordinates.
    std::vector<int> avals(fixed.size(), 0);
    std::optional<int> best;
    while (true) {
        // Residual tables by direct digit arithmetic.
        std::vector<int> rvals(residual.size(), 0);
        std::vector<std::vector<int>> tables(cls.members.size());
        while (true) {
            std::uint64_t full = 0;
            for (size_t i = 0; i < fixed.size(); ++i) {
                full += static_cast<std::uint64_t>(avals[i]) * ekg.strides[fixed[i]];
            }
            for (size_t i = 0; i < residual.size(); ++i) {
                full += static_cast<std::uint64_t>(rvals[i]) * ekg.strides[residual[i]];
            }
            for (size_t m = 0; m < sym.size(); ++m) tables[m].push_back(sym[m][full]);
            size_t i = residual.size();
            while (i > 0 && rvals[i - 1] + 1 == ekg.sizes[residual[i - 1]]) rvals[--i] = 0;
            if (i == 0) break;
            ++rvals[i - 1];
        }
        FunctionFamily fam =
            FunctionFamily::from_tables(static_cast<int>(tables[0].size()), tables);
        auto d = naive_natarajan(fam);
        if (d && (!best || *d > *best)) best = d;

        size_t i = fixed.size();
        while (i > 0 && avals[i - 1] + 1 == ekg.sizes[fixed[i - 1]]) avals[--i] = 0;
        if (i == 0) break;
        ++avals[i - 1];
    }
    return best;
}

}  // namespace testutil
