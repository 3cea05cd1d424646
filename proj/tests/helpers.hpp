#pragma once

// Shared builders for the test suites.

#include <string>
#include <vector>

#include "vcnk/dimensions.hpp"
#include "vcnk/hypotheses.hpp"
#include "vcnk/universe.hpp"

namespace testutil {

inline vcnk::Universe uni_k1(int elements, int labels) {
    std::vector<std::string> xs, ls;
    for (int i = 0; i < elements; ++i) xs.push_back(std::string(1, static_cast<char>('a' + i)));
    for (int i = 0; i < labels; ++i) ls.push_back(std::to_string(i));
    return vcnk::Universe(1, {xs}, ls);
}

inline vcnk::Universe uni_k2(int n1, int n2, int labels) {
    std::vector<std::string> x1, x2, ls;
    for (int i = 0; i < n1; ++i) x1.push_back(std::string(1, static_cast<char>('a' + i)));
    for (int i = 0; i < n2; ++i) x2.push_back("e" + std::to_string(i));
    for (int i = 0; i < labels; ++i) ls.push_back(std::to_string(i));
    return vcnk::Universe(2, {x1, x2}, ls);
}

inline vcnk::Hypothesis constant(const vcnk::ClassContext& ctx, int label) {
    vcnk::Hypothesis h;
    h.table.assign(ctx.ek_grid().total, label);
    h.declared_rank = 0;
    return h;
}

inline vcnk::HypothesisClass constants_class(const vcnk::ClassContext& ctx, int count) {
    vcnk::HypothesisClass cls;
    cls.name = "constants";
    for (int l = 0; l < count; ++l) cls.members.push_back(constant(ctx, l));
    return cls;
}

// k = 2 only: label 1 exactly when the two singleton coordinates agree.
inline vcnk::Hypothesis equality_hypothesis(const vcnk::ClassContext& ctx) {
    const vcnk::Grid& g = ctx.ek_grid();
    vcnk::Hypothesis h;
    h.table.resize(g.total);
    for (std::uint64_t i = 0; i < g.total; ++i) {
        auto v = g.decode(i);
        h.table[i] = v[0] == v[1] ? 1 : 0;
    }
    return h;
}

}  // namespace testutil
