#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vcnk/losses.hpp"
#include "vcnk/universe.hpp"

namespace vcnk {

// A k-partite coordinate: a function from a subset of [k] into [m].
struct PartiteFn {
    int coord = 0;            // index into the canonical r(k) list (the domain)
    std::vector<int> values;  // 1-based images, aligned with the sorted domain

    bool operator==(const PartiteFn& o) const { return coord == o.coord && values == o.values; }
};

// All functions A -> [m] with A in r(k), ordered by (domain size, domain lex,
// value tuple lex).
std::vector<PartiteFn> enumerate_partite_fns(int k, int m);

// One finite set per coordinate A in r(k).
struct PartiteUniverse {
    int k = 1;
    std::vector<Subset> coords;                  // r(k), canonical order
    std::vector<std::vector<std::string>> sets;  // per coord: elements of X_A
    std::vector<std::string> labels;

    int set_size(int coord) const { return static_cast<int>(sets[coord].size()); }
    int label_count() const { return static_cast<int>(labels.size()); }
};

struct PartiteProbTemplate {
    std::vector<std::vector<Rat>> per_coord;

    void validate(const PartiteUniverse& uni) const;
};

// A k-partite hypothesis: total table over the partite configuration grid E_1.
struct PartiteHypothesis {
    std::vector<int> table;  // label id per E_1 grid index
};

struct PartiteClass {
    std::string name;
    std::vector<PartiteHypothesis> members;
};

class PartiteContext {
public:
    explicit PartiteContext(PartiteUniverse uni, const Limits& limits = {});

    const PartiteUniverse& universe() const { return uni_; }
    const Limits& limits() const { return limits_; }
    const Grid& e1_grid() const { return e1_grid_; }

    // Grid over enumerate_partite_fns(k, m); coordinate f is sized by its domain's set.
    Grid em_grid(int m) const;

    // Position of a partite function inside the E_m coordinate list.
    std::uint64_t fn_position(int m, int coord, const std::vector<int>& values) const;

private:
    PartiteUniverse uni_;
    Limits limits_;
    Grid e1_grid_;
};

// Expectation of loss(x, H(x), F(x)) under the product of the per-coordinate
// measures (the m = 1 partite total loss).
Rat total_loss_partite(const PartiteProbTemplate& mu, const PartiteHypothesis& f,
                       const LossTable& loss, const PartiteHypothesis& h,
                       const PartiteContext& ctx);

Rat disagreement_mass_partite(const PartiteProbTemplate& mu, const PartiteHypothesis& f,
                              const PartiteHypothesis& h, const PartiteContext& ctx);

std::vector<std::vector<Rat>> loss_matrix_partite(const PartiteClass& cls,
                                                  const PartiteProbTemplate& mu,
                                                  const LossTable& loss,
                                                  const PartiteContext& ctx);

// Smallest r such that the table reads only coordinates with |dom| <= r.
int partite_rank(const PartiteHypothesis& h, const PartiteContext& ctx);
int partite_class_rank(const PartiteClass& cls, const PartiteContext& ctx);

// All tuples [m]^k in lexicographic order (1-based entries).
std::vector<std::vector<int>> enumerate_tuples(int m, int k);

// Evaluation pattern of a partite hypothesis over E_m: one label per tuple in
// [m]^k, lexicographic order.
struct PartitePattern {
    std::vector<int> entries;

    bool operator==(const PartitePattern& o) const { return entries == o.entries; }
    bool operator<(const PartitePattern& o) const { return entries < o.entries; }
};

PartitePattern star_partite(const PartiteHypothesis& f, int m,
                            const std::vector<int>& em_values, const PartiteContext& ctx);

}  // namespace vcnk
