#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "vcnk/error.hpp"
#include "vcnk/rational.hpp"

namespace vcnk {

// Subsets are sorted ascending; elements are 1-based.
using Subset = std::vector<int>;

// Injections [u] -> [m] as image tuples: alpha(i) = tuple[i-1], 1-based.
using Injection = std::vector<int>;

// Non-empty subsets of [m] with size <= arity_cap, ordered by (size, lex).
std::vector<Subset> enumerate_subsets(int m, int arity_cap);

// All injections [k] -> [m], lexicographic by image tuple. Empty when m < k.
std::vector<Injection> enumerate_injections(int m, int k);

std::uint64_t falling_factorial(int m, int k);

// Finite ground sets X_1..X_k plus a finite label set.
struct Universe {
    int k = 1;
    std::vector<std::vector<std::string>> ground_sets;  // [arity-1] -> element names
    std::vector<std::string> labels;

    Universe() = default;
    Universe(int arity, std::vector<std::vector<std::string>> sets, std::vector<std::string> labs);

    int ground_size(int arity) const { return static_cast<int>(ground_sets[arity - 1].size()); }
    int label_count() const { return static_cast<int>(labels.size()); }
};

// The coordinate index r(V) of a configuration space, arities capped at k.
struct IndexSet {
    int base_size = 0;
    int arity_cap = 0;
    std::vector<Subset> subsets;  // canonical (size, lex) order

    // Position of a subset in the canonical order; -1 when absent.
    int position(const Subset& a) const;
};

std::shared_ptr<const IndexSet> make_index_set(int m, int arity_cap);

// Mixed-radix coordinate space. Index 0 is the lexicographically first tuple;
// the last coordinate varies fastest.
struct Grid {
    std::vector<int> sizes;
    std::vector<std::uint64_t> strides;
    std::uint64_t total = 1;

    static Grid over(const std::vector<int>& coordinate_sizes, std::uint64_t cap);

    std::uint64_t index_of(const std::vector<int>& values) const;
    std::vector<int> decode(std::uint64_t index) const;
};

// Grid whose coordinates follow an IndexSet, sized by the matching ground sets.
Grid config_grid(const IndexSet& idx, const Universe& uni, std::uint64_t cap);

// A total assignment of the coordinates of an IndexSet.
struct ConfigPoint {
    std::shared_ptr<const IndexSet> idx;
    std::vector<int> values;  // element ids, aligned with idx->subsets

    bool operator==(const ConfigPoint& o) const {
        return idx->base_size == o.idx->base_size && idx->arity_cap == o.idx->arity_cap &&
               values == o.values;
    }
};

// One exact rational distribution per arity.
struct ProbTemplate {
    std::vector<std::vector<Rat>> per_arity;  // [arity-1][element id]

    static ProbTemplate uniform(const Universe& uni);
    static ProbTemplate point_mass(const Universe& uni, const std::vector<int>& support);

    void validate(const Universe& uni) const;  // throws NormalizationError
};

Rat product_weight(const ProbTemplate& mu, const ConfigPoint& x, const Universe& uni);

// For each target-subset position (over U), the source position in `source`
// of its image under alpha. Rejects non-injective alpha.
std::vector<int> pullback_positions(const Injection& alpha, const IndexSet& target,
                                    const IndexSet& source);

ConfigPoint pullback(const Injection& alpha, const ConfigPoint& x);

// Streams all ConfigPoints of an IndexSet in canonical order.
class ConfigRange {
public:
    ConfigRange(std::shared_ptr<const IndexSet> idx, const Universe& uni,
                std::uint64_t cap = Limits().max_points);

    std::uint64_t size() const { return grid_.total; }
    const Grid& grid() const { return grid_; }
    ConfigPoint at(std::uint64_t index) const;

private:
    std::shared_ptr<const IndexSet> idx_;
    Grid grid_;
};

// Per-coordinate weights for fast exact accumulation over a config grid.
std::vector<std::vector<Rat>> coordinate_weights(const ProbTemplate& mu, const IndexSet& idx,
                                                 const Universe& uni);

Rat weight_at(const std::vector<std::vector<Rat>>& coord_weights, const std::vector<int>& values);

// Independent per-coordinate draw; deterministic for a fixed seed.
ConfigPoint sample_config(const ProbTemplate& mu, int m, const Universe& uni, std::uint64_t seed);

// Deterministic splittable seed stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace vcnk
