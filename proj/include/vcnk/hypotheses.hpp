#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vcnk/universe.hpp"

namespace vcnk {

// A k-ary hypothesis as a total lookup table over the configuration grid E_k.
struct Hypothesis {
    std::vector<int> table;  // label id per E_k grid index, canonical order
    std::optional<int> declared_rank;
};

struct HypothesisClass {
    std::string name;
    std::vector<Hypothesis> members;  // distinct tables; order is the tie-break key
};

// Evaluation pattern of one hypothesis at a configuration over [m]:
// one label per injection [k] -> [m], in lexicographic injection order.
struct Pattern {
    std::vector<int> entries;

    bool operator==(const Pattern& o) const { return entries == o.entries; }
    bool operator<(const Pattern& o) const { return entries < o.entries; }
};

// Shared evaluation machinery for a fixed universe: the E_k grid, the symmetric
// group, permutation-pullback index maps and the encoding of S_k-tuples of
// labels ("sym labels", identity component least significant).
class ClassContext {
public:
    ClassContext(const Universe& uni, const Limits& limits = {});

    const Universe& universe() const { return *uni_; }
    const Limits& limits() const { return limits_; }
    const std::shared_ptr<const IndexSet>& ek_index() const { return ek_; }
    const Grid& ek_grid() const { return ek_grid_; }
    const std::vector<Injection>& permutations() const { return perms_; }
    int sym_count() const { return sym_count_; }

    int encode_sym(const std::vector<int>& labels_by_perm) const;
    std::vector<int> decode_sym(int sym) const;
    std::string sym_name(int sym) const;

    // Sym label of H at every E_k grid index.
    std::vector<int> sym_table(const Hypothesis& h) const;

    int evaluate(const Hypothesis& h, const ConfigPoint& x) const;

private:
    const Universe* uni_;
    Limits limits_;
    std::shared_ptr<const IndexSet> ek_;
    Grid ek_grid_;
    std::vector<Injection> perms_;
    std::vector<std::vector<std::uint32_t>> perm_map_;  // [perm][ek index] -> ek index
    int sym_count_;
};

int evaluate(const Hypothesis& h, const ConfigPoint& x, const Universe& uni);

// F*_m at x: entry per injection alpha is F evaluated on the pullback of x.
Pattern star_pattern(const Hypothesis& f, int m, const ConfigPoint& x, const ClassContext& ctx);

// Deduplicated set of member patterns at x, sorted for canonicity.
std::vector<Pattern> pattern_set(const HypothesisClass& cls, int m, const ConfigPoint& x,
                                 const ClassContext& ctx);

struct PatternCountResult {
    std::uint64_t value = 0;
    ConfigPoint witness;  // first argmax in canonical order
};

// Maximum number of distinct member patterns over all configurations of [m].
PatternCountResult max_pattern_count(const HypothesisClass& cls, int m, const ClassContext& ctx);

// Smallest r such that the table only depends on coordinates of arity <= r.
int hypothesis_rank(const Hypothesis& h, const ClassContext& ctx);

// Max member rank; 0 for the empty class.
int class_rank(const HypothesisClass& cls, const ClassContext& ctx);

// Validates distinctness and declared ranks; throws on violation.
void validate_class(const HypothesisClass& cls, const ClassContext& ctx);

}  // namespace vcnk
