#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tw2/errors.hpp"

namespace tw2 {

// Ordered pair of element indices. For incomparable pairs (x,y) the intended
// reading is "some linear extension must put x above y".
using elem_pair = std::pair<int, int>;

// Set of ordered incomparable pairs, kept sorted and duplicate-free.
using pair_set = std::vector<elem_pair>;

// Finite strict order. Elements are referred to by index into `elements`;
// `lt` is the full transitive closure, `covers` its transitive reduction.
struct poset {
    std::vector<std::string> elements;
    std::vector<std::vector<uint8_t>> lt;  // lt[x][y] == 1 iff x < y
    std::vector<elem_pair> covers;         // (x,y) with x coverd by y (x ⋖ y)

    int n() const { return (int)elements.size(); }
    bool less(int x, int y) const { return lt[x][y] != 0; }
    bool leq(int x, int y) const { return x == y || lt[x][y] != 0; }
    bool incomparable(int x, int y) const { return x != y && !lt[x][y] && !lt[y][x]; }

    int index_of(const std::string& id) const;  // throws op_error("UnknownElement")
    std::vector<int> minimals() const;
    std::vector<int> maximals() const;
    bool is_chain() const;
    bool is_antichain() const;
};

// A permutation of 0..n-1 that extends the poset order.
using linear_extension = std::vector<int>;

enum class realizer_kind { full, mm };

// Family of linear extensions meant to reverse every pair of Inc(P) (full)
// or MM(P) (mm).
struct realizer {
    realizer_kind kind = realizer_kind::full;
    std::vector<linear_extension> extensions;
};

// Cyclic sequence of incomparable pairs (x_i,y_i) with x_i <= y_j iff j = i+1
// (indices mod k, <= reflexive). Witnesses non-reversibility of any pair set
// containing it.
struct strict_alternating_cycle {
    std::vector<elem_pair> pairs;
};

struct reversibility_result {
    bool reversible = false;
    std::optional<strict_alternating_cycle> witness;
};

struct realizer_check {
    bool ok = false;
    std::string detail;  // names the offending extension or unreversed pair
};

struct exact_dimension_result {
    int d = 0;
    realizer rlz;
};

enum class pair_target { inc, mm };

// --- construction & queries ------------------------------------------------

// Builds a poset from any generating set of relations (given as id pairs).
// Throws op_error kinds: DuplicateElement, CycleInRelations, UnknownElement.
poset new_poset(const std::vector<std::string>& elements,
                const std::vector<std::pair<std::string, std::string>>& relations);

// inc = Inc(P) (all ordered incomparable pairs), mm = min-max pairs.
void pair_sets(const poset& p, pair_set& inc, pair_set& mm);

// Reversible iff lt ∪ {(y,x) : (x,y) ∈ I} is acyclic; otherwise extracts a
// strict alternating cycle from the digraph cycle. Throws NotIncomparable.
reversibility_result is_reversible(const poset& p, const pair_set& I);

// Topological order of lt ∪ {(y,x) : (x,y) ∈ I}; ties broken by smallest
// element id. Throws NotReversible, NotIncomparable.
linear_extension reversing_extension(const poset& p, const pair_set& I);

// All strict alternating cycles of length ≤ max_len over `pairs`, each once
// up to rotation (lexicographically smallest pair first). These are exactly
// the chordless directed cycles of the pair digraph with arc p→q iff
// x_p ≤ y_q (reflexive ≤) and p ≠ q.
std::vector<strict_alternating_cycle>
strict_alternating_cycles(const poset& p, const pair_set& pairs, int max_len);

// Minimal number of reversible classes partitioning Inc(P) (target inc,
// = dim) or MM(P) (target mm, = dim*; 1 when MM empty). Backtracking with
// iterative deepening; guard limits |elements|, budget limits search nodes.
// Throws BudgetExceeded, ImpossibleBound, TooManyElements.
exact_dimension_result exact_dimension(const poset& p, pair_target target,
                                       int upper_bound = -1, int max_elems = 20,
                                       long long budget = 400'000'000);

// True iff every extension is a linear extension of p and every pair of the
// realizer's target set (Inc or MM per kind) is reversed by some extension.
realizer_check is_realizer(const poset& p, const realizer& r);

// Order-reversed copy (same element list).
poset dual(const poset& p);

// --- I/O ---------------------------------------------------------------------

// Schema: {"elements": ["a", ...], "relations": [["a","b"], ...]}.
poset poset_from_json(const nlohmann::json& j);
nlohmann::json poset_to_json(const poset& p);

// Schema: {"kind": "full"|"mm", "extensions": [["x","y",...], ...]}.
realizer realizer_from_json(const nlohmann::json& j, const poset& p);
nlohmann::json realizer_to_json(const realizer& r, const poset& p);

// Cover graph as a DOT digraph, edges oriented low→high.
std::string poset_to_dot(const poset& p);

}  // namespace tw2
