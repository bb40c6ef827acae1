#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "tw2/treewidth.hpp"

namespace tw2 {

// Proper 3-coloring of the subtree-intersection graph of the elements:
// phi[x] != phi[y] whenever some node's bag contains both x and y's subtrees
// intersect. Colors are 1..3.
using element_coloring = std::vector<int>;

element_coloring phi_coloring(const normalized_decomposition& nd, const poset& p);

// Landmarks of a min-max pair in the rooted plane tree: dedicated leaves
// a_leaf/b_leaf, their meet u, its parent pp, and the children v (toward
// a_leaf) and w (toward b_leaf). x/y/z is the bag labeling of B(u) fixed by
// the descent (set only past the relevant branch, -1 otherwise).
struct pair_context {
    int a = -1, b = -1;
    int a_leaf = -1, b_leaf = -1;
    int u = -1, pp = -1, v = -1, w = -1;
    int x = -1, y = -1, z = -1;
};

pair_context locate_pair(const normalized_decomposition& nd, const poset& p, int a, int b);

// Path of answers through the decision tree. Leaves are 3, 7, 10, 15.
struct signature_vector {
    int leaf = 0;
    bool left = false;                 // alpha1: a_leaf left of b_leaf
    bool alpha2 = false;               // exists q in B(u) with a <= q
    bool alpha4 = false;               // exists q in B(u) ∩ B(pp) with a <= q
    std::array<int, 3> alpha5{};       // (phi x, phi y, phi z) on the alpha4=no branch
    bool alpha6 = false;               // B(u) ∩ B(w) == {x, y}
    std::array<int, 3> alpha11{};      // (phi x, phi y, phi z) on the alpha4=yes branch
    std::array<bool, 3> alpha12{};     // (a <= z, z <= b, a0 <= x)
    int alpha8 = 0, alpha9 = 0;        // 2-colorings (1/2) of S and K
    int alpha13 = 0;                   // 4-coloring (1..4) of J
    int alpha14 = 0;                   // 2-coloring (1/2) of K-hat

    std::string key() const;  // class id: leaf + every answer on the path
};

// Auxiliary graph on a class; vertices index `members` (positions in the
// global pair list). Kind: 'S' special 2-cycles, 'K'/'H' root arcs (directed),
// 'J' plain 2-cycles.
struct aux_graph {
    char kind = 'S';
    int n = 0;
    std::vector<std::pair<int, int>> edges;
};

struct two_color_result {
    bool ok = false;
    std::vector<int> colors;    // 1/2, isolated vertices get 1
    std::vector<int> odd_walk;  // closed odd walk certificate when !ok
};

// Deterministic BFS bipartition (smallest vertex first).
two_color_result two_color(int n, const std::vector<std::pair<int, int>>& edges);

// S graph on a class at the alpha8 stage: edge iff the two pairs form an
// alternating 2-cycle and, for one ordering, u < w <= u' < w' < b_leaf in T.
aux_graph build_special_cycle_graph(const poset& p, const normalized_decomposition& nd,
                                    const std::vector<pair_context>& ctx,
                                    const std::vector<int>& members);

// K / K-hat graph: enumerate the strict alternating cycles inside the class,
// find each cycle's root (minimal u, then extreme b_leaf among equal-u pairs:
// rightmost for left classes, leftmost for right classes), add the arc
// root -> cyclic successor. Raises falsification(RootUndefined) if a cycle
// has no minimum u.
// max_len caps the enumerated cycle length; 0 means the class size.
aux_graph build_root_arc_graph(const poset& p, const normalized_decomposition& nd,
                               const std::vector<pair_context>& ctx,
                               const std::vector<int>& members, bool left, char kind,
                               int max_len = 0);

// J graphs at the alpha13 stage: edges are alternating 2-cycles inside the
// class, split into type 1 (comparable u's) and type 2 (incomparable).
// Raises falsification(EqualU) when a 2-cycle has u1 == u2.
std::pair<aux_graph, aux_graph> build_two_cycle_graph(const poset& p,
                                                      const normalized_decomposition& nd,
                                                      const std::vector<pair_context>& ctx,
                                                      const std::vector<int>& members);

struct class_partition {
    std::vector<pair_context> contexts;    // one per min-max pair
    std::vector<signature_vector> sigs;    // parallel to contexts
    std::map<std::string, pair_set> classes;
    nlohmann::json report;                 // per class: key, size, certified
};

// Full descent: computes every alpha, partitions MM(P) into reversible
// classes keyed by signature, and certifies each class with is_reversible.
// Requires nd.a0 < b in P for every maximal b (throws op_error BadA0).
// Raises falsification kinds: LabelingFailure, EqualU, RootUndefined,
// OddCycleS / OddCycleK / OddCycleJ1 / OddCycleJ2 / OddCycleKHat,
// ClassNotReversible.
class_partition partition_mm_pairs(const poset& p, const normalized_decomposition& nd,
                                   int max_cycle_len = 0);

// One reversing extension per non-empty class (a single extension when MM(P)
// is empty); kind mm, verified against is_realizer by construction.
realizer mm_realizer(const poset& p, const normalized_decomposition& nd,
                     int max_cycle_len = 0);

// Class-ID space sizes per leaf of the decision tree: {2, 12, 48, 576}; the
// total is 638.
std::array<int, 4> leaf_class_space();

}  // namespace tw2
