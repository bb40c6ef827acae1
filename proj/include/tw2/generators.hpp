#pragma once

#include <cstdint>

#include "tw2/poset.hpp"

namespace tw2 {

// Parameters of a seeded random instance; identical values produce the
// identical poset.
struct seed_params {
    uint64_t seed = 0;
    int n = 10;
    double density = 0.8;  // probability of keeping each 2-tree edge
};

// Standard example S_n: a_i < b_j iff i != j; dim(S_n) = n. Throws BadN.
poset standard_example(int n);

// Kelly-style poset Q_n: contains S_n induced on {a_i} ∪ {b_i}, has a
// planar two-chain diagram, and its cover graph stops being a partial
// 2-tree from n = 5 on. Throws BadN.
poset kelly(int n);

// Random partial 2-tree, random edge deletions, edges oriented along a
// random permutation, transitive closure. Cover graph is a subgraph of the
// 2-tree, so treewidth ≤ 2 is guaranteed.
poset random_tw2_poset(const seed_params& s);

}  // namespace tw2
