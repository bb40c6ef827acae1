#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tw2/poset.hpp"

namespace tw2 {

// Simple undirected graph on vertices 0..n-1.
struct graph {
    int n = 0;
    std::vector<std::vector<int>> adj;

    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;
};

graph cover_graph(const poset& p);

struct tree_decomposition {
    std::vector<std::vector<int>> node_adj;  // tree adjacency
    std::vector<std::vector<int>> bags;      // node → sorted vertex list
    int num_nodes() const { return (int)bags.size(); }
};

// Residual graph in which every vertex has degree ≥ 3; certifies
// treewidth ≥ 3 of the input (2-trees are 2-degenerate, and the reduction
// only takes minors).
struct tw_obstruction {
    std::vector<int> residual_vertices;
    std::vector<std::pair<int, int>> residual_edges;
};

using decompose_result = std::variant<tree_decomposition, tw_obstruction>;

// Repeated elimination of degree-≤2 vertices with a fill edge; bags are the
// eliminated vertex plus its current neighbours; each bag attaches to the bag
// of its first-eliminated neighbour.
decompose_result decompose_tw2(const graph& g);

bool decomposition_ok(const decompose_result& r);
const tree_decomposition& decomposition_of(const decompose_result& r);

// Checks vertex coverage, edge coverage, subtree connectivity, width bound,
// and that the node adjacency forms a tree.
bool verify_decomposition(const graph& g, const tree_decomposition& td, int max_width);

// Rooted plane tree with size-3 internal bags, size-2 edge intersections, a
// 2-element root leaf containing a0, and one dedicated leaf per element
// occurring as the min (resp. max) of a min-max pair.
struct normalized_decomposition {
    std::vector<std::vector<int>> bags;        // node → sorted element list
    std::vector<int> parent;                   // node → parent, -1 at root
    std::vector<std::vector<int>> children;    // plane order
    int root = -1;
    int a0 = -1;
    std::map<int, int> leaf_of_min;            // element → a^T
    std::map<int, int> leaf_of_max;            // element → b^T
    std::vector<int> depth;
    std::vector<int> tin, tout;                // Euler intervals for ancestry

    int num_nodes() const { return (int)bags.size(); }
    // Tree order: u ≤ v iff u lies on the root→v path.
    bool tree_leq(int u, int v) const { return tin[u] <= tin[v] && tout[v] <= tout[u]; }
    bool tree_lt(int u, int v) const { return u != v && tree_leq(u, v); }
    bool tree_incomparable(int u, int v) const { return !tree_leq(u, v) && !tree_leq(v, u); }
    bool bag_contains(int node, int elem) const;
};

// Implements, in order: bag padding to size 3; pruning of empty-intersection
// edges; edge-intersection repair (contract |∩|=3, subdivide |∩|=1);
// root-leaf attachment at a node containing a0; per-min-max-pair leaf
// attachment; plane order = insertion order with new leaves appended last.
// Throws WidthTooSmall (fewer than 3 elements), NoA0, Disconnected.
normalized_decomposition normalize(const tree_decomposition& td, const poset& p, int a0);

// Maximum common ancestor of tree-incomparable nodes. Throws ComparableNodes.
int meet(const normalized_decomposition& nd, int v, int v2);

// True iff at u = v∧v′ the edge toward v precedes the edge toward v′ in the
// plane (child) order. Throws ComparableNodes.
bool is_left_of(const normalized_decomposition& nd, int v, int v2);

// Witnesses z ∈ B(w) (node form) or z ∈ B(w1)∩B(w2) (edge form) with
// x ≤ z ≤ y. Throws NotComparable, NotOnPath.
std::vector<int> hit_elements(const normalized_decomposition& nd, const poset& p, int x, int y,
                              int node);
std::vector<int> hit_elements_edge(const normalized_decomposition& nd, const poset& p, int x,
                                   int y, int node1, int node2);
// Chained form: greedily picks x ≤ z_1 ≤ ... ≤ z_t ≤ y along the given nodes.
std::vector<int> hit_chain(const normalized_decomposition& nd, const poset& p, int x, int y,
                           const std::vector<int>& nodes);

std::string decomposition_to_dot(const tree_decomposition& td, const poset& p);
std::string normalized_to_dot(const normalized_decomposition& nd, const poset& p);

}  // namespace tw2
