#include "tw2/treewidth.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace tw2 {

void graph::add_edge(int u, int v) {
    if (u == v || has_edge(u, v)) return;
    adj[u].push_back(v);
    adj[v].push_back(u);
}

bool graph::has_edge(int u, int v) const {
    return std::find(adj[u].begin(), adj[u].end(), v) != adj[u].end();
}

graph cover_graph(const poset& p) {
    graph g;
    g.n = p.n();
    g.adj.assign(g.n, {});
    for (const auto& [x, y] : p.covers) g.add_edge(x, y);
    return g;
}

decompose_result decompose_tw2(const graph& g) {
    int n = g.n;
    std::vector<std::set<int>> adj(n);
    for (int v = 0; v < n; ++v) adj[v] = std::set<int>(g.adj[v].begin(), g.adj[v].end());
    std::vector<uint8_t> alive(n, 1);
    std::vector<int> elim_time(n, -1);
    std::vector<std::vector<int>> elim_nbrs(n);
    std::vector<int> order;

    for (int step = 0; step < n; ++step) {
        int pick = -1;
        for (int v = 0; v < n; ++v)
            if (alive[v] && adj[v].size() <= 2) {
                pick = v;
                break;
            }
        if (pick < 0) break;
        elim_nbrs[pick] = std::vector<int>(adj[pick].begin(), adj[pick].end());
        if (adj[pick].size() == 2) {
            auto it = adj[pick].begin();
            int a = *it++, b = *it;
            adj[a].insert(b);  // fill edge
            adj[b].insert(a);
        }
        for (int w : elim_nbrs[pick]) adj[w].erase(pick);
        adj[pick].clear();
        alive[pick] = 0;
        elim_time[pick] = step;
        order.push_back(pick);
    }

    if ((int)order.size() < n) {
        tw_obstruction ob;
        for (int v = 0; v < n; ++v)
            if (alive[v]) {
                ob.residual_vertices.push_back(v);
                for (int w : adj[v])
                    if (v < w) ob.residual_edges.emplace_back(v, w);
            }
        return ob;
    }

    tree_decomposition td;
    td.bags.assign(n, {});
    td.node_adj.assign(n, {});
    std::vector<int> node_of(n);
    for (int i = 0; i < n; ++i) node_of[order[i]] = i;
    int prev_root = -1;
    for (int i = 0; i < n; ++i) {
        int v = order[i];
        td.bags[i] = elim_nbrs[v];
        td.bags[i].push_back(v);
        std::sort(td.bags[i].begin(), td.bags[i].end());
        int attach = -1;
        for (int w : elim_nbrs[v])  // first-eliminated neighbour
            if (attach == -1 || elim_time[w] < elim_time[attach]) attach = w;
        if (attach >= 0) {
            td.node_adj[i].push_back(node_of[attach]);
            td.node_adj[node_of[attach]].push_back(i);
        } else {
            // Last vertex of its component; chain component roots together
            // so the decomposition is a single tree.
            if (prev_root >= 0) {
                td.node_adj[i].push_back(prev_root);
                td.node_adj[prev_root].push_back(i);
            }
            prev_root = i;
        }
    }
    return td;
}

bool decomposition_ok(const decompose_result& r) {
    return std::holds_alternative<tree_decomposition>(r);
}

const tree_decomposition& decomposition_of(const decompose_result& r) {
    return std::get<tree_decomposition>(r);
}

bool verify_decomposition(const graph& g, const tree_decomposition& td, int max_width) {
    int m = td.num_nodes();
    if (m == 0) return g.n == 0;
    // Tree shape: connected with m-1 edges.
    int edge_count = 0;
    for (int u = 0; u < m; ++u) edge_count += (int)td.node_adj[u].size();
    if (edge_count != 2 * (m - 1)) return false;
    std::vector<uint8_t> seen(m, 0);
    std::queue<int> bfs;
    bfs.push(0);
    seen[0] = 1;
    int reached = 0;
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        ++reached;
        for (int w : td.node_adj[u])
            if (!seen[w]) {
                seen[w] = 1;
                bfs.push(w);
            }
    }
    if (reached != m) return false;

    for (int u = 0; u < m; ++u)
        if ((int)td.bags[u].size() > max_width + 1) return false;

    std::vector<std::vector<int>> nodes_of(g.n);
    for (int u = 0; u < m; ++u)
        for (int x : td.bags[u]) {
            if (x < 0 || x >= g.n) return false;
            nodes_of[x].push_back(u);
        }
    for (int x = 0; x < g.n; ++x) {
        if (nodes_of[x].empty()) return false;
        // Subtree connectivity: BFS inside T_x.
        std::set<int> tx(nodes_of[x].begin(), nodes_of[x].end());
        std::queue<int> q;
        q.push(nodes_of[x][0]);
        std::set<int> vis = {nodes_of[x][0]};
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (int w : td.node_adj[u])
                if (tx.count(w) && !vis.count(w)) {
                    vis.insert(w);
                    q.push(w);
                }
        }
        if (vis.size() != tx.size()) return false;
    }
    for (int v = 0; v < g.n; ++v)
        for (int w : g.adj[v]) {
            if (v > w) continue;
            bool covered = false;
            for (int u = 0; u < m && !covered; ++u)
                covered = std::binary_search(td.bags[u].begin(), td.bags[u].end(), v) &&
                          std::binary_search(td.bags[u].begin(), td.bags[u].end(), w);
            if (!covered) return false;
        }
    return true;
}

bool normalized_decomposition::bag_contains(int node, int elem) const {
    return std::binary_search(bags[node].begin(), bags[node].end(), elem);
}

namespace {

// Mutable unrooted tree used during normalization; neighbour lists are
// ordered and define the eventual plane order.
struct work_tree {
    std::vector<std::vector<int>> bags;  // sorted element lists
    std::vector<std::vector<int>> nbrs;
    std::vector<uint8_t> alive;

    int add_node(std::vector<int> bag) {
        bags.push_back(std::move(bag));
        nbrs.push_back({});
        alive.push_back(1);
        return (int)bags.size() - 1;
    }
    static void replace(std::vector<int>& lst, int from, int to) {
        *std::find(lst.begin(), lst.end(), from) = to;
    }
};

std::vector<int> bag_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<int> bag_difference(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace

normalized_decomposition normalize(const tree_decomposition& td, const poset& p, int a0) {
    if (p.n() < 3)
        throw op_error("WidthTooSmall",
                       "cannot pad bags to size 3 with fewer than 3 elements; use the exact oracle");
    for (int b : p.maximals())
        if (b != a0 && !p.less(a0, b))
            throw op_error("NoA0", "'" + p.elements[a0] + "' is not below maximal element '" +
                                       p.elements[b] + "'");
    {
        // Cover graph must be connected.
        graph g = cover_graph(p);
        std::vector<uint8_t> seen(g.n, 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        int cnt = 0;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            ++cnt;
            for (int w : g.adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    q.push(w);
                }
        }
        if (cnt != g.n) throw op_error("Disconnected", "cover graph is not connected");
        if (!verify_decomposition(g, td, 2))
            throw op_error("BadDecomposition", "input decomposition invalid or width > 2");
    }

    // Element tie-breaks go by id string, per the global smallest-ID rule.
    std::vector<int> rank(p.n());
    {
        std::vector<int> order(p.n());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return p.elements[a] < p.elements[b]; });
        for (int i = 0; i < p.n(); ++i) rank[order[i]] = i;
    }
    auto smallest = [&](const std::vector<int>& v) {
        return *std::min_element(v.begin(), v.end(),
                                 [&](int a, int b) { return rank[a] < rank[b]; });
    };

    work_tree t;
    for (int u = 0; u < td.num_nodes(); ++u) t.add_node(td.bags[u]);
    for (int u = 0; u < td.num_nodes(); ++u)
        for (int w : td.node_adj[u])
            if (u < w) {
                t.nbrs[u].push_back(w);
                t.nbrs[w].push_back(u);
            }

    // --- Step 1: pad every bag to size 3, pulling from a neighbour bag,
    // smallest id first. This extends subtrees T_x by adjacent nodes only.
    for (bool progress = true; progress;) {
        progress = false;
        bool deficient = false;
        for (int u = 0; u < (int)t.bags.size() && !progress; ++u) {
            if (!t.alive[u] || (int)t.bags[u].size() >= 3) continue;
            deficient = true;
            for (int w : t.nbrs[u]) {
                auto extra = bag_difference(t.bags[w], t.bags[u]);
                if (extra.empty()) continue;
                int e = smallest(extra);
                t.bags[u].insert(std::upper_bound(t.bags[u].begin(), t.bags[u].end(), e), e);
                progress = true;
                break;
            }
        }
        if (deficient && !progress)
            throw op_error("WidthTooSmall", "bag padding stuck; decomposition too degenerate");
        if (!deficient) break;
    }

    // --- Step 2: prune empty-intersection edges (cannot happen for a
    // connected cover graph after padding; handled defensively).
    for (bool again = true; again;) {
        again = false;
        for (int u = 0; u < (int)t.bags.size() && !again; ++u) {
            if (!t.alive[u]) continue;
            for (int w : t.nbrs[u]) {
                if (u > w) continue;
                if (!bag_intersection(t.bags[u], t.bags[w]).empty()) continue;
                // Elements strictly on w's side must be covered on u's side
                // too, otherwise the cover graph would be disconnected.
                std::set<int> side_u, side_w;
                std::vector<int> stack = {u};
                std::set<int> vis = {u, w};
                std::vector<int> comp_u = {u};
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    for (int x : t.bags[v]) side_u.insert(x);
                    for (int z : t.nbrs[v])
                        if (t.alive[z] && !vis.count(z)) {
                            vis.insert(z);
                            stack.push_back(z);
                            comp_u.push_back(z);
                        }
                }
                stack = {w};
                std::vector<int> comp_w = {w};
                std::set<int> vis2 = {u, w};
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    for (int x : t.bags[v]) side_w.insert(x);
                    for (int z : t.nbrs[v])
                        if (t.alive[z] && !vis2.count(z)) {
                            vis2.insert(z);
                            stack.push_back(z);
                            comp_w.push_back(z);
                        }
                }
                const std::vector<int>* kill = nullptr;
                if (std::includes(side_u.begin(), side_u.end(), side_w.begin(), side_w.end()))
                    kill = &comp_w;
                else if (std::includes(side_w.begin(), side_w.end(), side_u.begin(),
                                       side_u.end()))
                    kill = &comp_u;
                else
                    throw op_error("Disconnected",
                                   "empty bag intersection splits the element set");
                for (int v : *kill) t.alive[v] = 0;
                int keep = (kill == &comp_w) ? u : w;
                int drop = (kill == &comp_w) ? w : u;
                t.alive[keep] = 1;
                std::erase(t.nbrs[keep], drop);
                again = true;
                break;
            }
        }
    }

    // --- Step 3: repair edge intersections. |∩|=3 → contract; |∩|=1 →
    // subdivide with a bag {common, x, y}, x/y the smallest fresh elements
    // of each side.
    for (bool again = true; again;) {
        again = false;
        for (int u = 0; u < (int)t.bags.size() && !again; ++u) {
            if (!t.alive[u]) continue;
            for (int w : t.nbrs[u]) {
                auto common = bag_intersection(t.bags[u], t.bags[w]);
                if (common.size() == 2) continue;
                if (common.size() == 3) {
                    // Identical bags: merge w into u, splicing w's other
                    // neighbours into u's list at w's position.
                    auto itw = std::find(t.nbrs[u].begin(), t.nbrs[u].end(), w);
                    std::vector<int> spliced;
                    for (int z : t.nbrs[w])
                        if (z != u) spliced.push_back(z);
                    itw = t.nbrs[u].erase(itw);
                    t.nbrs[u].insert(itw, spliced.begin(), spliced.end());
                    for (int z : spliced) work_tree::replace(t.nbrs[z], w, u);
                    t.alive[w] = 0;
                    t.nbrs[w].clear();
                } else if (common.size() == 1) {
                    std::vector<int> bag = common;
                    bag.push_back(smallest(bag_difference(t.bags[u], t.bags[w])));
                    bag.push_back(smallest(bag_difference(t.bags[w], t.bags[u])));
                    std::sort(bag.begin(), bag.end());
                    int mid = t.add_node(bag);
                    work_tree::replace(t.nbrs[u], w, mid);
                    work_tree::replace(t.nbrs[w], u, mid);
                    t.nbrs[mid] = {u, w};
                } else {
                    throw op_error("Disconnected", "empty intersection survived pruning");
                }
                again = true;
                break;
            }
        }
    }

    // --- Step 4: attach the root leaf r at the smallest node containing a0.
    int r_prime = -1;
    for (int u = 0; u < (int)t.bags.size() && r_prime < 0; ++u)
        if (t.alive[u] && std::binary_search(t.bags[u].begin(), t.bags[u].end(), a0)) r_prime = u;
    if (r_prime < 0) throw op_error("BadDecomposition", "a0 missing from every bag");
    std::vector<int> rbag = {a0, smallest(bag_difference(t.bags[r_prime], {a0}))};
    std::sort(rbag.begin(), rbag.end());
    int r = t.add_node(rbag);
    t.nbrs[r] = {r_prime};
    t.nbrs[r_prime].push_back(r);

    // --- Root the tree at r and compact to the final arrays.
    normalized_decomposition nd;
    std::vector<int> new_id(t.bags.size(), -1);
    {
        std::vector<int> stack = {r};
        std::vector<int> par_work(t.bags.size(), -1);
        std::vector<uint8_t> vis(t.bags.size(), 0);
        vis[r] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            new_id[u] = (int)nd.bags.size();
            nd.bags.push_back(t.bags[u]);
            nd.parent.push_back(par_work[u] < 0 ? -1 : new_id[par_work[u]]);
            nd.children.push_back({});
            if (par_work[u] >= 0) nd.children[new_id[par_work[u]]].push_back(new_id[u]);
            // Push children in reverse so they are visited (and numbered) in
            // plane order.
            for (auto it = t.nbrs[u].rbegin(); it != t.nbrs[u].rend(); ++it)
                if (t.alive[*it] && !vis[*it]) {
                    vis[*it] = 1;
                    par_work[*it] = u;
                    stack.push_back(*it);
                }
        }
    }
    nd.root = new_id[r];
    nd.a0 = a0;

    // --- Step 5: per-min-max-pair leaves, appended last in plane order.
    pair_set inc, mm;
    pair_sets(p, inc, mm);
    std::set<int> mins, maxs;
    for (auto& [a, b] : mm) {
        mins.insert(a);
        maxs.insert(b);
    }
    auto by_rank = [&](const std::set<int>& s) {
        std::vector<int> v(s.begin(), s.end());
        std::sort(v.begin(), v.end(), [&](int a, int b) { return rank[a] < rank[b]; });
        return v;
    };
    int base_nodes = (int)nd.bags.size();
    auto attach_leaf = [&](int elem) {
        // Attachment candidates exclude the root leaf and other pair leaves,
        // so r, a^T, b^T all stay leaves.
        int w = -1;
        for (int u = 0; u < base_nodes && w < 0; ++u)
            if (u != nd.root && nd.bag_contains(u, elem)) w = u;
        std::vector<int> bag = {elem, smallest(bag_difference(nd.bags[w], {elem}))};
        std::sort(bag.begin(), bag.end());
        int leaf = (int)nd.bags.size();
        nd.bags.push_back(bag);
        nd.parent.push_back(w);
        nd.children.push_back({});
        nd.children[w].push_back(leaf);
        return leaf;
    };
    for (int a : by_rank(mins)) nd.leaf_of_min[a] = attach_leaf(a);
    for (int b : by_rank(maxs)) nd.leaf_of_max[b] = attach_leaf(b);

    // --- Euler tour for tree order queries.
    int m = nd.num_nodes();
    nd.depth.assign(m, 0);
    nd.tin.assign(m, 0);
    nd.tout.assign(m, 0);
    int timer = 0;
    std::vector<std::pair<int, size_t>> stk = {{nd.root, 0}};
    nd.tin[nd.root] = timer++;
    while (!stk.empty()) {
        auto& [u, i] = stk.back();
        if (i == nd.children[u].size()) {
            nd.tout[u] = timer++;
            stk.pop_back();
            continue;
        }
        int c = nd.children[u][i++];
        nd.depth[c] = nd.depth[u] + 1;
        nd.tin[c] = timer++;
        stk.push_back({c, 0});
    }
    return nd;
}

int meet(const normalized_decomposition& nd, int v, int v2) {
    if (!nd.tree_incomparable(v, v2))
        throw op_error("ComparableNodes", "meet requires tree-incomparable nodes");
    int a = v, b = v2;
    while (nd.depth[a] > nd.depth[b]) a = nd.parent[a];
    while (nd.depth[b] > nd.depth[a]) b = nd.parent[b];
    while (a != b) {
        a = nd.parent[a];
        b = nd.parent[b];
    }
    return a;
}

// Child of u on the path from u down to its strict descendant v.
static int child_toward(const normalized_decomposition& nd, int u, int v) {
    int c = v;
    while (nd.parent[c] != u) c = nd.parent[c];
    return c;
}

bool is_left_of(const normalized_decomposition& nd, int v, int v2) {
    int u = meet(nd, v, v2);
    int c1 = child_toward(nd, u, v);
    int c2 = child_toward(nd, u, v2);
    const auto& ch = nd.children[u];
    int i1 = (int)(std::find(ch.begin(), ch.end(), c1) - ch.begin());
    int i2 = (int)(std::find(ch.begin(), ch.end(), c2) - ch.begin());
    return i1 < i2;
}

// Which component of T − w (or T − edge) a subtree T_x lies in.
namespace {

std::vector<int> nodes_of_element(const normalized_decomposition& nd, int x) {
    std::vector<int> out;
    for (int u = 0; u < nd.num_nodes(); ++u)
        if (nd.bag_contains(u, x)) out.push_back(u);
    return out;
}

}  // namespace

std::vector<int> hit_elements(const normalized_decomposition& nd, const poset& p, int x, int y,
                              int node) {
    if (!p.leq(x, y)) throw op_error("NotComparable", "hit requires x <= y");
    auto tx = nodes_of_element(nd, x), ty = nodes_of_element(nd, y);
    // Component id of a node t in T − node: -1 if t == node, else the
    // neighbour of `node` toward t.
    auto side = [&](const std::vector<int>& sub) -> int {
        for (int t : sub)
            if (t == node) return -1;
        int t = sub[0];
        if (nd.tree_lt(node, t)) return child_toward(nd, node, t);
        return nd.parent[node] < 0 ? -2 : nd.parent[node];
    };
    int sx = side(tx), sy = side(ty);
    if (sx != -1 && sy != -1 && sx == sy)
        throw op_error("NotOnPath", "node not on a path between bags of x and y");
    std::vector<int> out;
    for (int z : nd.bags[node])
        if (p.leq(x, z) && p.leq(z, y)) out.push_back(z);
    return out;
}

std::vector<int> hit_elements_edge(const normalized_decomposition& nd, const poset& p, int x,
                                   int y, int node1, int node2) {
    if (!p.leq(x, y)) throw op_error("NotComparable", "hit requires x <= y");
    int child, par;
    if (nd.parent[node1] == node2) {
        child = node1;
        par = node2;
    } else if (nd.parent[node2] == node1) {
        child = node2;
        par = node1;
    } else {
        throw op_error("NotOnPath", "not a tree edge");
    }
    // Sides of T − edge: below (descendants of child) / above.
    auto sides = [&](int e) {
        bool below = false, above = false;
        for (int u : nodes_of_element(nd, e))
            (nd.tree_leq(child, u) ? below : above) = true;
        return std::pair{below, above};
    };
    auto [xb, xa] = sides(x);
    auto [yb, ya] = sides(y);
    if ((xb && yb && !xa && !ya) || (xa && ya && !xb && !yb))
        throw op_error("NotOnPath", "edge not on a path between bags of x and y");
    std::vector<int> out;
    for (int z : bag_intersection(nd.bags[node1], nd.bags[node2]))
        if (p.leq(x, z) && p.leq(z, y)) out.push_back(z);
    (void)par;
    return out;
}

std::vector<int> hit_chain(const normalized_decomposition& nd, const poset& p, int x, int y,
                           const std::vector<int>& nodes) {
    if (!p.leq(x, y)) throw op_error("NotComparable", "hit requires x <= y");
    std::vector<int> chain;
    int prev = x;
    for (int w : nodes) {
        int pick = -1;
        for (int z : nd.bags[w])
            if (p.leq(prev, z) && p.leq(z, y) &&
                (pick < 0 || p.elements[z] < p.elements[pick]))
                pick = z;
        if (pick < 0) throw op_error("NotOnPath", "no hit witness at some chain node");
        chain.push_back(pick);
        prev = pick;
    }
    return chain;
}

std::string decomposition_to_dot(const tree_decomposition& td, const poset& p) {
    std::ostringstream os;
    os << "graph decomposition {\n";
    for (int u = 0; u < td.num_nodes(); ++u) {
        os << "  n" << u << " [label=\"";
        for (size_t i = 0; i < td.bags[u].size(); ++i)
            os << (i ? "," : "") << p.elements[td.bags[u][i]];
        os << "\"];\n";
    }
    for (int u = 0; u < td.num_nodes(); ++u)
        for (int w : td.node_adj[u])
            if (u < w) os << "  n" << u << " -- n" << w << ";\n";
    os << "}\n";
    return os.str();
}

std::string normalized_to_dot(const normalized_decomposition& nd, const poset& p) {
    std::ostringstream os;
    os << "digraph normalized {\n";
    for (int u = 0; u < nd.num_nodes(); ++u) {
        os << "  n" << u << " [label=\"";
        for (size_t i = 0; i < nd.bags[u].size(); ++i)
            os << (i ? "," : "") << p.elements[nd.bags[u][i]];
        if (u == nd.root) os << " (r)";
        os << "\"];\n";
    }
    for (int u = 0; u < nd.num_nodes(); ++u)
        if (nd.parent[u] >= 0) os << "  n" << nd.parent[u] << " -> n" << u << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace tw2
