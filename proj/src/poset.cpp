#include "tw2/poset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>

namespace tw2 {

int poset::index_of(const std::string& id) const {
    for (int i = 0; i < n(); ++i)
        if (elements[i] == id) return i;
    throw op_error("UnknownElement", "no element named '" + id + "'");
}

std::vector<int> poset::minimals() const {
    std::vector<int> out;
    for (int x = 0; x < n(); ++x) {
        bool min = true;
        for (int y = 0; y < n() && min; ++y)
            if (lt[y][x]) min = false;
        if (min) out.push_back(x);
    }
    return out;
}

std::vector<int> poset::maximals() const {
    std::vector<int> out;
    for (int x = 0; x < n(); ++x) {
        bool max = true;
        for (int y = 0; y < n() && max; ++y)
            if (lt[x][y]) max = false;
        if (max) out.push_back(x);
    }
    return out;
}

bool poset::is_chain() const {
    for (int x = 0; x < n(); ++x)
        for (int y = x + 1; y < n(); ++y)
            if (!lt[x][y] && !lt[y][x]) return false;
    return true;
}

bool poset::is_antichain() const {
    for (int x = 0; x < n(); ++x)
        for (int y = 0; y < n(); ++y)
            if (lt[x][y]) return false;
    return true;
}

static std::vector<elem_pair> transitive_reduction(const std::vector<std::vector<uint8_t>>& lt) {
    int n = (int)lt.size();
    std::vector<elem_pair> covers;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (!lt[x][y]) continue;
            bool direct = true;
            for (int z = 0; z < n && direct; ++z)
                if (lt[x][z] && lt[z][y]) direct = false;
            if (direct) covers.emplace_back(x, y);
        }
    std::sort(covers.begin(), covers.end());
    return covers;
}

poset new_poset(const std::vector<std::string>& elements,
                const std::vector<std::pair<std::string, std::string>>& relations) {
    poset p;
    p.elements = elements;
    std::map<std::string, int> idx;
    for (int i = 0; i < (int)elements.size(); ++i) {
        if (!idx.emplace(elements[i], i).second)
            throw op_error("DuplicateElement", "element '" + elements[i] + "' listed twice");
    }
    int n = p.n();
    p.lt.assign(n, std::vector<uint8_t>(n, 0));
    for (const auto& [a, b] : relations) {
        auto ia = idx.find(a), ib = idx.find(b);
        if (ia == idx.end()) throw op_error("UnknownElement", "relation mentions '" + a + "'");
        if (ib == idx.end()) throw op_error("UnknownElement", "relation mentions '" + b + "'");
        if (ia->second == ib->second)
            throw op_error("CycleInRelations", "reflexive relation on '" + a + "'");
        p.lt[ia->second][ib->second] = 1;
    }
    // Warshall closure, then irreflexivity/antisymmetry check.
    for (int k = 0; k < n; ++k)
        for (int x = 0; x < n; ++x) {
            if (!p.lt[x][k]) continue;
            for (int y = 0; y < n; ++y)
                if (p.lt[k][y]) p.lt[x][y] = 1;
        }
    for (int x = 0; x < n; ++x)
        for (int y = x; y < n; ++y)
            if ((x == y && p.lt[x][x]) || (x != y && p.lt[x][y] && p.lt[y][x]))
                throw op_error("CycleInRelations", "closure of relations contains a cycle through '" +
                                                       elements[x] + "'");
    p.covers = transitive_reduction(p.lt);
    return p;
}

void pair_sets(const poset& p, pair_set& inc, pair_set& mm) {
    inc.clear();
    mm.clear();
    std::vector<uint8_t> is_min(p.n(), 0), is_max(p.n(), 0);
    for (int x : p.minimals()) is_min[x] = 1;
    for (int x : p.maximals()) is_max[x] = 1;
    for (int x = 0; x < p.n(); ++x)
        for (int y = 0; y < p.n(); ++y) {
            if (!p.incomparable(x, y)) continue;
            inc.emplace_back(x, y);
            if (is_min[x] && is_max[y]) mm.emplace_back(x, y);
        }
}

static void check_incomparable(const poset& p, const pair_set& I) {
    for (const auto& [x, y] : I)
        if (!p.incomparable(x, y))
            throw op_error("NotIncomparable", "pair (" + p.elements[x] + "," + p.elements[y] +
                                                  ") is not incomparable");
}

// Digraph covers ∪ {(y,x) : (x,y) ∈ I}; acyclic iff I reversible.
static std::vector<std::vector<int>> augmented_digraph(const poset& p, const pair_set& I) {
    std::vector<std::vector<int>> adj(p.n());
    for (const auto& [x, y] : p.covers) adj[x].push_back(y);
    for (const auto& [x, y] : I) adj[y].push_back(x);
    return adj;
}

static bool digraph_acyclic(const std::vector<std::vector<int>>& adj) {
    int n = (int)adj.size();
    std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
    std::vector<std::pair<int, size_t>> stack;
    for (int s = 0; s < n; ++s) {
        if (color[s]) continue;
        stack.push_back({s, 0});
        color[s] = 1;
        while (!stack.empty()) {
            auto& [v, i] = stack.back();
            if (i == adj[v].size()) {
                color[v] = 2;
                stack.pop_back();
                continue;
            }
            int w = adj[v][i++];
            if (color[w] == 1) return false;
            if (color[w] == 0) {
                color[w] = 1;
                stack.push_back({w, 0});
            }
        }
    }
    return true;
}

// Pair digraph: arc p→q iff x_p ≤ y_q (reflexive) and p ≠ q.
static std::vector<std::vector<int>> pair_digraph(const poset& p, const pair_set& I) {
    int m = (int)I.size();
    std::vector<std::vector<int>> adj(m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (a != b && p.leq(I[a].first, I[b].second)) adj[a].push_back(b);
    return adj;
}

static std::vector<int> rotate_canonical(std::vector<int> cyc, const pair_set& I) {
    int best = 0;
    for (int i = 1; i < (int)cyc.size(); ++i)
        if (I[cyc[i]] < I[cyc[best]]) best = i;
    std::rotate(cyc.begin(), cyc.begin() + best, cyc.end());
    return cyc;
}

reversibility_result is_reversible(const poset& p, const pair_set& I) {
    check_incomparable(p, I);
    if (digraph_acyclic(augmented_digraph(p, I))) return {true, std::nullopt};

    // Extract a witness: a shortest directed cycle of the pair digraph is
    // chordless, hence a strict alternating cycle.
    auto adj = pair_digraph(p, I);
    int m = (int)I.size();
    std::vector<int> best_cycle;
    for (int s = 0; s < m; ++s) {
        std::vector<int> par(m, -2);
        std::queue<int> q;
        q.push(s);
        par[s] = -1;
        bool closed = false;
        while (!q.empty() && !closed) {
            int v = q.front();
            q.pop();
            for (int w : adj[v]) {
                if (w == s) {  // cycle s → ... → v → s
                    std::vector<int> cyc;
                    for (int u = v; u != -1; u = par[u]) cyc.push_back(u);
                    std::reverse(cyc.begin(), cyc.end());
                    if (best_cycle.empty() || cyc.size() < best_cycle.size()) best_cycle = cyc;
                    closed = true;
                    break;
                }
                if (par[w] == -2) {
                    par[w] = v;
                    q.push(w);
                }
            }
        }
    }
    if (best_cycle.empty())
        throw op_error("InternalError", "augmented digraph cyclic but pair digraph acyclic");
    best_cycle = rotate_canonical(best_cycle, I);
    strict_alternating_cycle w;
    for (int i : best_cycle) w.pairs.push_back(I[i]);
    return {false, w};
}

// Ranks element ids lexicographically; used for deterministic tie-breaking.
static std::vector<int> id_rank(const poset& p) {
    std::vector<int> order(p.n());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return p.elements[a] < p.elements[b]; });
    std::vector<int> rank(p.n());
    for (int i = 0; i < p.n(); ++i) rank[order[i]] = i;
    return rank;
}

linear_extension reversing_extension(const poset& p, const pair_set& I) {
    check_incomparable(p, I);
    auto adj = augmented_digraph(p, I);
    std::vector<int> indeg(p.n(), 0);
    for (int v = 0; v < p.n(); ++v)
        for (int w : adj[v]) ++indeg[w];
    auto rank = id_rank(p);
    auto cmp = [&](int a, int b) { return rank[a] > rank[b]; };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
    for (int v = 0; v < p.n(); ++v)
        if (indeg[v] == 0) ready.push(v);
    linear_extension out;
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        out.push_back(v);
        for (int w : adj[v])
            if (--indeg[w] == 0) ready.push(w);
    }
    if ((int)out.size() != p.n())
        throw op_error("NotReversible", "pair set admits no reversing linear extension");
    return out;
}

std::vector<strict_alternating_cycle>
strict_alternating_cycles(const poset& p, const pair_set& pairs, int max_len) {
    check_incomparable(p, pairs);
    int m = (int)pairs.size();
    auto adj = pair_digraph(p, pairs);
    std::vector<std::vector<uint8_t>> arc(m, std::vector<uint8_t>(m, 0));
    for (int a = 0; a < m; ++a)
        for (int b : adj[a]) arc[a][b] = 1;

    // Vertex order for canonical starts: lexicographic by pair.
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return pairs[a] < pairs[b]; });
    std::vector<int> pos(m);
    for (int i = 0; i < m; ++i) pos[order[i]] = i;

    std::vector<strict_alternating_cycle> out;
    std::vector<int> path;
    std::vector<uint8_t> on_path(m, 0);

    // Chordless directed cycles, rooted at their lexicographically smallest
    // pair s: extend induced paths s,v1,...,vt with pos[vi] > pos[s]; close
    // when an arc back to s exists (in which case no extension is chordless).
    auto dfs = [&](auto&& self, int s) -> void {
        int e = path.back();
        for (int v : adj[e]) {
            if (v == s || on_path[v] || pos[v] < pos[s]) continue;
            if ((int)path.size() + 1 > max_len) continue;
            // Chord checks: arcs between v and non-adjacent path vertices are
            // forbidden; the back-arc v→e is a chord unless e == s (where it
            // would be the closing arc of a 2-cycle); the arc v→s is the
            // potential closing arc and forces closing now.
            bool induced = (e == s) || !arc[v][e];
            for (size_t i = 0; i + 1 < path.size() && induced; ++i) {
                if (arc[path[i]][v]) induced = false;
                if (i > 0 && arc[v][path[i]]) induced = false;
            }
            if (!induced) continue;
            if (arc[v][s]) {
                // Close immediately: extending past v would leave v→s as a
                // chord, so no longer chordless cycle goes through this path.
                strict_alternating_cycle c;
                for (int i : path) c.pairs.push_back(pairs[i]);
                c.pairs.push_back(pairs[v]);
                out.push_back(c);
                continue;
            }
            path.push_back(v);
            on_path[v] = 1;
            self(self, s);
            on_path[v] = 0;
            path.pop_back();
        }
    };
    if (max_len >= 2) {
        for (int s : order) {
            path = {s};
            on_path[s] = 1;
            dfs(dfs, s);
            on_path[s] = 0;
        }
    }
    return out;
}

static pair_set target_pairs(const poset& p, pair_target target) {
    pair_set inc, mm;
    pair_sets(p, inc, mm);
    return target == pair_target::inc ? inc : mm;
}

namespace {

// Backtracking state for exact_dimension: assigns each pair to one of d
// classes, checking that no class's augmented digraph becomes cyclic.
struct dim_search {
    const poset& p;
    const pair_set& pairs;
    int d;
    long long budget;
    std::vector<std::vector<int>> class_of_members;  // class → pair indices
    std::vector<int> order;                          // search order over pairs
    std::vector<int> assignment;                     // pair → class or -1
    std::vector<std::vector<int>> cov;               // cover adjacency
    std::vector<std::vector<std::vector<int>>> extra;  // class → y → reversed x's

    void init_adjacency() {
        cov.assign(p.n(), {});
        for (auto& [x, y] : p.covers) cov[x].push_back(y);
        extra.assign(d, std::vector<std::vector<int>>(p.n()));
        for (int c = 0; c < d; ++c)
            for (int pi : class_of_members[c])
                extra[c][pairs[pi].second].push_back(pairs[pi].first);
    }

    bool reaches(int from, int to, int cls) const {
        // DFS from `from` over covers ∪ reversed arcs of class `cls`.
        std::vector<uint8_t> seen(p.n(), 0);
        std::vector<int> stack = {from};
        seen[from] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v == to) return true;
            for (auto* lst : {&cov[v], &extra[cls][v]})
                for (int w : *lst)
                    if (!seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
        }
        return false;
    }

    bool solve(size_t k, int used) {
        if (budget-- <= 0) throw op_error("BudgetExceeded", "exact_dimension search budget exhausted");
        if (k == order.size()) return true;
        int pi = order[k];
        if (assignment[pi] >= 0) return solve(k + 1, used);  // pinned clique pair
        int limit = std::min(used + 1, d);
        for (int c = 0; c < limit; ++c) {
            auto [x, y] = pairs[pi];
            // Adding (x,y) reverses y above x; cycle iff x already reaches y.
            if (reaches(x, y, c)) continue;
            class_of_members[c].push_back(pi);
            extra[c][y].push_back(x);
            assignment[pi] = c;
            if (solve(k + 1, std::max(used, c + 1))) return true;
            assignment[pi] = -1;
            extra[c][y].pop_back();
            class_of_members[c].pop_back();
        }
        return false;
    }
};

}  // namespace

exact_dimension_result exact_dimension(const poset& p, pair_target target, int upper_bound,
                                       int max_elems, long long budget) {
    if (p.n() > max_elems)
        throw op_error("TooManyElements", "exact_dimension guard: " + std::to_string(p.n()) +
                                              " elements > " + std::to_string(max_elems));
    pair_set pairs = target_pairs(p, target);
    realizer_kind kind = target == pair_target::inc ? realizer_kind::full : realizer_kind::mm;
    if (pairs.empty()) {
        if (upper_bound == 0) throw op_error("ImpossibleBound", "dimension is 1 > bound 0");
        return {1, {kind, {reversing_extension(p, {})}}};
    }
    int m = (int)pairs.size();

    // Conflict graph: pairs that form a strict 2-cycle can never share a
    // class. A greedy max clique gives a lower bound and is pinned to
    // distinct classes up front (valid symmetry breaking).
    std::vector<std::vector<uint8_t>> conflict(m, std::vector<uint8_t>(m, 0));
    std::vector<int> degree(m, 0);
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            if (p.leq(pairs[a].first, pairs[b].second) && p.leq(pairs[b].first, pairs[a].second)) {
                conflict[a][b] = conflict[b][a] = 1;
                ++degree[a];
                ++degree[b];
            }
    std::vector<int> by_degree(m);
    std::iota(by_degree.begin(), by_degree.end(), 0);
    std::sort(by_degree.begin(), by_degree.end(), [&](int a, int b) {
        return degree[a] != degree[b] ? degree[a] > degree[b] : pairs[a] < pairs[b];
    });
    std::vector<int> clique;
    for (int v : by_degree) {
        bool ok = true;
        for (int u : clique)
            if (!conflict[u][v]) {
                ok = false;
                break;
            }
        if (ok) clique.push_back(v);
    }

    std::vector<int> order = clique;
    {
        std::vector<uint8_t> in_clique(m, 0);
        for (int v : clique) in_clique[v] = 1;
        for (int v : by_degree)
            if (!in_clique[v]) order.push_back(v);
    }

    int lower = std::max(1, (int)clique.size());
    int cap = upper_bound >= 0 ? upper_bound : m;
    for (int d = lower; d <= m; ++d) {
        if (d > cap)
            throw op_error("ImpossibleBound",
                           "no partition within upper bound " + std::to_string(cap));
        dim_search s{p, pairs, d, budget, {}, order, std::vector<int>(m, -1), {}, {}};
        s.class_of_members.assign(d, {});
        for (int i = 0; i < (int)clique.size(); ++i) {
            s.class_of_members[i].push_back(clique[i]);
            s.assignment[clique[i]] = i;
        }
        s.init_adjacency();
        if (s.solve(0, (int)clique.size())) {
            realizer r;
            r.kind = kind;
            int nonempty = 0;
            for (int c = 0; c < d; ++c) {
                if (s.class_of_members[c].empty()) continue;
                ++nonempty;
                pair_set cls;
                for (int pi : s.class_of_members[c]) cls.push_back(pairs[pi]);
                std::sort(cls.begin(), cls.end());
                r.extensions.push_back(reversing_extension(p, cls));
            }
            return {nonempty, r};
        }
        budget = s.budget;  // carry remaining budget into the next depth
    }
    throw op_error("InternalError", "one class per pair must always succeed");
}

realizer_check is_realizer(const poset& p, const realizer& r) {
    std::vector<std::vector<int>> pos;
    for (size_t e = 0; e < r.extensions.size(); ++e) {
        const auto& L = r.extensions[e];
        if ((int)L.size() != p.n())
            return {false, "extension " + std::to_string(e) + " is not a permutation"};
        std::vector<int> q(p.n(), -1);
        for (int i = 0; i < p.n(); ++i) {
            if (L[i] < 0 || L[i] >= p.n() || q[L[i]] != -1)
                return {false, "extension " + std::to_string(e) + " is not a permutation"};
            q[L[i]] = i;
        }
        for (const auto& [x, y] : p.covers)
            if (q[x] > q[y])
                return {false, "extension " + std::to_string(e) + " violates " + p.elements[x] +
                                   " < " + p.elements[y]};
        pos.push_back(std::move(q));
    }
    pair_set inc, mm;
    pair_sets(p, inc, mm);
    const pair_set& tgt = r.kind == realizer_kind::full ? inc : mm;
    for (const auto& [x, y] : tgt) {
        bool reversed = false;
        for (const auto& q : pos)
            if (q[y] < q[x]) {
                reversed = true;
                break;
            }
        if (!reversed)
            return {false, "pair (" + p.elements[x] + "," + p.elements[y] + ") never reversed"};
    }
    return {true, ""};
}

poset dual(const poset& p) {
    poset q;
    q.elements = p.elements;
    q.lt.assign(p.n(), std::vector<uint8_t>(p.n(), 0));
    for (int x = 0; x < p.n(); ++x)
        for (int y = 0; y < p.n(); ++y) q.lt[x][y] = p.lt[y][x];
    q.covers.clear();
    for (const auto& [x, y] : p.covers) q.covers.emplace_back(y, x);
    std::sort(q.covers.begin(), q.covers.end());
    return q;
}

poset poset_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("elements") || !j.contains("relations"))
        throw op_error("BadInput", "poset JSON needs 'elements' and 'relations'");
    std::vector<std::string> elements = j.at("elements").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> relations;
    for (const auto& r : j.at("relations")) {
        if (!r.is_array() || r.size() != 2)
            throw op_error("BadInput", "each relation must be a 2-element array");
        relations.emplace_back(r[0].get<std::string>(), r[1].get<std::string>());
    }
    return new_poset(elements, relations);
}

nlohmann::json poset_to_json(const poset& p) {
    nlohmann::json j;
    j["elements"] = p.elements;
    auto rel = nlohmann::json::array();
    for (const auto& [x, y] : p.covers)
        rel.push_back({p.elements[x], p.elements[y]});
    j["relations"] = rel;
    return j;
}

realizer realizer_from_json(const nlohmann::json& j, const poset& p) {
    realizer r;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "full")
        r.kind = realizer_kind::full;
    else if (kind == "mm")
        r.kind = realizer_kind::mm;
    else
        throw op_error("BadInput", "realizer kind must be 'full' or 'mm'");
    for (const auto& ext : j.at("extensions")) {
        linear_extension L;
        for (const auto& id : ext) L.push_back(p.index_of(id.get<std::string>()));
        r.extensions.push_back(L);
    }
    return r;
}

nlohmann::json realizer_to_json(const realizer& r, const poset& p) {
    nlohmann::json j;
    j["kind"] = r.kind == realizer_kind::full ? "full" : "mm";
    auto exts = nlohmann::json::array();
    for (const auto& L : r.extensions) {
        auto e = nlohmann::json::array();
        for (int v : L) e.push_back(p.elements[v]);
        exts.push_back(e);
    }
    j["extensions"] = exts;
    return j;
}

std::string poset_to_dot(const poset& p) {
    std::ostringstream os;
    os << "digraph cover {\n  rankdir=BT;\n";
    for (const auto& id : p.elements) os << "  \"" << id << "\";\n";
    for (const auto& [x, y] : p.covers)
        os << "  \"" << p.elements[x] << "\" -> \"" << p.elements[y] << "\";\n";
    os << "}\n";
    return os.str();
}

}  // namespace tw2
