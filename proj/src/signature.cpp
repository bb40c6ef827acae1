#include "tw2/signature.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "tw2/errors.hpp"

namespace tw2 {

namespace {

std::vector<int> bag_intersection(const normalized_decomposition& nd, int n1, int n2) {
    std::vector<int> out;
    std::set_intersection(nd.bags[n1].begin(), nd.bags[n1].end(), nd.bags[n2].begin(),
                          nd.bags[n2].end(), std::back_inserter(out));
    return out;
}

int child_toward(const normalized_decomposition& nd, int u, int leaf) {
    for (int c : nd.children[u])
        if (nd.tree_leq(c, leaf)) return c;
    throw op_error("InternalError", "no child of the meet lies toward the leaf");
}

nlohmann::json pair_json(const poset& p, const elem_pair& pr) {
    return nlohmann::json::array({p.elements[pr.first], p.elements[pr.second]});
}

nlohmann::json base_dump(const poset& p, const normalized_decomposition& nd) {
    nlohmann::json d;
    d["poset"] = poset_to_json(p);
    d["decomposition_dot"] = normalized_to_dot(nd, p);
    return d;
}

}  // namespace

element_coloring phi_coloring(const normalized_decomposition& nd, const poset& p) {
    int n = p.n();
    // Subtree of an element = set of nodes whose bag contains it; its top is
    // the unique shallowest node.
    std::vector<std::vector<int>> nodes_of(n);
    for (int v = 0; v < nd.num_nodes(); ++v)
        for (int e : nd.bags[v]) nodes_of[e].push_back(v);
    std::vector<int> top_depth(n, 0);
    for (int e = 0; e < n; ++e) {
        int d = nd.depth[nodes_of[e].front()];
        for (int v : nodes_of[e]) d = std::min(d, nd.depth[v]);
        top_depth[e] = d;
    }
    // Root-to-leaf sweep: color by increasing top depth. Every previously
    // colored element whose subtree intersects T_e contains top(T_e), and a
    // bag holds at most 2 elements besides e, so 3 colors always suffice.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return top_depth[a] < top_depth[b]; });
    element_coloring phi(n, 0);
    for (int e : order) {
        bool used[4] = {false, false, false, false};
        for (int v : nodes_of[e])
            for (int f : nd.bags[v])
                if (phi[f]) used[phi[f]] = true;
        int c = 1;
        while (c <= 3 && used[c]) ++c;
        if (c > 3) throw op_error("CliqueTooLarge", "subtree intersection graph needs > 3 colors");
        phi[e] = c;
    }
    return phi;
}

pair_context locate_pair(const normalized_decomposition& nd, const poset& p, int a, int b) {
    pair_context ctx;
    ctx.a = a;
    ctx.b = b;
    auto ita = nd.leaf_of_min.find(a);
    auto itb = nd.leaf_of_max.find(b);
    if (ita == nd.leaf_of_min.end() || itb == nd.leaf_of_max.end())
        throw op_error("InternalError", "pair (" + p.elements[a] + "," + p.elements[b] +
                                            ") lacks a dedicated leaf");
    ctx.a_leaf = ita->second;
    ctx.b_leaf = itb->second;
    ctx.u = meet(nd, ctx.a_leaf, ctx.b_leaf);
    ctx.pp = nd.parent[ctx.u];
    if (ctx.pp < 0) throw op_error("InternalError", "meet of two pair leaves is the root");
    ctx.v = child_toward(nd, ctx.u, ctx.a_leaf);
    ctx.w = child_toward(nd, ctx.u, ctx.b_leaf);
    return ctx;
}

two_color_result two_color(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n);
    for (auto& [x, y] : edges) {
        adj[x].push_back(y);
        adj[y].push_back(x);
    }
    for (auto& l : adj) std::sort(l.begin(), l.end());
    two_color_result res;
    res.colors.assign(n, 0);
    std::vector<int> par(n, -1), dep(n, 0);
    for (int s = 0; s < n; ++s) {
        if (res.colors[s]) continue;
        res.colors[s] = 1;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v]) {
                if (!res.colors[w]) {
                    res.colors[w] = 3 - res.colors[v];
                    par[w] = v;
                    dep[w] = dep[v] + 1;
                    q.push(w);
                } else if (res.colors[w] == res.colors[v]) {
                    // Odd closed walk: v -> BFS-tree ancestor paths -> w -> v.
                    std::vector<int> pv = {v}, pw = {w};
                    int x = v, y = w;
                    while (x != y) {
                        if (dep[x] >= dep[y]) pv.push_back(x = par[x]);
                        else pw.push_back(y = par[y]);
                    }
                    // pv = v..anc and pw = w..anc; the walk v..anc..w closes
                    // with the conflict edge wv and has odd length.
                    res.odd_walk = pv;
                    for (auto it = pw.rbegin(); it != pw.rend(); ++it)
                        if (it != pw.rbegin()) res.odd_walk.push_back(*it);
                    res.ok = false;
                    return res;
                }
            }
        }
    }
    res.ok = true;
    return res;
}

aux_graph build_special_cycle_graph(const poset& p, const normalized_decomposition& nd,
                                    const std::vector<pair_context>& ctx,
                                    const std::vector<int>& members) {
    aux_graph g;
    g.kind = 'S';
    g.n = (int)members.size();
    auto nested = [&](const pair_context& A, const pair_context& B) {
        // u_A < w_A <= u_B < w_B < b_A^T in T (the first three strictness
        // facts u<w hold because w is a child of u).
        return nd.tree_leq(A.w, B.u) && nd.tree_lt(B.w, A.b_leaf);
    };
    for (int i = 0; i < g.n; ++i)
        for (int j = i + 1; j < g.n; ++j) {
            const auto& A = ctx[members[i]];
            const auto& B = ctx[members[j]];
            if (!(p.leq(A.a, B.b) && p.leq(B.a, A.b))) continue;
            if (nested(A, B) || nested(B, A)) g.edges.push_back({i, j});
        }
    return g;
}

aux_graph build_root_arc_graph(const poset& p, const normalized_decomposition& nd,
                               const std::vector<pair_context>& ctx,
                               const std::vector<int>& members, bool left, char kind,
                               int max_len) {
    aux_graph g;
    g.kind = kind;
    g.n = (int)members.size();
    pair_set cls;
    std::map<elem_pair, int> vertex_of;
    for (int i = 0; i < g.n; ++i) {
        const auto& c = ctx[members[i]];
        cls.push_back({c.a, c.b});
        vertex_of[{c.a, c.b}] = i;
    }
    if (max_len <= 0) max_len = g.n;
    max_len = std::max(2, std::min(max_len, g.n));
    auto cycles = strict_alternating_cycles(p, cls, max_len);
    std::set<std::pair<int, int>> arcs;
    for (const auto& cyc : cycles) {
        int k = (int)cyc.pairs.size();
        std::vector<int> verts(k);
        for (int i = 0; i < k; ++i) verts[i] = vertex_of.at(cyc.pairs[i]);
        // Root: the pair whose u lies below every other u in T.
        int root = -1;
        for (int i = 0; i < k && root < 0; ++i) {
            bool min_u = true;
            for (int j = 0; j < k; ++j)
                if (!nd.tree_leq(ctx[members[verts[i]]].u, ctx[members[verts[j]]].u)) {
                    min_u = false;
                    break;
                }
            if (min_u) root = i;
        }
        if (root < 0) {
            auto dump = base_dump(p, nd);
            auto cj = nlohmann::json::array();
            for (auto& pr : cyc.pairs) cj.push_back(pair_json(p, pr));
            dump["cycle"] = cj;
            throw falsification("RootUndefined",
                                "strict alternating cycle has no minimum meet node", dump);
        }
        // Tie-break among equal-u pairs: rightmost b-leaf in left classes,
        // leftmost in right classes.
        int ru = ctx[members[verts[root]]].u;
        for (int i = 0; i < k; ++i) {
            if (i == root || ctx[members[verts[i]]].u != ru) continue;
            int cand = ctx[members[verts[i]]].b_leaf;
            int best = ctx[members[verts[root]]].b_leaf;
            bool take = left ? is_left_of(nd, best, cand) : is_left_of(nd, cand, best);
            if (take) root = i;
        }
        arcs.insert({verts[root], verts[(root + 1) % k]});
    }
    g.edges.assign(arcs.begin(), arcs.end());
    return g;
}

std::pair<aux_graph, aux_graph> build_two_cycle_graph(const poset& p,
                                                      const normalized_decomposition& nd,
                                                      const std::vector<pair_context>& ctx,
                                                      const std::vector<int>& members) {
    aux_graph j1, j2;
    j1.kind = 'J';
    j2.kind = 'J';
    j1.n = j2.n = (int)members.size();
    for (int i = 0; i < j1.n; ++i)
        for (int j = i + 1; j < j1.n; ++j) {
            const auto& A = ctx[members[i]];
            const auto& B = ctx[members[j]];
            if (!(p.leq(A.a, B.b) && p.leq(B.a, A.b))) continue;
            if (A.u == B.u) {
                auto dump = base_dump(p, nd);
                dump["pair1"] = pair_json(p, {A.a, A.b});
                dump["pair2"] = pair_json(p, {B.a, B.b});
                throw falsification("EqualU", "2-cycle inside a class with equal meet nodes",
                                    dump);
            }
            if (nd.tree_incomparable(A.u, B.u)) j2.edges.push_back({i, j});
            else j1.edges.push_back({i, j});
        }
    return {j1, j2};
}

std::string signature_vector::key() const {
    std::string k = "nu" + std::to_string(leaf) + (left ? "|L" : "|R");
    auto triple = [](const std::array<int, 3>& t) {
        return std::to_string(t[0]) + std::to_string(t[1]) + std::to_string(t[2]);
    };
    if (leaf == 7 || leaf == 10) k += "|" + triple(alpha5);
    if (leaf == 10) k += "|" + std::to_string(alpha8) + "|" + std::to_string(alpha9);
    if (leaf == 15) {
        k += "|" + triple(alpha11) + "|";
        for (bool s : alpha12) k += s ? 'Y' : 'N';
        k += "|" + std::to_string(alpha13) + "|" + std::to_string(alpha14);
    }
    return k;
}

std::array<int, 4> leaf_class_space() {
    const int n1 = 2;                          // left / right
    const int n5 = 6, n11 = 6;                 // ordered color triples
    const int n8 = 2, n9 = 2, n14 = 2;         // 2-colorings
    const int n12 = 6;                         // admissible answer vectors
    const int n13 = 4;                         // 4-coloring
    return {n1, n1 * n5, n1 * n5 * n8 * n9, n1 * n11 * n12 * n13 * n14};
}

class_partition partition_mm_pairs(const poset& p, const normalized_decomposition& nd,
                                   int max_cycle_len) {
    int a0 = nd.a0;
    for (int b : p.maximals())
        if (b != a0 && !p.less(a0, b))
            throw op_error("BadA0", "element " + p.elements[a0] +
                                        " is not below the maximal element " + p.elements[b]);

    element_coloring phi = phi_coloring(nd, p);
    pair_set inc, mm;
    pair_sets(p, inc, mm);

    class_partition out;
    int m = (int)mm.size();
    out.contexts.resize(m);
    out.sigs.resize(m);

    auto labeling_failure = [&](int i, const char* what) -> falsification {
        auto dump = base_dump(p, nd);
        const auto& c = out.contexts[i];
        dump["pair"] = pair_json(p, {c.a, c.b});
        dump["bag_u"] = nd.bags[c.u];
        dump["bag_p"] = nd.bags[c.pp];
        dump["bag_w"] = nd.bags[c.w];
        return falsification("LabelingFailure", what, dump);
    };
    auto elem_less = [&](int e, int f) { return p.elements[e] < p.elements[f]; };

    for (int i = 0; i < m; ++i) {
        auto [a, b] = mm[i];
        pair_context& c = out.contexts[i];
        c = locate_pair(nd, p, a, b);
        signature_vector& s = out.sigs[i];
        s.left = is_left_of(nd, c.a_leaf, c.b_leaf);

        s.alpha2 = false;
        for (int q : nd.bags[c.u]) s.alpha2 |= p.leq(a, q);
        if (!s.alpha2) {
            s.leaf = 3;
            continue;
        }

        auto inter_p = bag_intersection(nd, c.u, c.pp);
        if (inter_p.size() != 2)
            throw op_error("InternalError", "tree edge with intersection size != 2");
        s.alpha4 = p.leq(a, inter_p[0]) || p.leq(a, inter_p[1]);

        if (!s.alpha4) {
            // x is the element private to B(u); y/z split B(u) ∩ B(pp).
            for (int q : nd.bags[c.u])
                if (q != inter_p[0] && q != inter_p[1]) c.x = q;
            if (c.x < 0 || !p.leq(a, c.x) || p.leq(c.x, b))
                throw labeling_failure(i, "no valid x element on the alpha4=no branch");
            std::vector<int> cand = inter_p;
            std::sort(cand.begin(), cand.end(), elem_less);
            auto inter_w = bag_intersection(nd, c.u, c.w);
            for (int y : cand) {
                int z = y == cand[0] ? cand[1] : cand[0];
                bool y_ok = !p.leq(a, y) && p.leq(y, b) && p.leq(a0, y) &&
                            std::find(inter_w.begin(), inter_w.end(), y) != inter_w.end();
                if (y_ok && !p.leq(a, z)) {
                    c.y = y;
                    c.z = z;
                    break;
                }
            }
            if (c.y < 0) throw labeling_failure(i, "no valid y/z split on the alpha4=no branch");
            s.alpha5 = {phi[c.x], phi[c.y], phi[c.z]};
            s.alpha6 = inter_w.size() == 2 &&
                       ((inter_w[0] == c.x && inter_w[1] == c.y) ||
                        (inter_w[0] == c.y && inter_w[1] == c.x));
            if (!s.alpha6) s.leaf = 7;  // alpha8/alpha9 assigned below otherwise
        } else {
            // {x, y} = B(u) ∩ B(pp), z private to B(u).
            for (int q : nd.bags[c.u])
                if (q != inter_p[0] && q != inter_p[1]) c.z = q;
            std::vector<int> cand = inter_p;
            std::sort(cand.begin(), cand.end(), elem_less);
            for (int x : cand) {
                int y = x == cand[0] ? cand[1] : cand[0];
                if (p.leq(a, x) && !p.leq(x, b) && !p.leq(a, y) && p.leq(y, b)) {
                    c.x = x;
                    c.y = y;
                    break;
                }
            }
            if (c.x < 0) throw labeling_failure(i, "no valid x/y split on the alpha4=yes branch");
            s.alpha11 = {phi[c.x], phi[c.y], phi[c.z]};
            s.alpha12 = {p.leq(a, c.z), p.leq(c.z, b), p.leq(a0, c.x)};
        }
    }

    auto group_by = [&](auto pred, auto keyfn) {
        std::map<std::string, std::vector<int>> groups;
        for (int i = 0; i < m; ++i)
            if (pred(i)) groups[keyfn(i)].push_back(i);
        return groups;
    };
    auto color_or_throw = [&](const aux_graph& g, const std::vector<int>& members,
                              const char* kind_name) {
        auto res = two_color(g.n, g.edges);
        if (!res.ok) {
            auto dump = base_dump(p, nd);
            auto walk = nlohmann::json::array();
            for (int v : res.odd_walk)
                walk.push_back(pair_json(p, {out.contexts[members[v]].a,
                                             out.contexts[members[v]].b}));
            dump["odd_walk"] = walk;
            throw falsification(kind_name, "auxiliary graph is not bipartite", dump);
        }
        return res.colors;
    };
    auto triple_key = [](const std::array<int, 3>& t) {
        return std::to_string(t[0]) + std::to_string(t[1]) + std::to_string(t[2]);
    };
    auto lr = [&](int i) { return out.sigs[i].left ? std::string("L") : std::string("R"); };

    // alpha8 / alpha9 on the alpha4=no, alpha6=yes branch.
    for (auto& [key, members] :
         group_by([&](int i) { return out.sigs[i].leaf == 0 && !out.sigs[i].alpha4; },
                  [&](int i) { return lr(i) + triple_key(out.sigs[i].alpha5); })) {
        auto colors =
            color_or_throw(build_special_cycle_graph(p, nd, out.contexts, members), members,
                           "OddCycleS");
        for (size_t i = 0; i < members.size(); ++i) out.sigs[members[i]].alpha8 = colors[i];
    }
    for (auto& [key, members] :
         group_by([&](int i) { return out.sigs[i].leaf == 0 && !out.sigs[i].alpha4; },
                  [&](int i) {
                      return lr(i) + triple_key(out.sigs[i].alpha5) +
                             std::to_string(out.sigs[i].alpha8);
                  })) {
        bool left = out.sigs[members[0]].left;
        auto colors = color_or_throw(
            build_root_arc_graph(p, nd, out.contexts, members, left, 'K', max_cycle_len),
            members, "OddCycleK");
        for (size_t i = 0; i < members.size(); ++i) {
            out.sigs[members[i]].alpha9 = colors[i];
            out.sigs[members[i]].leaf = 10;
        }
    }

    // alpha13 / alpha14 on the alpha4=yes branch.
    auto nu13_key = [&](int i) {
        const auto& s = out.sigs[i];
        std::string k = lr(i) + triple_key(s.alpha11);
        for (bool v : s.alpha12) k += v ? 'Y' : 'N';
        return k;
    };
    for (auto& [key, members] :
         group_by([&](int i) { return out.sigs[i].leaf == 0 && out.sigs[i].alpha4; }, nu13_key)) {
        auto [j1, j2] = build_two_cycle_graph(p, nd, out.contexts, members);
        auto c1 = color_or_throw(j1, members, "OddCycleJ1");
        for (int side = 1; side <= 2; ++side) {
            std::vector<int> sub;
            for (int i = 0; i < j1.n; ++i)
                if (c1[i] == side) sub.push_back(i);
            std::vector<int> back(j1.n, -1);
            for (size_t i = 0; i < sub.size(); ++i) back[sub[i]] = (int)i;
            aux_graph jr;
            jr.kind = 'J';
            jr.n = (int)sub.size();
            for (auto& [x, y] : j2.edges)
                if (back[x] >= 0 && back[y] >= 0) jr.edges.push_back({back[x], back[y]});
            std::vector<int> sub_members;
            for (int v : sub) sub_members.push_back(members[v]);
            auto c2 = color_or_throw(jr, sub_members, "OddCycleJ2");
            for (size_t i = 0; i < sub.size(); ++i)
                out.sigs[members[sub[i]]].alpha13 = (side - 1) * 2 + c2[i];
        }
    }
    for (auto& [key, members] :
         group_by([&](int i) { return out.sigs[i].leaf == 0 && out.sigs[i].alpha4; },
                  [&](int i) { return nu13_key(i) + std::to_string(out.sigs[i].alpha13); })) {
        bool left = out.sigs[members[0]].left;
        auto colors =
            color_or_throw(
                build_root_arc_graph(p, nd, out.contexts, members, left, 'H', max_cycle_len),
                members, "OddCycleKHat");
        for (size_t i = 0; i < members.size(); ++i) {
            out.sigs[members[i]].alpha14 = colors[i];
            out.sigs[members[i]].leaf = 15;
        }
    }

    for (int i = 0; i < m; ++i) out.classes[out.sigs[i].key()].push_back(mm[i]);

    out.report = nlohmann::json::array();
    for (auto& [key, pairs] : out.classes) {
        std::sort(pairs.begin(), pairs.end());
        auto rev = is_reversible(p, pairs);
        if (!rev.reversible) {
            auto dump = base_dump(p, nd);
            dump["class"] = key;
            auto prs = nlohmann::json::array();
            for (auto& pr : pairs) prs.push_back(pair_json(p, pr));
            dump["pairs"] = prs;
            auto cyc = nlohmann::json::array();
            for (auto& pr : rev.witness->pairs) cyc.push_back(pair_json(p, pr));
            dump["witness_cycle"] = cyc;
            throw falsification("ClassNotReversible", "class " + key + " is not reversible",
                                dump);
        }
        nlohmann::json entry;
        entry["key"] = key;
        entry["size"] = pairs.size();
        entry["certified"] = true;
        out.report.push_back(entry);
    }
    return out;
}

realizer mm_realizer(const poset& p, const normalized_decomposition& nd, int max_cycle_len) {
    realizer out;
    out.kind = realizer_kind::mm;
    auto part = partition_mm_pairs(p, nd, max_cycle_len);
    if (part.classes.empty()) {
        out.extensions.push_back(reversing_extension(p, {}));
        return out;
    }
    for (auto& [key, pairs] : part.classes)
        out.extensions.push_back(reversing_extension(p, pairs));
    return out;
}

}  // namespace tw2
