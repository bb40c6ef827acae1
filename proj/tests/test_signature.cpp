#include <doctest.h>

#include <algorithm>
#include <set>

#include "tw2/generators.hpp"
#include "tw2/reductions.hpp"
#include "tw2/signature.hpp"

using namespace tw2;

namespace {

poset make(std::vector<std::string> els,
           std::vector<std::pair<std::string, std::string>> rels) {
    return new_poset(els, rels);
}

normalized_decomposition normalize_of(const poset& p, int a0) {
    auto res = decompose_tw2(cover_graph(p));
    REQUIRE(decomposition_ok(res));
    return normalize(decomposition_of(res), p, a0);
}

// S_2 plus a global minimum below both maxima.
poset s2_with_a0() {
    return make({"a0", "a1", "a2", "b1", "b2"},
                {{"a0", "b1"}, {"a0", "b2"}, {"a1", "b2"}, {"a2", "b1"}});
}

// Pairwise check that phi is proper on the subtree intersection graph.
void check_phi(const poset& p, const normalized_decomposition& nd) {
    auto phi = phi_coloring(nd, p);
    std::vector<std::set<int>> nodes_of(p.n());
    for (int v = 0; v < nd.num_nodes(); ++v)
        for (int e : nd.bags[v]) nodes_of[e].insert(v);
    for (int e = 0; e < p.n(); ++e) {
        REQUIRE(phi[e] >= 1);
        REQUIRE(phi[e] <= 3);
        for (int f = e + 1; f < p.n(); ++f) {
            bool meet = std::any_of(nodes_of[e].begin(), nodes_of[e].end(),
                                    [&](int v) { return nodes_of[f].count(v) > 0; });
            if (meet) CHECK(phi[e] != phi[f]);
        }
    }
}

// Subproblems produced by unfolding a connected component: each satisfies
// the a0-below-all-maxima hypothesis by construction.
std::vector<std::pair<poset, int>> pipeline_subproblems(const poset& p) {
    std::vector<std::pair<poset, int>> out;
    auto cs = split_components(p);
    for (auto& c : cs.components) {
        if (c.n() < 3) continue;
        auto ur = unfold(c, c.minimals()[0]);
        for (auto& s : ur.subs)
            if (s.q.n() >= 3) out.push_back({s.q, s.q0});
    }
    return out;
}

}  // namespace

TEST_CASE("two_color") {
    // Edgeless: everyone color 1.
    auto r0 = two_color(3, {});
    CHECK(r0.ok);
    CHECK(r0.colors == std::vector<int>{1, 1, 1});
    // Even cycle: proper coloring.
    auto r1 = two_color(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    REQUIRE(r1.ok);
    CHECK(r1.colors[0] != r1.colors[1]);
    CHECK(r1.colors[1] != r1.colors[2]);
    // Triangle: odd closed walk of length 3.
    auto r2 = two_color(3, {{0, 1}, {1, 2}, {0, 2}});
    REQUIRE_FALSE(r2.ok);
    CHECK(r2.odd_walk.size() == 3);
    // Pentagon with a chord: odd walk is closed, odd, and uses edges.
    std::vector<std::pair<int, int>> pent = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 3}};
    auto r3 = two_color(5, pent);
    REQUIRE_FALSE(r3.ok);
    CHECK(r3.odd_walk.size() % 2 == 1);
    auto has = [&](int x, int y) {
        for (auto& [u, v] : pent)
            if ((u == x && v == y) || (u == y && v == x)) return true;
        return false;
    };
    for (size_t i = 0; i < r3.odd_walk.size(); ++i)
        CHECK(has(r3.odd_walk[i], r3.odd_walk[(i + 1) % r3.odd_walk.size()]));
}

TEST_CASE("phi coloring") {
    poset p = s2_with_a0();
    auto nd = normalize_of(p, p.index_of("a0"));
    check_phi(p, nd);
    // Elements sharing a bag always get 3 distinct colors.
    auto phi = phi_coloring(nd, p);
    for (int v = 0; v < nd.num_nodes(); ++v) {
        std::set<int> cols;
        for (int e : nd.bags[v]) cols.insert(phi[e]);
        CHECK(cols.size() == nd.bags[v].size());
    }
    for (uint64_t s = 0; s < 25; ++s) {
        poset q = random_tw2_poset({s + 100, 8 + (int)(s % 10), 0.8});
        for (auto& [sub, q0] : pipeline_subproblems(q)) {
            auto res = decompose_tw2(cover_graph(sub));
            if (!decomposition_ok(res)) continue;
            check_phi(sub, normalize(decomposition_of(res), sub, q0));
        }
    }
}

TEST_CASE("locate_pair landmarks") {
    poset p = s2_with_a0();
    auto nd = normalize_of(p, p.index_of("a0"));
    pair_set inc, mm;
    pair_sets(p, inc, mm);
    REQUIRE(mm.size() == 2);  // (a1,b1) and (a2,b2)
    for (auto& [a, b] : mm) {
        auto c = locate_pair(nd, p, a, b);
        CHECK(c.pp >= 0);
        CHECK(c.v != c.w);
        CHECK(nd.parent[c.v] == c.u);
        CHECK(nd.parent[c.w] == c.u);
        CHECK(nd.tree_lt(c.u, c.a_leaf));
        CHECK(nd.tree_lt(c.u, c.b_leaf));
        CHECK(c.u != nd.root);
    }
}

TEST_CASE("class space arithmetic") {
    auto space = leaf_class_space();
    CHECK(space == std::array<int, 4>{2, 12, 48, 576});
    CHECK(space[0] + space[1] + space[2] + space[3] == 638);
}

TEST_CASE("partition on the S2 fixture") {
    poset p = s2_with_a0();
    auto nd = normalize_of(p, p.index_of("a0"));
    auto part = partition_mm_pairs(p, nd);
    // Classes partition MM(P).
    pair_set inc, mm;
    pair_sets(p, inc, mm);
    size_t total = 0;
    for (auto& [k, pairs] : part.classes) total += pairs.size();
    CHECK(total == mm.size());
    CHECK(part.classes.size() <= 638);
    // The two pairs form a 2-cycle, so they must land in different classes.
    CHECK(part.classes.size() == 2);
    realizer r = mm_realizer(p, nd);
    CHECK(is_realizer(p, r).ok);
    CHECK(exact_dimension(p, pair_target::mm).d <= (int)r.extensions.size());
}

TEST_CASE("alpha12 never answers yes to both Q1 and Q2") {
    for (uint64_t s = 0; s < 40; ++s) {
        poset q = random_tw2_poset({s + 300, 8 + (int)(s % 12), 0.8});
        for (auto& [sub, q0] : pipeline_subproblems(q)) {
            auto res = decompose_tw2(cover_graph(sub));
            if (!decomposition_ok(res)) continue;
            auto nd = normalize(decomposition_of(res), sub, q0);
            auto part = partition_mm_pairs(sub, nd);
            for (auto& sig : part.sigs)
                if (sig.leaf == 15) CHECK_FALSE((sig.alpha12[0] && sig.alpha12[1]));
        }
    }
}

TEST_CASE("labelings satisfy their displayed constraints") {
    int checked_nu5 = 0, checked_nu11 = 0;
    for (uint64_t s = 0; s < 60; ++s) {
        poset q = random_tw2_poset({s + 500, 9 + (int)(s % 10), 0.85});
        for (auto& [sub, q0] : pipeline_subproblems(q)) {
            auto res = decompose_tw2(cover_graph(sub));
            if (!decomposition_ok(res)) continue;
            auto nd = normalize(decomposition_of(res), sub, q0);
            auto part = partition_mm_pairs(sub, nd);
            for (size_t i = 0; i < part.sigs.size(); ++i) {
                const auto& sig = part.sigs[i];
                const auto& c = part.contexts[i];
                if (sig.leaf == 3) continue;
                if (!sig.alpha4) {
                    CHECK(sub.leq(c.a, c.x));
                    CHECK_FALSE(sub.leq(c.x, c.b));
                    CHECK_FALSE(sub.leq(c.a, c.y));
                    CHECK(sub.leq(c.y, c.b));
                    CHECK(sub.leq(nd.a0, c.y));
                    CHECK_FALSE(sub.leq(c.a, c.z));
                    CHECK(nd.bag_contains(c.w, c.y));
                    ++checked_nu5;
                } else {
                    CHECK(sub.leq(c.a, c.x));
                    CHECK_FALSE(sub.leq(c.x, c.b));
                    CHECK_FALSE(sub.leq(c.a, c.y));
                    CHECK(sub.leq(c.y, c.b));
                    CHECK(nd.bag_contains(c.pp, c.x));
                    CHECK(nd.bag_contains(c.pp, c.y));
                    ++checked_nu11;
                }
            }
        }
    }
    CHECK(checked_nu5 > 0);
    CHECK(checked_nu11 > 0);
}

TEST_CASE("strict cycles on the alpha4=no branch have comparable consecutive meets") {
    int checked = 0;
    for (uint64_t s = 0; s < 80 && checked < 10; ++s) {
        poset q = random_tw2_poset({s + 900, 10 + (int)(s % 10), 0.85});
        for (auto& [sub, q0] : pipeline_subproblems(q)) {
            auto res = decompose_tw2(cover_graph(sub));
            if (!decomposition_ok(res)) continue;
            auto nd = normalize(decomposition_of(res), sub, q0);
            auto part = partition_mm_pairs(sub, nd);
            // Collect the alpha4=no pairs per (left, alpha5) class and verify
            // every strict alternating cycle has comparable consecutive u's.
            std::map<std::string, std::vector<int>> groups;
            for (size_t i = 0; i < part.sigs.size(); ++i) {
                const auto& sig = part.sigs[i];
                if (sig.leaf == 3 || sig.alpha4) continue;
                std::string key = (sig.left ? "L" : "R") + std::to_string(sig.alpha5[0]) +
                                  std::to_string(sig.alpha5[1]) + std::to_string(sig.alpha5[2]);
                groups[key].push_back((int)i);
            }
            for (auto& [key, members] : groups) {
                pair_set cls;
                std::map<elem_pair, int> of;
                for (int i : members) {
                    elem_pair pr{part.contexts[i].a, part.contexts[i].b};
                    cls.push_back(pr);
                    of[pr] = i;
                }
                for (auto& cyc :
                     strict_alternating_cycles(sub, cls, (int)cls.size())) {
                    ++checked;
                    int k = (int)cyc.pairs.size();
                    for (int i = 0; i < k; ++i) {
                        int u1 = part.contexts[of.at(cyc.pairs[i])].u;
                        int u2 = part.contexts[of.at(cyc.pairs[(i + 1) % k])].u;
                        CHECK_FALSE(nd.tree_incomparable(u1, u2));
                    }
                }
            }
        }
    }
    // Cycles inside a class are rare on random data; it is fine if none were
    // found, but the search above must have run.
    CHECK(true);
}

TEST_CASE("special cycle graph edges are 2-cycles") {
    for (uint64_t s = 0; s < 30; ++s) {
        poset q = random_tw2_poset({s + 1500, 10 + (int)(s % 8), 0.85});
        for (auto& [sub, q0] : pipeline_subproblems(q)) {
            auto res = decompose_tw2(cover_graph(sub));
            if (!decomposition_ok(res)) continue;
            auto nd = normalize(decomposition_of(res), sub, q0);
            auto part = partition_mm_pairs(sub, nd);
            std::vector<int> members;
            for (size_t i = 0; i < part.sigs.size(); ++i)
                if (part.sigs[i].leaf == 10 || (part.sigs[i].leaf == 7)) members.push_back((int)i);
            if (members.empty()) continue;
            auto g = build_special_cycle_graph(sub, nd, part.contexts, members);
            for (auto& [x, y] : g.edges) {
                const auto& A = part.contexts[members[x]];
                const auto& B = part.contexts[members[y]];
                CHECK(sub.leq(A.a, B.b));
                CHECK(sub.leq(B.a, A.b));
            }
            // A singleton class never has edges.
            auto g1 = build_special_cycle_graph(sub, nd, part.contexts, {members[0]});
            CHECK(g1.edges.empty());
        }
    }
}

TEST_CASE("mm_realizer end to end on pipeline subproblems") {
    int verified = 0;
    for (uint64_t s = 0; s < 120 && verified < 60; ++s) {
        poset q = random_tw2_poset({s + 2000, 8 + (int)(s % 14), 0.8});
        for (auto& [sub, q0] : pipeline_subproblems(q)) {
            auto res = decompose_tw2(cover_graph(sub));
            if (!decomposition_ok(res)) continue;
            auto nd = normalize(decomposition_of(res), sub, q0);
            realizer r = mm_realizer(sub, nd);
            auto chk = is_realizer(sub, r);
            CAPTURE(chk.detail);
            CHECK(chk.ok);
            CHECK(r.extensions.size() <= 638);
            pair_set inc, mm;
            pair_sets(sub, inc, mm);
            CHECK(r.extensions.size() <= std::max<size_t>(1, mm.size()));
            if (sub.n() <= 11) {
                CHECK(exact_dimension(sub, pair_target::mm).d <= (int)r.extensions.size());
            }
            ++verified;
        }
    }
    CHECK(verified >= 60);
}

TEST_CASE("mm pairs empty gives a single extension") {
    poset chain = make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    // A chain has no min-max incomparable pairs; the realizer is one
    // extension. (Normalization needs 3 elements, which a 3-chain has.)
    auto nd = normalize_of(chain, chain.index_of("a"));
    realizer r = mm_realizer(chain, nd);
    CHECK(r.extensions.size() == 1);
    CHECK(is_realizer(chain, r).ok);
}
