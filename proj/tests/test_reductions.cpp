#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "tw2/generators.hpp"
#include "tw2/reductions.hpp"
#include "tw2/treewidth.hpp"

using namespace tw2;

namespace {

poset make(std::vector<std::string> els,
           std::vector<std::pair<std::string, std::string>> rels) {
    return new_poset(els, rels);
}

// Random poset on n elements (not necessarily treewidth-bounded).
poset random_poset(std::mt19937_64& rng, int n, double density) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::string> els;
    for (int i = 0; i < n; ++i) els.push_back("e" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> rels;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng) < density) rels.push_back({els[perm[i]], els[perm[j]]});
    return new_poset(els, rels);
}

// Brute-force MM realizer of q via exact search, as child input for lifts.
realizer exact_mm(const poset& q) {
    return exact_dimension(q, pair_target::mm).rlz;
}

}  // namespace

TEST_CASE("pendant closure basics") {
    poset v = make({"a", "b", "c"}, {{"a", "c"}, {"b", "c"}});
    auto pc = pendant_closure(v);
    // a, b are minimal but not maximal (upper pendants); c is maximal but
    // not minimal (lower pendant): 3 + 3 elements.
    CHECK(pc.q.n() == 6);
    CHECK(pc.dprimes.at(v.index_of("a")) != pc.embed[v.index_of("a")]);
    CHECK(pc.primes.at(v.index_of("a")) == pc.embed[v.index_of("a")]);
    CHECK(pc.primes.at(v.index_of("c")) != pc.embed[v.index_of("c")]);
    CHECK(pc.dprimes.at(v.index_of("c")) == pc.embed[v.index_of("c")]);
    CHECK(pc.q.less(pc.primes.at(v.index_of("c")), pc.embed[v.index_of("c")]));
    // Pendants are minimal/maximal in q.
    for (auto& [x, xp] : pc.primes) {
        bool minimal = true;
        for (int z = 0; z < pc.q.n(); ++z) minimal &= !pc.q.less(z, xp);
        CHECK(minimal);
    }

    // Chains and antichains pass through unchanged.
    poset ch = make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    CHECK(pendant_closure(ch).q.n() == 3);
    poset ac = make({"a", "b", "c"}, {});
    CHECK(pendant_closure(ac).q.n() == 3);

    // Name collision with existing apostrophed ids is avoided.
    poset tricky = make({"x", "x_lo", "y"}, {{"x_lo", "x"}, {"y", "x"}, {"x_lo", "y"}});
    auto pc2 = pendant_closure(tricky);
    std::set<std::string> names(pc2.q.elements.begin(), pc2.q.elements.end());
    CHECK((int)names.size() == pc2.q.n());
}

TEST_CASE("pendant lift turns an mm realizer into a full realizer") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        poset p = random_poset(rng, 5 + (int)(rng() % 3), 0.4);
        auto pc = pendant_closure(p);
        realizer mm_q = exact_mm(pc.q);
        REQUIRE(is_realizer(pc.q, mm_q).ok);
        realizer full = pendant_lift(pc, p, mm_q);
        auto chk = is_realizer(p, full);
        CAPTURE(chk.detail);
        CHECK(chk.ok);
        // dim(P) <= dim*(Q): the lifted realizer can't beat the exact value.
        CHECK(exact_dimension(p, pair_target::inc).d <= (int)full.extensions.size());
    }
}

TEST_CASE("split and combine components") {
    poset two_chains =
        make({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
    auto cs = split_components(two_chains);
    REQUIRE(cs.components.size() == 2);
    CHECK(cs.components[0].n() == 2);

    // Two 2-chains: each child needs 1 extension (mm empty), combined = 2.
    std::vector<realizer> kids;
    for (auto& c : cs.components) kids.push_back(exact_mm(c));
    realizer combined = combine_components(two_chains, cs, kids);
    CHECK(combined.extensions.size() == 2);
    CHECK(is_realizer(two_chains, combined).ok);

    // Single component passes through with translated indices.
    poset chain = make({"x", "y"}, {{"x", "y"}});
    auto cs1 = split_components(chain);
    REQUIRE(cs1.components.size() == 1);
    realizer r1 = combine_components(chain, cs1, {exact_mm(cs1.components[0])});
    CHECK(is_realizer(chain, r1).ok);
}

TEST_CASE("combine keeps every child extension working") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        // Disjoint union of 2-3 random posets.
        int k = 2 + (int)(rng() % 2);
        std::vector<std::string> els;
        std::vector<std::pair<std::string, std::string>> rels;
        for (int c = 0; c < k; ++c) {
            poset part = random_poset(rng, 3 + (int)(rng() % 3), 0.5);
            for (auto& e : part.elements) els.push_back("c" + std::to_string(c) + e);
            for (auto& [x, y] : part.covers)
                rels.push_back({"c" + std::to_string(c) + part.elements[x],
                                "c" + std::to_string(c) + part.elements[y]});
        }
        poset p = new_poset(els, rels);
        auto cs = split_components(p);
        // The random parts may themselves be disconnected; ≥ k either way.
        REQUIRE((int)cs.components.size() >= k);
        std::vector<realizer> kids;
        int t = 1;
        for (auto& c : cs.components) {
            kids.push_back(exact_mm(c));
            t = std::max(t, (int)kids.back().extensions.size());
        }
        realizer combined = combine_components(p, cs, kids);
        CHECK((int)combined.extensions.size() == std::max(2, t));
        auto chk = is_realizer(p, combined);
        CAPTURE(chk.detail);
        CHECK(chk.ok);
    }
}

TEST_CASE("unfold layer structure") {
    // Fence a0 < b1 > a1 < b2: two up-subproblems and one level subproblem.
    poset fence = make({"a0", "a1", "b1", "b2"}, {{"a0", "b1"}, {"a1", "b1"}, {"a1", "b2"}});
    auto ur = unfold(fence, fence.index_of("a0"));
    CHECK_FALSE(ur.passthrough);
    REQUIRE(ur.A.size() == 2);  // k = 2
    CHECK(ur.A[0] == std::vector<int>{fence.index_of("a0")});
    CHECK(ur.B[1] == std::vector<int>{fence.index_of("b1")});
    CHECK(ur.A[1] == std::vector<int>{fence.index_of("a1")});
    CHECK(ur.B[2] == std::vector<int>{fence.index_of("b2")});
    REQUIRE(ur.subs.size() == 3);
    // Q_0^1 = {a0, b1}, plain.
    CHECK(ur.subs[0].q.n() == 2);
    CHECK_FALSE(ur.subs[0].dualized);
    // Q_1^2 = {a1, b2} + q, dualized.
    CHECK(ur.subs[1].q.n() == 3);
    CHECK(ur.subs[1].dualized);
    // Q_1^1 = {a1, b1} + q below.
    CHECK(ur.subs[2].role == subproblem_role::level);
    CHECK(ur.subs[2].q.n() == 3);
    CHECK_FALSE(ur.subs[2].dualized);
    // q0 sits below every maximal element of each subproblem.
    for (auto& s : ur.subs)
        for (int b : s.q.maximals())
            if (b != s.q0) CHECK(s.q.less(s.q0, b));

    // Single layer: passthrough.
    poset v = make({"a", "b", "c"}, {{"a", "b"}, {"a", "c"}});
    auto ur1 = unfold(v, v.index_of("a"));
    CHECK(ur1.passthrough);
    CHECK(ur1.subs.size() == 1);

    // Error cases.
    poset disc = make({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
    CHECK_THROWS_AS((void)unfold(disc, 0), op_error);
    CHECK_THROWS_AS((void)unfold(fence, fence.index_of("b1")), op_error);
}

TEST_CASE("unfold preserves bounded treewidth of subproblems") {
    std::mt19937_64 rng(11);
    int checked = 0;
    for (uint64_t s = 0; checked < 25 && s < 200; ++s) {
        poset p = random_tw2_poset({s, 8 + (int)(s % 12), 0.85});
        auto cs = split_components(p);
        if (cs.components.size() != 1) continue;
        int a0 = p.minimals()[0];
        auto ur = unfold(p, a0);
        for (auto& sub : ur.subs) {
            auto res = decompose_tw2(cover_graph(sub.q));
            CHECK(decomposition_ok(res));
        }
        ++checked;
    }
    CHECK(checked == 25);
}

TEST_CASE("apply_lift produces a verified mm realizer") {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (uint64_t s = 0; checked < 40 && s < 400; ++s) {
        poset p = random_tw2_poset({s + 1000, 6 + (int)(s % 8), 0.8});
        auto cs = split_components(p);
        if (cs.components.size() != 1 || p.n() > 12) continue;
        int a0 = p.minimals()[0];
        auto ur = unfold(p, a0);
        std::vector<realizer> kids;
        bool feasible = true;
        for (auto& sub : ur.subs) {
            if (sub.q.n() > 12) {
                feasible = false;
                break;
            }
            kids.push_back(exact_mm(sub.q));
        }
        if (!feasible) continue;
        realizer lifted = apply_lift(p, ur, kids);
        auto chk = is_realizer(p, lifted);
        CAPTURE(chk.detail);
        CHECK(chk.ok);
        // Size bound: at most twice the largest child realizer.
        int tmax = 1;
        for (auto& k : kids) tmax = std::max(tmax, (int)k.extensions.size());
        CHECK((int)lifted.extensions.size() <= 2 * tmax);
        ++checked;
    }
    CHECK(checked == 40);
}

TEST_CASE("fence lift end to end") {
    poset fence = make({"a0", "a1", "b1", "b2"}, {{"a0", "b1"}, {"a1", "b1"}, {"a1", "b2"}});
    auto ur = unfold(fence, fence.index_of("a0"));
    std::vector<realizer> kids;
    for (auto& s : ur.subs) kids.push_back(exact_mm(s.q));
    realizer lifted = apply_lift(fence, ur, kids);
    CHECK(is_realizer(fence, lifted).ok);
    CHECK(lifted.extensions.size() <= 2);
}

TEST_CASE("full reduction chain on random connected instances") {
    // pendant closure -> components -> unfold -> exact children -> lifts.
    int checked = 0;
    for (uint64_t s = 0; checked < 20 && s < 300; ++s) {
        poset p = random_tw2_poset({s + 5000, 6 + (int)(s % 5), 0.7});
        if (p.is_chain() || p.is_antichain()) continue;
        auto pc = pendant_closure(p);
        if (pc.q.n() > 16) continue;
        auto cs = split_components(pc.q);
        std::vector<realizer> comps;
        bool feasible = true;
        for (auto& c : cs.components) {
            if (c.n() < 2) {
                comps.push_back({realizer_kind::mm, {{0}}});
                continue;
            }
            int a0 = c.minimals()[0];
            auto ur = unfold(c, a0);
            std::vector<realizer> kids;
            for (auto& sub : ur.subs) {
                if (sub.q.n() > 13) {
                    feasible = false;
                    break;
                }
                kids.push_back(exact_mm(sub.q));
            }
            if (!feasible) break;
            comps.push_back(apply_lift(c, ur, kids));
        }
        if (!feasible) continue;
        realizer mm_q = combine_components(pc.q, cs, comps);
        REQUIRE(is_realizer(pc.q, mm_q).ok);
        realizer full = pendant_lift(pc, p, mm_q);
        auto chk = is_realizer(p, full);
        CAPTURE(chk.detail);
        CHECK(chk.ok);
        ++checked;
    }
    CHECK(checked == 20);
}
