#include <doctest.h>

#include "tw2/generators.hpp"
#include "tw2/pipeline.hpp"

using namespace tw2;

namespace {

poset make(std::vector<std::string> els,
           std::vector<std::pair<std::string, std::string>> rels) {
    return new_poset(els, rels);
}

}  // namespace

TEST_CASE("total orders and antichains") {
    poset chain = make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
    auto r = bound_pipeline(chain);
    REQUIRE(r.status == bound_status::realized);
    CHECK(r.rlz.extensions.size() == 1);
    CHECK(is_realizer(chain, r.rlz).ok);

    poset ac = make({"a", "b", "c"}, {});
    auto r2 = bound_pipeline(ac);
    REQUIRE(r2.status == bound_status::realized);
    CHECK(is_realizer(ac, r2.rlz).ok);
    CHECK(exact_dimension(ac, pair_target::inc).d <= (int)r2.rlz.extensions.size());
}

TEST_CASE("treewidth obstruction routing") {
    auto r = bound_pipeline(kelly(5));
    REQUIRE(r.status == bound_status::obstruction);
    CHECK(r.obstruction.residual_vertices.size() >= 4);
    // kelly(4) stays within bounds and is realized.
    auto r4 = bound_pipeline(kelly(4));
    REQUIRE(r4.status == bound_status::realized);
    CHECK(is_realizer(kelly(4), r4.rlz).ok);
    CHECK(r4.rlz.extensions.size() <= 1276);
}

TEST_CASE("forest covers route through the exact search") {
    poset tree = make({"r", "s", "t", "u", "v"},
                      {{"r", "s"}, {"r", "t"}, {"s", "u"}, {"s", "v"}});
    auto r = bound_pipeline(tree);
    REQUIRE(r.status == bound_status::realized);
    CHECK(r.report["route"] == "forest-exact");
    CHECK((int)r.rlz.extensions.size() <= 3);
    CHECK(is_realizer(tree, r.rlz).ok);
}

TEST_CASE("standard examples up to the treewidth limit") {
    // S_2's cover graph is a forest of two paths; S_3 contains K_4 minors?
    // Check what the pipeline reports rather than assuming.
    poset s2 = standard_example(2);
    auto r = bound_pipeline(s2);
    REQUIRE(r.status == bound_status::realized);
    CHECK(is_realizer(s2, r.rlz).ok);
    CHECK(exact_dimension(s2, pair_target::inc).d <= (int)r.rlz.extensions.size());
}

TEST_CASE("random corpus: verified realizers within all bounds") {
    int realized = 0;
    for (uint64_t s = 0; s < 60; ++s) {
        poset p = random_tw2_poset({s + 4000, 6 + (int)(s % 20), 0.8});
        auto r = bound_pipeline(p);
        REQUIRE(r.status == bound_status::realized);
        auto chk = is_realizer(p, r.rlz);
        CAPTURE(chk.detail);
        CHECK(chk.ok);
        CHECK(r.rlz.extensions.size() <= 1276);
        CHECK(r.max_classes <= 638);
        ++realized;
    }
    CHECK(realized == 60);
}

TEST_CASE("exact dimension never exceeds the pipeline size") {
    for (uint64_t s = 0; s < 40; ++s) {
        poset p = random_tw2_poset({s + 7000, 5 + (int)(s % 6), 0.75});
        auto r = bound_pipeline(p);
        REQUIRE(r.status == bound_status::realized);
        CHECK(exact_dimension(p, pair_target::inc).d <= (int)r.rlz.extensions.size());
    }
}

TEST_CASE("disconnected inputs") {
    poset two = make({"a", "b", "c", "d"}, {{"a", "b"}, {"c", "d"}});
    auto r = bound_pipeline(two);
    REQUIRE(r.status == bound_status::realized);
    CHECK(is_realizer(two, r.rlz).ok);
}

TEST_CASE("cycle length cap stays sound") {
    for (uint64_t s = 0; s < 15; ++s) {
        poset p = random_tw2_poset({s + 9000, 12, 0.85});
        bound_options opt;
        opt.max_cycle_len = 2;
        auto r = bound_pipeline(p, opt);
        REQUIRE(r.status == bound_status::realized);
        CHECK(is_realizer(p, r.rlz).ok);
    }
}
