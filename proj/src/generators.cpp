#include "tw2/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace tw2 {

namespace {

std::string tagged(const char* prefix, int i, int width) {
    std::string s = std::to_string(i);
    while ((int)s.size() < width) s = "0" + s;
    return prefix + s;
}

}  // namespace

poset standard_example(int n) {
    if (n < 2) throw op_error("BadN", "standard_example requires n >= 2");
    std::vector<std::string> els;
    std::vector<std::pair<std::string, std::string>> rels;
    for (int i = 1; i <= n; ++i) els.push_back(tagged("a", i, 2));
    for (int i = 1; i <= n; ++i) els.push_back(tagged("b", i, 2));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            if (i != j) rels.push_back({tagged("a", i, 2), tagged("b", j, 2)});
    return new_poset(els, rels);
}

poset kelly(int n) {
    if (n < 2) throw op_error("BadN", "kelly requires n >= 2");
    std::vector<std::string> els;
    std::vector<std::pair<std::string, std::string>> rels;
    auto a = [&](int i) { return tagged("a", i, 2); };
    auto b = [&](int i) { return tagged("b", i, 2); };
    auto x = [&](int i) { return tagged("x", i, 2); };
    auto y = [&](int i) { return tagged("y", i, 2); };
    for (int i = 1; i <= n; ++i) els.push_back(a(i));
    for (int i = 1; i <= n; ++i) els.push_back(b(i));
    for (int i = 2; i <= n; ++i) els.push_back(x(i));
    for (int i = 1; i <= n - 1; ++i) els.push_back(y(i));
    for (int i = 2; i < n; ++i) rels.push_back({x(i), x(i + 1)});      // x2 < ... < xn
    for (int i = n - 1; i > 1; --i) rels.push_back({y(i), y(i - 1)});  // y(n-1) < ... < y1
    for (int i = 1; i <= n - 1; ++i) rels.push_back({a(i), x(i + 1)});
    for (int j = 2; j <= n; ++j) rels.push_back({x(j), b(j)});
    for (int j = 2; j <= n; ++j) rels.push_back({a(j), y(j - 1)});
    for (int i = 1; i <= n - 1; ++i) rels.push_back({y(i), b(i)});
    return new_poset(els, rels);
}

poset random_tw2_poset(const seed_params& s) {
    std::mt19937_64 rng(s.seed);
    int n = std::max(2, s.n);
    // Random 2-tree by repeatedly attaching a vertex to a random edge.
    std::vector<std::pair<int, int>> edges = {{0, 1}};
    for (int v = 2; v < n; ++v) {
        auto [p, q] = edges[rng() % edges.size()];
        edges.push_back({p, v});
        edges.push_back({q, v});
    }
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::vector<std::pair<int, int>> kept;
    for (auto& e : edges)
        if (coin(rng) < s.density) kept.push_back(e);
    // Orientation along a random permutation keeps the relation acyclic.
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[perm[i]] = i;
    int width = n >= 100 ? 3 : 2;
    std::vector<std::string> els;
    for (int i = 0; i < n; ++i) els.push_back(tagged("v", i, width));
    std::vector<std::pair<std::string, std::string>> rels;
    for (auto& [u, v] : kept)
        rels.push_back(pos[u] < pos[v] ? std::pair{els[u], els[v]} : std::pair{els[v], els[u]});
    return new_poset(els, rels);
}

}  // namespace tw2
