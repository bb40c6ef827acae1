#include "tw2/pipeline.hpp"

#include <algorithm>

#include "tw2/reductions.hpp"

namespace tw2 {

namespace {

bool is_forest(const graph& g) {
    // Acyclic iff every component has one fewer edge than vertices.
    std::vector<int> comp(g.n, -1);
    int ncomp = 0;
    for (int s = 0; s < g.n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> st = {s};
        comp[s] = ncomp;
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            for (int w : g.adj[v])
                if (comp[w] < 0) {
                    comp[w] = ncomp;
                    st.push_back(w);
                }
        }
        ++ncomp;
    }
    long long edges = 0;
    for (int v = 0; v < g.n; ++v) edges += (long long)g.adj[v].size();
    return edges / 2 == g.n - ncomp;
}

// MM-realizer of one connected component via unfolding and the per-subproblem
// class partitions.
realizer component_mm_realizer(const poset& c, const bound_options& opt, int& max_classes,
                               nlohmann::json& comp_report) {
    if (c.n() <= 2) {
        comp_report["route"] = "exact-tiny";
        return exact_dimension(c, pair_target::mm).rlz;
    }
    auto ur = unfold(c, c.minimals()[0]);
    comp_report["subproblems"] = (int)ur.subs.size();
    std::vector<realizer> kids;
    auto subs_report = nlohmann::json::array();
    for (const auto& s : ur.subs) {
        nlohmann::json sr;
        sr["size"] = s.q.n();
        sr["role"] = s.role == subproblem_role::up ? "up" : "level";
        sr["layer"] = s.layer;
        realizer r;
        if (s.q.n() < 3) {
            r = exact_dimension(s.q, pair_target::mm).rlz;
            sr["route"] = "exact-tiny";
        } else {
            auto res = decompose_tw2(cover_graph(s.q));
            if (!decomposition_ok(res)) {
                nlohmann::json dump;
                dump["parent"] = poset_to_json(c);
                dump["subproblem"] = poset_to_json(s.q);
                throw falsification("PaperGapViolation",
                                    "unfolding subproblem lost the treewidth bound", dump);
            }
            auto nd = normalize(decomposition_of(res), s.q, s.q0);
            r = mm_realizer(s.q, nd, opt.max_cycle_len);
            sr["route"] = "classes";
        }
        sr["extensions"] = (int)r.extensions.size();
        max_classes = std::max(max_classes, (int)r.extensions.size());
        subs_report.push_back(sr);
        kids.push_back(std::move(r));
    }
    comp_report["per_subproblem"] = subs_report;
    return apply_lift(c, ur, kids);
}

}  // namespace

bound_result bound_pipeline(const poset& p, const bound_options& opt) {
    bound_result out;
    out.report["elements"] = p.n();

    pair_set inc, mm;
    pair_sets(p, inc, mm);
    if (inc.empty()) {
        // Total order (or a single element): one extension realizes it.
        out.rlz.kind = realizer_kind::full;
        out.rlz.extensions.push_back(reversing_extension(p, {}));
        out.report["route"] = "total-order";
        return out;
    }

    graph g = cover_graph(p);
    auto dec = decompose_tw2(g);
    if (!decomposition_ok(dec)) {
        out.status = bound_status::obstruction;
        out.obstruction = std::get<tw_obstruction>(dec);
        out.report["route"] = "obstruction";
        return out;
    }

    if (is_forest(g) && p.n() <= 20) {
        // Forest covers have small exact dimension; try a budgeted exact
        // search and fall through to the general construction on timeout.
        try {
            auto ex = exact_dimension(p, pair_target::inc, -1, 20, 2'000'000);
            out.rlz = ex.rlz;
            out.rlz.kind = realizer_kind::full;
            out.report["route"] = "forest-exact";
            out.report["size"] = (int)out.rlz.extensions.size();
            return out;
        } catch (const op_error& e) {
            if (e.kind != "BudgetExceeded") throw;
        }
    }

    out.report["route"] = "pipeline";
    auto pc = pendant_closure(p);
    out.report["closure_elements"] = pc.q.n();
    auto cs = split_components(pc.q);
    out.report["components"] = (int)cs.components.size();

    std::vector<realizer> comps;
    auto comp_reports = nlohmann::json::array();
    for (const auto& c : cs.components) {
        nlohmann::json cr;
        cr["size"] = c.n();
        comps.push_back(component_mm_realizer(c, opt, out.max_classes, cr));
        cr["extensions"] = (int)comps.back().extensions.size();
        comp_reports.push_back(cr);
    }
    out.report["per_component"] = comp_reports;

    realizer mm_q = combine_components(pc.q, cs, comps);
    out.rlz = pendant_lift(pc, p, mm_q);
    out.report["size"] = (int)out.rlz.extensions.size();

    auto chk = is_realizer(p, out.rlz);
    if (!chk.ok)
        throw op_error("InternalError", "pipeline produced an invalid realizer: " + chk.detail);
    if (out.rlz.extensions.size() > 1276)
        throw op_error("InternalError", "pipeline exceeded the 1276 extension bound");
    return out;
}

}  // namespace tw2
