#include "tw2/reductions.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "tw2/treewidth.hpp"

namespace tw2 {

namespace {

std::string fresh_name(const std::set<std::string>& taken, std::string base) {
    while (taken.count(base)) base += "'";
    return base;
}

poset induced_subposet(const poset& p, const std::vector<int>& elems) {
    std::vector<std::string> els;
    for (int e : elems) els.push_back(p.elements[e]);
    std::vector<std::pair<std::string, std::string>> rels;
    for (size_t i = 0; i < elems.size(); ++i)
        for (size_t j = 0; j < elems.size(); ++j)
            if (p.less(elems[i], elems[j])) rels.push_back({els[i], els[j]});
    return new_poset(els, rels);
}

}  // namespace

pendant_closure_result pendant_closure(const poset& p) {
    pendant_closure_result out;
    out.embed.resize(p.n());
    if (p.is_chain() || p.is_antichain()) {
        out.q = p;
        std::iota(out.embed.begin(), out.embed.end(), 0);
        for (int x = 0; x < p.n(); ++x) {
            out.primes[x] = x;
            out.dprimes[x] = x;
        }
        return out;
    }
    std::set<std::string> taken(p.elements.begin(), p.elements.end());
    std::vector<uint8_t> is_min(p.n(), 0), is_max(p.n(), 0);
    for (int x : p.minimals()) is_min[x] = 1;
    for (int x : p.maximals()) is_max[x] = 1;

    std::vector<std::string> els = p.elements;
    std::vector<std::pair<std::string, std::string>> rels;
    for (const auto& [x, y] : p.covers) rels.push_back({p.elements[x], p.elements[y]});
    std::map<int, std::string> prime_name, dprime_name;
    for (int x = 0; x < p.n(); ++x) {
        if (!is_min[x]) {
            std::string nm = fresh_name(taken, p.elements[x] + "_lo");
            taken.insert(nm);
            els.push_back(nm);
            rels.push_back({nm, p.elements[x]});
            prime_name[x] = nm;
        }
        if (!is_max[x]) {
            std::string nm = fresh_name(taken, p.elements[x] + "_hi");
            taken.insert(nm);
            els.push_back(nm);
            rels.push_back({p.elements[x], nm});
            dprime_name[x] = nm;
        }
    }
    out.q = new_poset(els, rels);
    for (int x = 0; x < p.n(); ++x) {
        out.embed[x] = out.q.index_of(p.elements[x]);
        out.primes[x] = is_min[x] ? out.embed[x] : out.q.index_of(prime_name[x]);
        out.dprimes[x] = is_max[x] ? out.embed[x] : out.q.index_of(dprime_name[x]);
    }
    return out;
}

realizer pendant_lift(const pendant_closure_result& pc, const poset& p, const realizer& mm_q) {
    std::vector<int> back(pc.q.n(), -1);
    for (int x = 0; x < p.n(); ++x) back[pc.embed[x]] = x;
    realizer out;
    out.kind = realizer_kind::full;
    for (const auto& L : mm_q.extensions) {
        linear_extension r;
        for (int v : L)
            if (back[v] >= 0) r.push_back(back[v]);
        out.extensions.push_back(r);
    }
    return out;
}

component_split split_components(const poset& p) {
    graph g = cover_graph(p);
    component_split out;
    std::vector<int> comp(p.n(), -1);
    for (int s = 0; s < p.n(); ++s) {
        if (comp[s] >= 0) continue;
        int c = (int)out.elem_map.size();
        out.elem_map.push_back({});
        std::queue<int> q;
        q.push(s);
        comp[s] = c;
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            out.elem_map[c].push_back(v);
            for (int w : g.adj[v])
                if (comp[w] < 0) {
                    comp[w] = c;
                    q.push(w);
                }
        }
        std::sort(out.elem_map[c].begin(), out.elem_map[c].end());
    }
    for (const auto& elems : out.elem_map) out.components.push_back(induced_subposet(p, elems));
    return out;
}

realizer combine_components(const poset& p, const component_split& cs,
                            const std::vector<realizer>& children) {
    int k = (int)children.size();
    if (k == 1) {
        realizer out = children[0];
        // Child element order equals the parent's restriction (elem_map is
        // sorted), so extensions translate index-wise.
        for (auto& L : out.extensions)
            for (int& v : L) v = cs.elem_map[0][v];
        return out;
    }
    int t = 1;
    for (const auto& r : children) t = std::max(t, (int)r.extensions.size());
    realizer out;
    out.kind = children[0].kind;
    auto block = [&](int c, int j) {  // child c's extension j mapped to parent
        const auto& L = children[c].extensions[j];
        linear_extension r;
        for (int v : L) r.push_back(cs.elem_map[c][v]);
        return r;
    };
    int forward = std::max(1, t - 1);
    for (int j = 0; j < forward; ++j) {
        linear_extension L;
        for (int c = 0; c < k; ++c) {
            int tc = (int)children[c].extensions.size();
            auto b = block(c, std::min(j, tc - 1));
            L.insert(L.end(), b.begin(), b.end());
        }
        out.extensions.push_back(L);
    }
    {
        // Reversed block order, using each component's last extension so no
        // child extension is lost.
        linear_extension L;
        for (int c = k - 1; c >= 0; --c) {
            auto b = block(c, (int)children[c].extensions.size() - 1);
            L.insert(L.end(), b.begin(), b.end());
        }
        out.extensions.push_back(L);
    }
    return out;
}

unfold_result unfold(const poset& p, int a0) {
    {
        graph g = cover_graph(p);
        std::vector<uint8_t> seen(g.n, 0);
        std::vector<int> st = {0};
        seen[0] = 1;
        int cnt = 0;
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            ++cnt;
            for (int w : g.adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    st.push_back(w);
                }
        }
        if (cnt != g.n && g.n > 1) throw op_error("Disconnected", "unfold needs a connected cover graph");
    }
    std::vector<uint8_t> is_min(p.n(), 0), is_max(p.n(), 0);
    for (int x : p.minimals()) is_min[x] = 1;
    for (int x : p.maximals()) is_max[x] = 1;
    if (!is_min[a0]) throw op_error("NotMinimal", "a0 must be a minimal element");

    unfold_result out;
    std::vector<uint8_t> used(p.n(), 0);
    out.A.push_back({a0});
    out.B.push_back({});  // B[0] unused
    used[a0] = 1;
    out.layer_of_min[a0] = 0;
    while (true) {
        int i = (int)out.A.size() - 1;
        if (out.A[i].empty()) break;
        std::vector<int> bnext;
        for (int b = 0; b < p.n(); ++b) {
            if (!is_max[b] || used[b]) continue;
            for (int a : out.A[i])
                if (p.less(a, b)) {
                    bnext.push_back(b);
                    break;
                }
        }
        for (int b : bnext) {
            used[b] = 1;
            out.layer_of_max[b] = i + 1;
        }
        out.B.push_back(bnext);
        std::vector<int> anext;
        for (int a = 0; a < p.n(); ++a) {
            if (!is_min[a] || used[a]) continue;
            for (int b : bnext)
                if (p.less(a, b)) {
                    anext.push_back(a);
                    break;
                }
        }
        for (int a : anext) {
            used[a] = 1;
            out.layer_of_min[a] = i + 1;
        }
        out.A.push_back(anext);
        if (bnext.empty() && anext.empty()) break;
    }
    // A ends with the empty A_k; drop it so A holds A_0..A_{k-1}.
    while (!out.A.empty() && out.A.back().empty()) out.A.pop_back();
    int k = (int)out.A.size();
    if ((int)out.B.size() < k + 1) out.B.resize(k + 1);

    // Layers must partition min ∪ max (connectivity of the cover graph).
    for (int v = 0; v < p.n(); ++v)
        if ((is_min[v] || is_max[v]) && !used[v])
            throw op_error("InternalError",
                           "unfold layers missed element " + p.elements[v] +
                               " (cover graph should make layers exhaustive)");

    pair_set inc, mm;
    pair_sets(p, inc, mm);

    if (k == 1) {
        out.passthrough = true;
        subproblem s;
        s.q = p;
        s.role = subproblem_role::up;
        s.layer = 0;
        s.q0 = a0;
        s.parent_of.resize(p.n());
        std::iota(s.parent_of.begin(), s.parent_of.end(), 0);
        out.subs.push_back(s);
        for (auto& pr : mm) out.owner_sub[pr] = 0;
        return out;
    }

    std::set<std::string> taken(p.elements.begin(), p.elements.end());
    auto in_up_set = [&](int x, const std::vector<int>& A) {
        for (int a : A)
            if (p.leq(a, x)) return true;
        return false;
    };
    auto in_down_set = [&](int x, const std::vector<int>& B) {
        for (int b : B)
            if (p.leq(x, b)) return true;
        return false;
    };

    auto q0_check = [&](const poset& q, int q0, const std::string& what) {
        for (int b : q.maximals())
            if (b != q0 && !q.less(q0, b)) {
                nlohmann::json dump;
                dump["parent"] = poset_to_json(p);
                dump["subproblem"] = poset_to_json(q);
                dump["q0"] = q.elements[q0];
                dump["offending_max"] = q.elements[b];
                throw falsification("PaperGapViolation",
                                    "q0 condition failed in " + what, dump);
            }
    };

    for (int i = 0; i < k; ++i) {
        // Q_i^{i+1} on A_i ∪ B_{i+1} ∪ (U(A_i) ∩ D(B_{i+1})).
        const auto& Bn = out.B[i + 1];
        std::vector<int> X;
        for (int x = 0; x < p.n(); ++x) {
            bool inx = std::find(out.A[i].begin(), out.A[i].end(), x) != out.A[i].end() ||
                       std::find(Bn.begin(), Bn.end(), x) != Bn.end() ||
                       (in_up_set(x, out.A[i]) && in_down_set(x, Bn));
            if (inx) X.push_back(x);
        }
        subproblem s;
        s.role = subproblem_role::up;
        s.layer = i;
        if (i == 0) {
            s.q = induced_subposet(p, X);
            s.q0 = s.q.index_of(p.elements[a0]);
            s.parent_of.assign(X.begin(), X.end());
        } else {
            // Contract everything below the previous B-layer into q above
            // X ∩ D(B_i), then dualize.
            std::vector<std::string> els;
            for (int x : X) els.push_back(p.elements[x]);
            std::string qn = fresh_name(taken, "_q");
            els.push_back(qn);
            std::vector<std::pair<std::string, std::string>> rels;
            for (size_t ii = 0; ii < X.size(); ++ii)
                for (size_t jj = 0; jj < X.size(); ++jj)
                    if (p.less(X[ii], X[jj])) rels.push_back({els[ii], els[jj]});
            for (size_t ii = 0; ii < X.size(); ++ii)
                if (in_down_set(X[ii], out.B[i])) rels.push_back({els[ii], qn});
            poset aug = new_poset(els, rels);
            s.q = dual(aug);
            s.dualized = true;
            s.q_elem = s.q.index_of(qn);
            s.q0 = s.q_elem;
            s.parent_of.assign(s.q.n(), -1);
            for (size_t ii = 0; ii < X.size(); ++ii) s.parent_of[s.q.index_of(els[ii])] = X[ii];
            q0_check(s.q, s.q0, "up subproblem layer " + std::to_string(i));
        }
        out.subs.push_back(s);
    }
    for (int i = 1; i < k; ++i) {
        // Q_i^i on A_i ∪ B_i ∪ (U(A_i) ∩ D(B_i)), with q below
        // X ∩ U(A_{i-1}) (mirror construction, no dualization).
        const auto& Bi = out.B[i];
        std::vector<int> X;
        for (int x = 0; x < p.n(); ++x) {
            bool inx = std::find(out.A[i].begin(), out.A[i].end(), x) != out.A[i].end() ||
                       std::find(Bi.begin(), Bi.end(), x) != Bi.end() ||
                       (in_up_set(x, out.A[i]) && in_down_set(x, Bi));
            if (inx) X.push_back(x);
        }
        subproblem s;
        s.role = subproblem_role::level;
        s.layer = i;
        std::vector<std::string> els;
        for (int x : X) els.push_back(p.elements[x]);
        std::string qn = fresh_name(taken, "_q");
        els.push_back(qn);
        std::vector<std::pair<std::string, std::string>> rels;
        for (size_t ii = 0; ii < X.size(); ++ii)
            for (size_t jj = 0; jj < X.size(); ++jj)
                if (p.less(X[ii], X[jj])) rels.push_back({els[ii], els[jj]});
        for (size_t ii = 0; ii < X.size(); ++ii)
            if (in_up_set(X[ii], out.A[i - 1])) rels.push_back({qn, els[ii]});
        s.q = new_poset(els, rels);
        s.q_elem = s.q.index_of(qn);
        s.q0 = s.q_elem;
        s.parent_of.assign(s.q.n(), -1);
        for (size_t ii = 0; ii < X.size(); ++ii) s.parent_of[s.q.index_of(els[ii])] = X[ii];
        q0_check(s.q, s.q0, "level subproblem layer " + std::to_string(i));
        out.subs.push_back(s);
    }

    for (auto& [a, b] : mm) {
        int i = out.layer_of_min.at(a), m = out.layer_of_max.at(b);
        int owner = -1;
        for (int si = 0; si < (int)out.subs.size(); ++si) {
            const auto& s = out.subs[si];
            if (m >= i + 1 && s.role == subproblem_role::up && s.layer == i) owner = si;
            if (m <= i && s.role == subproblem_role::level && s.layer == i) owner = si;
        }
        out.owner_sub[{a, b}] = owner;
    }
    return out;
}

realizer apply_lift(const poset& p, const unfold_result& ur,
                    const std::vector<realizer>& children) {
    if (children.size() != ur.subs.size())
        throw op_error("BadInput", "one child realizer per subproblem required");
    if (ur.passthrough) {
        realizer out = children[0];
        out.kind = realizer_kind::mm;
        return out;
    }

    // De-augment child extensions into parent element sequences: reverse if
    // dualized, drop the contraction element, map indices.
    std::vector<std::vector<std::vector<int>>> ext(ur.subs.size());
    std::vector<std::vector<std::vector<int>>> pos(ur.subs.size());  // ext → parent elt → position
    for (size_t si = 0; si < ur.subs.size(); ++si) {
        const auto& s = ur.subs[si];
        for (const auto& L : children[si].extensions) {
            std::vector<int> seq;
            if (s.dualized)
                for (auto it = L.rbegin(); it != L.rend(); ++it) {
                    if (s.parent_of[*it] >= 0) seq.push_back(s.parent_of[*it]);
                }
            else
                for (int v : L)
                    if (s.parent_of[v] >= 0) seq.push_back(s.parent_of[v]);
            std::vector<int> pp(p.n(), -1);
            for (int idx = 0; idx < (int)seq.size(); ++idx) pp[seq[idx]] = idx;
            ext[si].push_back(std::move(seq));
            pos[si].push_back(std::move(pp));
        }
    }

    int t_up = 0, t_lv = 0;
    for (size_t si = 0; si < ur.subs.size(); ++si) {
        int sz = (int)ext[si].size();
        if (ur.subs[si].role == subproblem_role::up)
            t_up = std::max(t_up, sz);
        else
            t_lv = std::max(t_lv, sz);
    }

    pair_set inc, mm;
    pair_sets(p, inc, mm);
    std::vector<pair_set> R_up(std::max(t_up, 1)), R_lv(std::max(t_lv, 1));
    for (auto& [a, b] : mm) {
        int i = ur.layer_of_min.at(a), m = ur.layer_of_max.at(b);
        int owner = ur.owner_sub.at({a, b});
        if (owner < 0) throw op_error("InternalError", "unowned min-max pair");
        const auto& s = ur.subs[owner];
        bool up = s.role == subproblem_role::up;
        int slot = 0;
        if ((up && m == i + 1) || (!up && m == i)) {
            // Within-subproblem pair: smallest child extension reversing it.
            slot = -1;
            for (int j = 0; j < (int)ext[owner].size(); ++j)
                if (pos[owner][j][a] >= 0 && pos[owner][j][b] >= 0 &&
                    pos[owner][j][b] < pos[owner][j][a]) {
                    slot = j;
                    break;
                }
            if (slot < 0) {
                nlohmann::json dump;
                dump["parent"] = poset_to_json(p);
                dump["pair"] = {p.elements[a], p.elements[b]};
                throw falsification("PaperGapViolation",
                                    "no child extension reverses an owned min-max pair", dump);
            }
        }
        // Cross-layer pairs (m ≥ i+2 up / m ≤ i−1 level) are reversed by the
        // block order of every combined extension; they go to slot 0.
        (up ? R_up : R_lv)[slot].push_back({a, b});
    }

    realizer out;
    out.kind = realizer_kind::mm;
    auto emit = [&](std::vector<pair_set>& slots, const char* what) {
        for (auto& R : slots) {
            std::sort(R.begin(), R.end());
            auto rev = is_reversible(p, R);
            if (!rev.reversible) {
                nlohmann::json dump;
                dump["parent"] = poset_to_json(p);
                auto prs = nlohmann::json::array();
                for (auto& [x, y] : R) prs.push_back({p.elements[x], p.elements[y]});
                dump["responsibility_set"] = prs;
                auto cyc = nlohmann::json::array();
                for (auto& [x, y] : rev.witness->pairs)
                    cyc.push_back({p.elements[x], p.elements[y]});
                dump["witness_cycle"] = cyc;
                throw falsification("PaperGapViolation",
                                    std::string("responsibility set not reversible (") + what +
                                        " slot)",
                                    dump);
            }
            out.extensions.push_back(reversing_extension(p, R));
        }
    };
    emit(R_up, "up");
    emit(R_lv, "level");
    return out;
}

}  // namespace tw2
