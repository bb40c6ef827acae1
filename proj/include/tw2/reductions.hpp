#pragma once

#include <map>
#include <vector>

#include "tw2/poset.hpp"

namespace tw2 {

// Pendant closure Q of P: one pendant x' below every non-minimal x and one
// pendant y'' above every non-maximal y (x' = x / y'' = y for minimal /
// maximal elements; Q = P for chains and antichains). An MM(Q)-reverser
// restricted to X(P) reverses all of Inc(P).
struct pendant_closure_result {
    poset q;
    std::vector<int> embed;    // parent index → q index
    std::map<int, int> primes;   // parent index → index of x' in q
    std::map<int, int> dprimes;  // parent index → index of y'' in q
};

pendant_closure_result pendant_closure(const poset& p);

// Lift: restrict each extension of an MM(Q)-realizer to P's elements; the
// result is a full realizer of P.
realizer pendant_lift(const pendant_closure_result& pc, const poset& p, const realizer& mm_q);

// Connected components of the cover graph as induced subposets.
struct component_split {
    std::vector<poset> components;
    std::vector<std::vector<int>> elem_map;  // component index → parent indices
};

component_split split_components(const poset& p);

// Max-size interleavings L = L_1 < ... < L_k plus one reversed-block-order
// copy L' = L_k < ... < L_1 (which reuses each component's last extension, so
// every child extension stays present). Output size = max(2, max child size)
// when there are ≥ 2 components.
realizer combine_components(const poset& p, const component_split& cs,
                            const std::vector<realizer>& children);

// Unfolding from a0: layers A_0 = {a0}, B_{i+1} = fresh maxima above A_i,
// A_{i+1} = fresh minima below B_{i+1}. Subproblems Q_i^{i+1} (role up) and
// Q_i^i (role level), each augmented with a contraction element q and
// dualized when required so a q0 sits below all its maxima.
enum class subproblem_role { up, level };

struct subproblem {
    poset q;
    subproblem_role role = subproblem_role::up;
    int layer = 0;     // i of Q_i^{i+1} / Q_i^i
    bool dualized = false;
    int q0 = -1;       // index in q: element below all maxima of q
    int q_elem = -1;   // index in q of the contraction element, or -1
    std::vector<int> parent_of;  // q index → parent index (-1 for q_elem)
};

struct unfold_result {
    std::vector<std::vector<int>> A, B;  // A[0..k-1], B[1..k] (B[0] unused)
    std::vector<subproblem> subs;
    bool passthrough = false;  // k == 1: the single subproblem is P itself
    std::map<int, int> layer_of_min, layer_of_max;
    // Static part of the ownership map: which subproblem is responsible for
    // reversing each MM pair of the parent (slot refinement happens in
    // apply_lift once the child realizers are known).
    std::map<elem_pair, int> owner_sub;
};

// Throws Disconnected, NotMinimal. Raises falsification(PaperGapViolation)
// if the q0 condition fails in an emitted subproblem.
unfold_result unfold(const poset& p, int a0);

// Builds the parent MM-realizer from child MM-realizers via responsibility
// sets: each slot's set is checked by is_reversible and realized by
// reversing_extension. Raises falsification(PaperGapViolation) if a
// responsibility set is not reversible.
realizer apply_lift(const poset& p, const unfold_result& ur,
                    const std::vector<realizer>& children);

}  // namespace tw2
