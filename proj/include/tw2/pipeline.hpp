#pragma once

#include "tw2/signature.hpp"
#include "tw2/treewidth.hpp"

namespace tw2 {

struct bound_options {
    // Cap on the length of enumerated strict alternating cycles inside a
    // class (0 = class size). Lowering it can only cost extra classes, never
    // soundness: every class is re-certified by is_reversible.
    int max_cycle_len = 0;
};

enum class bound_status { realized, obstruction };

// End-to-end bound construction: pendant closure -> connected components ->
// unfolding -> per-subproblem normalized decomposition + class partition ->
// lifts back up. The result is a verified full realizer of at most 1276
// linear extensions, or a treewidth obstruction.
struct bound_result {
    bound_status status = bound_status::realized;
    realizer rlz;                 // kind full, verified, when realized
    tw_obstruction obstruction;   // when the cover graph has treewidth > 2
    int max_classes = 0;          // largest per-subproblem class count (<= 638)
    nlohmann::json report;        // stage-by-stage sizes and routing
};

// Throws falsification (LabelingFailure, OddCycle*, EqualU, RootUndefined,
// ClassNotReversible, PaperGapViolation) if a construction step contradicts
// the underlying theory; op_error InternalError if the final re-verification
// fails.
bound_result bound_pipeline(const poset& p, const bound_options& opt = {});

}  // namespace tw2
