#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace tw2 {

// Contract violation raised by library operations. `kind` is a stable
// machine-readable tag (e.g. "CycleInRelations", "NotReversible").
struct op_error : std::runtime_error {
    std::string kind;

    op_error(std::string k, const std::string& msg)
        : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

// A falsification event: the construction ran into a state that the underlying
// theory rules out. Carries a machine-checkable dump (offending poset, the
// decomposition, and the witness cycle / odd walk) so the instance can be
// archived and replayed. `kind` is one of: EqualU, OddCycle(S), OddCycle(K),
// OddCycle(J1), OddCycle(J2), OddCycle(K^), RootUndefined, LabelingFailure,
// ClassNotReversible, PaperGapViolation.
struct falsification : std::runtime_error {
    std::string kind;
    nlohmann::json dump;

    falsification(std::string k, const std::string& msg, nlohmann::json d)
        : std::runtime_error(k + ": " + msg), kind(std::move(k)), dump(std::move(d)) {}
};

}  // namespace tw2
