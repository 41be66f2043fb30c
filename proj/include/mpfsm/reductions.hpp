#ifndef MPFSM_REDUCTIONS_HPP
#define MPFSM_REDUCTIONS_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpfsm/fsm.hpp"
#include "mpfsm/multitape.hpp"

namespace mpfsm {

/// A correspondence problem instance: pairs of nonempty words over a shared
/// character alphabet. A solution is a nonempty index sequence i1..ik with
/// alpha_{i1}..alpha_{ik} = beta_{i1}..beta_{ik}.
struct PcpInstance {
    std::vector<std::pair<std::string, std::string>> pairs;

    /// Distinct characters used by the pairs, sorted.
    std::vector<char> alphabet() const;
};

/// Exhaustive search for a solution using at most `max_indices` indices.
/// Returns the shortest solution, ties broken by lexicographically least
/// 1-based index sequence; nullopt when none exists within the bound.
std::optional<std::vector<int>> solve_pcp_bounded(const PcpInstance& inst, int max_indices,
                                                  const SearchLimits& limits = {});

/// Two-tape automata encoding an instance: `n` accepts the candidate tuples
/// (prefixes of x f1(w1) x' on tape 1 against f2(w2) on tape 2 produced by
/// stacking pairs), and `m` accepts everything `n` accepts except the matched
/// candidates with w1 = w2. Tuple inclusion of n in m therefore fails exactly
/// when the instance is solvable, with the minimal solution as witness.
struct PcpGadget {
    MultiTapeFa n;
    MultiTapeFa m;
};

PcpGadget gen_pcp_gadget(const PcpInstance& inst);

/// The same reduction carried over to machines: both automata embedded as
/// FSMs with one verdict port. Bounded tuple inclusion at bound B coincides
/// with the bounded strong conformance check of the embeddings at B.
std::pair<MultiPortFsm, MultiPortFsm> gen_pcp_fsm_gadget(const PcpInstance& inst);

/// One-in-three satisfiability: every clause has exactly three literal
/// slots and must contain exactly one satisfied slot.
struct OneInThreeSatInstance {
    struct Literal {
        int var = 0; // 1-based
        bool negated = false;

        bool operator==(const Literal& other) const = default;
    };

    int vars = 0;
    std::vector<std::array<Literal, 3>> clauses;
};

/// Exhaustive assignment search, slot-counted (a clause with a repeated
/// satisfied literal counts each slot separately). Assignments are tried in
/// ascending binary order with variable 1 as the least significant bit, so
/// the first hit is deterministic. Instances with more than `max_vars`
/// variables are rejected with PreconditionError.
std::optional<std::vector<bool>> solve_one_in_three(const OneInThreeSatInstance& inst,
                                                    int max_vars = 20);

/// Machines reducing the instance to a bounded strong conformance check:
/// check_strong_bounded(n, m, bound) passes exactly when some assignment
/// satisfies one literal per clause (counted over distinct variables); when
/// none exists the check fails and the counterexample is the canonical probe
/// trace. Needs at least two variables.
struct SatGadget {
    MultiPortFsm n;
    MultiPortFsm m;
    int bound = 0;
    /// Construction role -> 1-based port: roles -1 and 0 are the two
    /// synchronisation inputs, 1..r the variable inputs, r+1..r+q the
    /// clause monitor outputs.
    std::vector<std::pair<int, int>> port_map;
};

SatGadget gen_sat_gadget(const OneInThreeSatInstance& inst);

} // namespace mpfsm

#endif
