#ifndef MPFSM_ORACLE_HPP
#define MPFSM_ORACLE_HPP

#include <optional>
#include <vector>

#include "mpfsm/fsm.hpp"
#include "mpfsm/trace.hpp"
#include "mpfsm/verdict.hpp"

namespace mpfsm {

/// Answer of a closure-membership query. A positive answer carries the
/// shortest-path witness found by the breadth-first configuration search:
/// a trace of the machine that every port-local observer cannot tell apart
/// from the query.
struct MembershipResult {
    bool member = false;
    std::optional<GlobalTrace> witness;
    std::optional<int> witness_end_state;
    SearchStats stats;
};

/// Does some trace of `m` project to the same local observations as `sigma`
/// at every port? Runs a breadth-first search over (state, cursor vector)
/// configurations, where cursor p scans the port-p projection of `sigma`.
/// Visits at most |states| * prod_p(|w_p| + 1) configurations.
MembershipResult member_closure(const GlobalTrace& sigma, const MultiPortFsm& m,
                                const SearchLimits& limits = {});

/// Reference implementation: enumerate every trace of `m` with exactly
/// |sigma| steps and compare observations. Only suitable for small bounds;
/// exists to cross-check member_closure.
bool member_closure_bruteforce(const GlobalTrace& sigma, const MultiPortFsm& m,
                               const SearchLimits& limits = {});

/// Membership of a trace and all of its prefixes.
struct PrefixClosureResult {
    bool member = false;
    /// Length of the shortest prefix that fails, when not a member.
    std::optional<std::size_t> failing_prefix_len;
    /// Witness end state per prefix length 0..k (filled while prefixes pass).
    std::vector<int> prefix_end_states;
    /// Witness trace per prefix length 0..k (filled while prefixes pass).
    std::vector<GlobalTrace> prefix_witnesses;
    SearchStats stats;
};

/// Checks that every prefix of `sigma` (including `sigma` itself) passes
/// member_closure against `m`.
PrefixClosureResult member_pc(const GlobalTrace& sigma, const MultiPortFsm& m,
                              const SearchLimits& limits = {});

} // namespace mpfsm

#endif
