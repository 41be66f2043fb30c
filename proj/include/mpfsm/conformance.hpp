#ifndef MPFSM_CONFORMANCE_HPP
#define MPFSM_CONFORMANCE_HPP

#include <vector>

#include "mpfsm/fsm.hpp"
#include "mpfsm/verdict.hpp"

namespace mpfsm {

/// Finite automaton accepting exactly the port-local observations of a
/// machine. States 0..num_fsm_states-1 mirror the machine's states; above
/// them sits one intermediate state per transition that emits both the input
/// and an output at the port. Transitions not visible at the port become
/// silent moves. Every state accepts.
class ProjectionAutomaton {
public:
    static constexpr int kTau = -1;

    ProjectionAutomaton(const MultiPortFsm& m, int port);

    int port() const { return port_; }
    int num_fsm_states() const { return num_fsm_states_; }
    int num_states() const { return static_cast<int>(edges_.size()); }
    int initial() const { return initial_; }

    /// Outgoing (symbol, target) edges, kTau for silent moves, sorted.
    const std::vector<std::pair<int, int>>& edges_from(int state) const { return edges_.at(state); }

    /// Subset simulation; true if the word is an observation of the machine.
    bool accepts(const std::vector<int>& word) const;

    /// Silent-move-free successor of a state set under one symbol. The input
    /// set must be sorted; the result is sorted.
    std::vector<int> step(const std::vector<int>& states, int symbol) const;
    /// The initial subset for step(): just the initial state.
    std::vector<int> start() const { return {initial_}; }

private:
    std::vector<int> closure(const std::vector<int>& states) const;

    int port_;
    int num_fsm_states_;
    int initial_;
    std::vector<std::vector<std::pair<int, int>>> edges_;
};

/// Which algorithm check_strong_bounded runs. Both produce identical
/// verdicts and counterexamples.
enum class StrongEngine {
    /// Product search that tracks, per enumerated behaviour of the left
    /// machine, every partial matching run of the right machine. Merges
    /// observationally equivalent prefixes, so it handles bounds that make
    /// plain enumeration infeasible.
    fused,
    /// Literal form of the definition: enumerate bounded behaviours of the
    /// left machine, ask the membership oracle for each observation class.
    enumerate,
};

struct StrongCheckOptions {
    StrongEngine engine = StrongEngine::fused;
    /// enumerate engine only: skip oracle calls for already-checked classes.
    bool dedup_classes = true;
    /// enumerate engine only: partition work by first step across threads.
    bool parallel = false;
    SearchLimits limits{};
};

/// Per-port inclusion of observations: every local word the left machine can
/// show an observer, the right machine can show as well.
WeakVerdict check_weak(const MultiPortFsm& n, const MultiPortFsm& m);

/// Bounded trace-closure inclusion: every trace of `n` with at most `k`
/// steps must be observationally matched by some trace of `m`. Fails with
/// the shortest (then step-wise least) unmatched trace of `n`.
Verdict check_strong_bounded(const MultiPortFsm& n, const MultiPortFsm& m, int k,
                             const StrongCheckOptions& options = {});

/// Exact decision for machines whose right-hand side outputs at every port
/// on every transition; inclusion then degenerates to plain language
/// inclusion. Throws PreconditionError if `m` has a silent output slot.
Verdict check_strong_all_output_case(const MultiPortFsm& n, const MultiPortFsm& m);

/// Bounded decision for machines where each port sees at most one symbol;
/// observation classes collapse to symbol-count vectors. Throws
/// PreconditionError unless both machines satisfy that shape.
Verdict check_parikh_case_bounded(const MultiPortFsm& n, const MultiPortFsm& m, int bound,
                                  const StrongCheckOptions& options = {});

/// Both directions of the bounded check; a direction that fails yields a
/// witness trace observers could use to tell the machines apart. The
/// machines are mutually distinguishable only when both directions fail.
struct DistinguishReport {
    Verdict n_from_m;
    Verdict m_from_n;

    bool distinguishable() const { return !n_from_m.pass && !m_from_n.pass; }
};

DistinguishReport distinguishable_bounded(const MultiPortFsm& n, const MultiPortFsm& m, int k,
                                          const StrongCheckOptions& options = {});

} // namespace mpfsm

#endif
