#ifndef MPFSM_CONSTRUCTIONS_HPP
#define MPFSM_CONSTRUCTIONS_HPP

#include "mpfsm/fsm.hpp"
#include "mpfsm/multitape.hpp"
#include "mpfsm/trace.hpp"
#include "mpfsm/verdict.hpp"

namespace mpfsm {

/// Builds a deterministic machine N with sigma in L(N) and L(N) contained in
/// the observational closure of m's language. N replays sigma along a fresh
/// state chain; every off-chain input behaves like an anchor state of m that
/// observers cannot tell apart from the chain position.
///
/// Requires member_pc(sigma, m) to hold; throws PreconditionError otherwise.
MultiPortFsm witness_fsm(const MultiPortFsm& m, const GlobalTrace& sigma,
                         const SearchLimits& limits = {});

/// Small machines exercising every corner the test suites care about. Each
/// call builds a fresh set; machines meant to be compared share an alphabet.
struct FixtureSet {
    /// One state, two ports, nondeterministic: answers its only input with
    /// either the plain or the primed output pair.
    MultiPortFsm m1;
    /// One state, same alphabet as m1: answers with the mixed pair
    /// (y1, y2'), which m1 never produces in one step even though each port
    /// alone sees nothing new.
    MultiPortFsm n1;
    /// Four states, deterministic: the two-step ping-pong x1 x2 returns to
    /// the start silently, so observers cannot count completed rounds.
    MultiPortFsm m4;
    /// Three states, deterministic: the first input decides which port-2
    /// output the run commits to.
    MultiPortFsm m7;
    /// m7 plus one initial self-loop on x1; the loop makes the machine's
    /// plain language coincide with m7's observational closure.
    MultiPortFsm m7_loop;
    /// Three states, deterministic: reaching the output step requires x1 x1,
    /// but port 2 cannot tell how many x2 rounds were interleaved.
    MultiPortFsm m5;
    /// Three states: a trace can be a member of the closure while one of its
    /// prefixes is not, so closure membership is not prefix-closed.
    MultiPortFsm m_nonpc;

    /// Two-tape automaton accepting all stacked-pair tuples except the
    /// matched ones, over characters {a, b}.
    MultiTapeFa mismatch_m;
    /// Three-tape automaton: after the tape-3 marker it echoes tape-1
    /// characters onto tape 2 in lockstep, optionally closing with x.
    MultiTapeFa echo3;
};

FixtureSet fixtures();

} // namespace mpfsm

#endif
