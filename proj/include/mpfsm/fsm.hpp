#ifndef MPFSM_FSM_HPP
#define MPFSM_FSM_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpfsm/alphabet.hpp"
#include "mpfsm/trace.hpp"

namespace mpfsm {

/// One entry of the transition relation: input consumed, outputs produced,
/// target state. Source state is implicit in the per-state grouping.
struct Transition {
    int input = 0;
    std::vector<int> outputs; // one slot per port, kNullOutput for empty
    int target = 0;

    bool operator==(const Transition& other) const = default;
};

/// A (possibly nondeterministic) finite state machine whose inputs and
/// outputs are split across observation ports.
///
/// States are interned to 0-based ids in declaration order; the initial
/// state is id-addressed. Per-state transition lists are kept sorted by
/// (input id, target id, output tuple), which fixes every enumeration order
/// the library exposes.
class MultiPortFsm {
public:
    const AlphabetRef& alphabet_ref() const { return alphabet_; }
    const Alphabet& alphabet() const { return *alphabet_; }

    int num_states() const { return static_cast<int>(state_names_.size()); }
    const std::string& state_name(int state) const { return state_names_.at(state); }
    std::optional<int> find_state(const std::string& name) const;
    int initial() const { return initial_; }

    const std::vector<Transition>& transitions_from(int state) const { return delta_.at(state); }
    std::size_t num_transitions() const;

    /// True if the step sequence labels some path from the initial state.
    bool replays(const GlobalTrace& trace) const;

    bool operator==(const MultiPortFsm& other) const;

private:
    friend class FsmBuilder;

    AlphabetRef alphabet_;
    std::vector<std::string> state_names_;
    int initial_ = 0;
    std::vector<std::vector<Transition>> delta_;
};

/// Assembles a machine, validating symbols, arity and duplicates.
class FsmBuilder {
public:
    /// Declares symbols through an embedded AlphabetBuilder.
    explicit FsmBuilder(int ports) : own_alphabet_(ports) {}
    /// Reuses an existing alphabet so two machines share symbol ids.
    explicit FsmBuilder(AlphabetRef alphabet) : own_alphabet_(1), shared_alphabet_(std::move(alphabet)) {}

    FsmBuilder& input(int port, const std::string& name);
    FsmBuilder& output(int port, const std::string& name);
    FsmBuilder& state(const std::string& name);
    FsmBuilder& initial(const std::string& name);
    /// Output names use "-" for an empty slot.
    FsmBuilder& transition(const std::string& src, const std::string& input,
                           const std::vector<std::string>& outputs, const std::string& dst);

    MultiPortFsm build();

private:
    struct PendingTransition {
        std::string src;
        std::string input;
        std::vector<std::string> outputs;
        std::string dst;
    };

    AlphabetBuilder own_alphabet_;
    AlphabetRef shared_alphabet_;
    std::vector<std::string> states_;
    std::optional<std::string> initial_;
    std::vector<PendingTransition> pending_;
};

/// Findings of the structural checks; a machine is well formed when it is
/// complete and initially connected.
struct WellFormedReport {
    bool complete = false;
    bool connected = false;
    bool deterministic = false;
    std::vector<std::pair<int, int>> missing;  // (state, input) pairs with no transition
    std::vector<int> unreachable;              // state ids

    bool well_formed() const { return complete && connected; }
};

WellFormedReport check_well_formed(const MultiPortFsm& m);

/// How to supply transitions for undefined (state, input) pairs.
enum class CompletionPolicy {
    self_loop_null, // stay in place, produce no outputs
    error_state,    // move to a fresh sink that answers every input silently
};

/// Completes the machine; defined behaviour is untouched.
MultiPortFsm complete(const MultiPortFsm& m, CompletionPolicy policy);

/// Drops states unreachable from the initial state.
MultiPortFsm trim(const MultiPortFsm& m);

/// Visits every distinct path label with at most `max_steps` steps, starting
/// with the empty trace, in depth-first order under the canonical transition
/// ordering. Returning false stops the walk.
void enumerate_bounded(const MultiPortFsm& m, int max_steps,
                       const std::function<bool(const GlobalTrace&)>& visit);

/// Convenience form collecting the enumeration into a vector.
std::vector<GlobalTrace> enumerate_bounded(const MultiPortFsm& m, int max_steps);

} // namespace mpfsm

#endif
