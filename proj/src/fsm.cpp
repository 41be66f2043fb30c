#include "mpfsm/fsm.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "mpfsm/errors.hpp"

namespace mpfsm {

namespace {

bool transition_less(const Transition& a, const Transition& b) {
    if (a.input != b.input)
        return a.input < b.input;
    if (a.target != b.target)
        return a.target < b.target;
    return a.outputs < b.outputs; // kNullOutput sorts before any symbol id
}

struct StepSeqHash {
    std::size_t operator()(const std::vector<int>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

std::vector<int> flatten_steps(const std::vector<Step>& steps) {
    std::vector<int> flat;
    flat.reserve(steps.size() * 4);
    for (const Step& step : steps) {
        flat.push_back(step.input);
        flat.insert(flat.end(), step.outputs.begin(), step.outputs.end());
    }
    return flat;
}

} // namespace

std::optional<int> MultiPortFsm::find_state(const std::string& name) const {
    for (int s = 0; s < num_states(); ++s)
        if (state_names_[s] == name)
            return s;
    return std::nullopt;
}

std::size_t MultiPortFsm::num_transitions() const {
    std::size_t total = 0;
    for (const auto& list : delta_)
        total += list.size();
    return total;
}

bool MultiPortFsm::replays(const GlobalTrace& trace) const {
    require_same_alphabet(alphabet_, trace.alphabet);
    std::vector<int> current{initial_};
    for (const Step& step : trace.steps) {
        std::vector<int> next;
        for (int s : current)
            for (const Transition& t : delta_[s])
                if (t.input == step.input && t.outputs == step.outputs)
                    next.push_back(t.target);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (next.empty())
            return false;
        current = std::move(next);
    }
    return true;
}

bool MultiPortFsm::operator==(const MultiPortFsm& other) const {
    if (!(alphabet_ == other.alphabet_ || *alphabet_ == *other.alphabet_))
        return false;
    return state_names_ == other.state_names_ && initial_ == other.initial_ && delta_ == other.delta_;
}

FsmBuilder& FsmBuilder::input(int port, const std::string& name) {
    if (shared_alphabet_)
        throw UsageError("cannot declare symbols on a shared alphabet");
    own_alphabet_.input(port, name);
    return *this;
}

FsmBuilder& FsmBuilder::output(int port, const std::string& name) {
    if (shared_alphabet_)
        throw UsageError("cannot declare symbols on a shared alphabet");
    own_alphabet_.output(port, name);
    return *this;
}

FsmBuilder& FsmBuilder::state(const std::string& name) {
    if (!valid_symbol_name(name))
        throw UsageError("invalid state name '" + name + "'");
    if (std::find(states_.begin(), states_.end(), name) != states_.end())
        throw UsageError("duplicate state '" + name + "'");
    states_.push_back(name);
    return *this;
}

FsmBuilder& FsmBuilder::initial(const std::string& name) {
    initial_ = name;
    return *this;
}

FsmBuilder& FsmBuilder::transition(const std::string& src, const std::string& input,
                                   const std::vector<std::string>& outputs, const std::string& dst) {
    pending_.push_back({src, input, outputs, dst});
    return *this;
}

MultiPortFsm FsmBuilder::build() {
    MultiPortFsm machine;
    machine.alphabet_ = shared_alphabet_ ? shared_alphabet_ : own_alphabet_.build();
    const Alphabet& alphabet = *machine.alphabet_;

    if (states_.empty())
        throw UsageError("a machine needs at least one state");
    machine.state_names_ = states_;
    machine.delta_.resize(states_.size());

    auto state_id = [&](const std::string& name) {
        auto id = machine.find_state(name);
        if (!id)
            throw UsageError("unknown state '" + name + "'");
        return *id;
    };

    machine.initial_ = initial_ ? state_id(*initial_) : 0;

    for (const auto& pending : pending_) {
        Transition t;
        int src = state_id(pending.src);
        t.target = state_id(pending.dst);
        t.input = alphabet.require(pending.input);
        if (!alphabet.is_input(t.input))
            throw UsageError("symbol '" + pending.input + "' is not an input");
        if (static_cast<int>(pending.outputs.size()) != alphabet.ports())
            throw UsageError("output tuple of arity " + std::to_string(pending.outputs.size()) +
                             ", expected " + std::to_string(alphabet.ports()));
        t.outputs.reserve(alphabet.ports());
        for (int p = 1; p <= alphabet.ports(); ++p) {
            const std::string& name = pending.outputs[p - 1];
            if (name == "-") {
                t.outputs.push_back(kNullOutput);
                continue;
            }
            int sym = alphabet.require(name);
            if (alphabet.is_input(sym) || alphabet.port_of(sym) != p)
                throw UsageError("symbol '" + name + "' is not an output of port " + std::to_string(p));
            t.outputs.push_back(sym);
        }
        auto& list = machine.delta_[src];
        if (std::find(list.begin(), list.end(), t) != list.end())
            throw UsageError("duplicate transition from state '" + pending.src + "'");
        list.push_back(std::move(t));
    }

    for (auto& list : machine.delta_)
        std::sort(list.begin(), list.end(), transition_less);
    return machine;
}

WellFormedReport check_well_formed(const MultiPortFsm& m) {
    WellFormedReport report;
    const Alphabet& alphabet = m.alphabet();

    report.complete = true;
    report.deterministic = true;
    for (int s = 0; s < m.num_states(); ++s) {
        for (int input : alphabet.all_inputs()) {
            int count = 0;
            for (const Transition& t : m.transitions_from(s))
                count += t.input == input ? 1 : 0;
            if (count == 0) {
                report.complete = false;
                report.missing.emplace_back(s, input);
            }
            if (count > 1)
                report.deterministic = false;
        }
    }

    std::vector<bool> reached(m.num_states(), false);
    std::deque<int> queue{m.initial()};
    reached[m.initial()] = true;
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (const Transition& t : m.transitions_from(s))
            if (!reached[t.target]) {
                reached[t.target] = true;
                queue.push_back(t.target);
            }
    }
    for (int s = 0; s < m.num_states(); ++s)
        if (!reached[s])
            report.unreachable.push_back(s);
    report.connected = report.unreachable.empty();
    return report;
}

namespace {

/// Rebuilds a machine from explicit parts, reusing its alphabet.
MultiPortFsm rebuild(const AlphabetRef& alphabet, const std::vector<std::string>& states,
                     const std::string& initial,
                     const std::vector<std::tuple<int, Transition>>& transitions) {
    FsmBuilder builder{alphabet};
    for (const auto& name : states)
        builder.state(name);
    builder.initial(initial);
    const Alphabet& a = *alphabet;
    for (const auto& [src, t] : transitions) {
        std::vector<std::string> outputs;
        outputs.reserve(a.ports());
        for (int out : t.outputs)
            outputs.push_back(out == kNullOutput ? "-" : a.name(out));
        builder.transition(states[src], a.name(t.input), outputs, states[t.target]);
    }
    return builder.build();
}

} // namespace

MultiPortFsm complete(const MultiPortFsm& m, CompletionPolicy policy) {
    WellFormedReport report = check_well_formed(m);
    if (report.complete)
        return m;

    std::vector<std::string> states;
    states.reserve(m.num_states() + 1);
    for (int s = 0; s < m.num_states(); ++s)
        states.push_back(m.state_name(s));

    int sink = -1;
    if (policy == CompletionPolicy::error_state) {
        std::string name = "err";
        while (m.find_state(name))
            name += "_";
        sink = static_cast<int>(states.size());
        states.push_back(name);
    }

    std::vector<std::tuple<int, Transition>> transitions;
    for (int s = 0; s < m.num_states(); ++s)
        for (const Transition& t : m.transitions_from(s))
            transitions.emplace_back(s, t);

    std::vector<int> null_tuple(m.alphabet().ports(), kNullOutput);
    for (const auto& [state, input] : report.missing) {
        int target = policy == CompletionPolicy::self_loop_null ? state : sink;
        transitions.emplace_back(state, Transition{input, null_tuple, target});
    }
    if (sink >= 0)
        for (int input : m.alphabet().all_inputs())
            transitions.emplace_back(sink, Transition{input, null_tuple, sink});

    return rebuild(m.alphabet_ref(), states, m.state_name(m.initial()), transitions);
}

MultiPortFsm trim(const MultiPortFsm& m) {
    WellFormedReport report = check_well_formed(m);
    if (report.connected)
        return m;

    std::vector<bool> drop(m.num_states(), false);
    for (int s : report.unreachable)
        drop[s] = true;

    std::vector<std::string> states;
    for (int s = 0; s < m.num_states(); ++s)
        if (!drop[s])
            states.push_back(m.state_name(s));

    std::vector<std::tuple<int, Transition>> transitions;
    std::vector<int> remap(m.num_states(), -1);
    int next = 0;
    for (int s = 0; s < m.num_states(); ++s)
        if (!drop[s])
            remap[s] = next++;
    for (int s = 0; s < m.num_states(); ++s) {
        if (drop[s])
            continue;
        for (Transition t : m.transitions_from(s)) {
            t.target = remap[t.target];
            transitions.emplace_back(remap[s], t);
        }
    }
    return rebuild(m.alphabet_ref(), states, m.state_name(m.initial()), transitions);
}

void enumerate_bounded(const MultiPortFsm& m, int max_steps,
                       const std::function<bool(const GlobalTrace&)>& visit) {
    if (max_steps < 0)
        throw UsageError("negative step bound");

    GlobalTrace current;
    current.alphabet = m.alphabet_ref();
    if (!visit(current))
        return;

    std::unordered_set<std::vector<int>, StepSeqHash> seen;
    seen.insert({});

    bool keep_going = true;
    auto walk = [&](auto&& self, int state, int depth) -> void {
        if (!keep_going || depth == max_steps)
            return;
        for (const Transition& t : m.transitions_from(state)) {
            current.steps.push_back(Step{t.input, t.outputs});
            if (seen.insert(flatten_steps(current.steps)).second) {
                if (!visit(current)) {
                    keep_going = false;
                    current.steps.pop_back();
                    return;
                }
            }
            self(self, t.target, depth + 1);
            current.steps.pop_back();
            if (!keep_going)
                return;
        }
    };
    walk(walk, m.initial(), 0);
}

std::vector<GlobalTrace> enumerate_bounded(const MultiPortFsm& m, int max_steps) {
    std::vector<GlobalTrace> traces;
    enumerate_bounded(m, max_steps, [&](const GlobalTrace& trace) {
        traces.push_back(trace);
        return true;
    });
    return traces;
}

} // namespace mpfsm
