#include "mpfsm/conformance.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "mpfsm/detail/hash.hpp"
#include "mpfsm/errors.hpp"
#include "mpfsm/oracle.hpp"

namespace mpfsm {

namespace {

using detail::VecIntHash;

void require_comparable(const MultiPortFsm& n, const MultiPortFsm& m) {
    require_same_alphabet(n.alphabet_ref(), m.alphabet_ref());
    if (!check_well_formed(n).complete)
        throw PreconditionError("left machine is not completely specified; apply a completion policy first");
    if (!check_well_formed(m).complete)
        throw PreconditionError("right machine is not completely specified; apply a completion policy first");
}

GlobalTrace to_trace(const AlphabetRef& alphabet, const std::vector<Step>& steps) {
    GlobalTrace trace;
    trace.alphabet = alphabet;
    trace.steps = steps;
    return trace;
}

/// Orders equal-length step sequences by (input, output tuple) per step.
bool steps_less(const std::vector<Step>& a, const std::vector<Step>& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
        if (a[i].input != b[i].input)
            return a[i].input < b[i].input;
        if (a[i].outputs != b[i].outputs)
            return a[i].outputs < b[i].outputs;
    }
    return a.size() < b.size();
}

// --- engine: enumerate + membership oracle --------------------------------

struct EnumerateSharedState {
    std::atomic<std::uint64_t> entries{0};
    std::atomic<int> best_fail_level{std::numeric_limits<int>::max()};
};

struct LevelFailure {
    int level = 0;
    std::vector<Step> steps;
};

/// Runs the levelled enumeration from one seed entry. Levels are explored in
/// order; within a level, the std::map key order (flattened steps) makes the
/// first failing entry the least one.
std::optional<LevelFailure> enumerate_subtree(
    const MultiPortFsm& n, const MultiPortFsm& m, int first_level, int k,
    std::vector<int> seed_label, std::vector<int> seed_states, const StrongCheckOptions& options,
    EnumerateSharedState& shared, SearchStats& stats) {
    const std::uint64_t budget = options.limits.effective_max_nodes();
    const int ports = n.alphabet().ports();

    std::map<std::vector<int>, std::vector<int>> level;
    level.emplace(std::move(seed_label), std::move(seed_states));

    std::unordered_map<std::vector<int>, bool, VecIntHash> class_memo;

    auto unflatten = [&](const std::vector<int>& label) {
        std::vector<Step> steps;
        steps.reserve(label.size() / (1 + ports));
        for (std::size_t at = 0; at < label.size(); at += 1 + ports) {
            Step step;
            step.input = label[at];
            step.outputs.assign(label.begin() + at + 1, label.begin() + at + 1 + ports);
            steps.push_back(std::move(step));
        }
        return steps;
    };

    for (int depth = first_level; depth <= k; ++depth) {
        if (depth > shared.best_fail_level.load())
            return std::nullopt; // a shorter failure exists elsewhere
        for (const auto& [label, states] : level) {
            stats.traces_enumerated += 1;
            GlobalTrace trace = to_trace(n.alphabet_ref(), unflatten(label));
            bool member;
            if (options.dedup_classes) {
                ClassKey key = class_key(trace);
                auto it = class_memo.find(key);
                if (it == class_memo.end()) {
                    MembershipResult answer = member_closure(trace, m, options.limits);
                    stats.classes_checked += 1;
                    stats.configurations_visited += answer.stats.configurations_visited;
                    it = class_memo.emplace(std::move(key), answer.member).first;
                }
                member = it->second;
            } else {
                MembershipResult answer = member_closure(trace, m, options.limits);
                stats.classes_checked += 1;
                stats.configurations_visited += answer.stats.configurations_visited;
                member = answer.member;
            }
            if (!member) {
                int prev = shared.best_fail_level.load();
                while (depth < prev && !shared.best_fail_level.compare_exchange_weak(prev, depth)) {
                }
                return LevelFailure{depth, trace.steps};
            }
        }
        if (depth == k)
            break;

        std::map<std::vector<int>, std::vector<int>> next;
        for (const auto& [label, states] : level) {
            for (int s : states) {
                for (const Transition& t : n.transitions_from(s)) {
                    std::vector<int> child = label;
                    child.push_back(t.input);
                    child.insert(child.end(), t.outputs.begin(), t.outputs.end());
                    auto [it, fresh] = next.try_emplace(std::move(child));
                    if (fresh && shared.entries.fetch_add(1) + 1 > budget)
                        throw ResourceError("bounded enumeration exceeded the node budget");
                    auto& targets = it->second;
                    if (!std::binary_search(targets.begin(), targets.end(), t.target))
                        targets.insert(std::upper_bound(targets.begin(), targets.end(), t.target),
                                       t.target);
                }
            }
        }
        level = std::move(next);
    }
    return std::nullopt;
}

Verdict strong_enumerate(const MultiPortFsm& n, const MultiPortFsm& m, int k,
                         const StrongCheckOptions& options) {
    Verdict verdict;
    EnumerateSharedState shared;

    if (!options.parallel) {
        auto failure = enumerate_subtree(n, m, 0, k, {}, {n.initial()}, options, shared, verdict.stats);
        verdict.pass = !failure.has_value();
        if (failure)
            verdict.counterexample = to_trace(n.alphabet_ref(), failure->steps);
        return verdict;
    }

    // The empty trace always passes; partition the rest by first step.
    verdict.stats.traces_enumerated += 1;
    std::map<std::vector<int>, std::vector<int>> seeds;
    for (const Transition& t : n.transitions_from(n.initial())) {
        std::vector<int> label{t.input};
        label.insert(label.end(), t.outputs.begin(), t.outputs.end());
        auto& targets = seeds[std::move(label)];
        if (!std::binary_search(targets.begin(), targets.end(), t.target))
            targets.insert(std::upper_bound(targets.begin(), targets.end(), t.target), t.target);
    }

    std::vector<std::future<std::optional<LevelFailure>>> futures;
    std::vector<SearchStats> worker_stats(seeds.size());
    std::size_t worker = 0;
    for (const auto& [label, states] : seeds) {
        futures.push_back(std::async(std::launch::async,
                                     [&, label = label, states = states, worker]() {
                                         return enumerate_subtree(n, m, 1, k, label, states, options,
                                                                  shared, worker_stats[worker]);
                                     }));
        ++worker;
    }

    std::optional<LevelFailure> best;
    std::optional<std::exception_ptr> error;
    for (auto& future : futures) {
        try {
            auto failure = future.get();
            if (failure && (!best || failure->level < best->level ||
                            (failure->level == best->level && steps_less(failure->steps, best->steps))))
                best = std::move(failure);
        } catch (...) {
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(*error);

    for (const SearchStats& s : worker_stats)
        verdict.stats.absorb(s);
    verdict.pass = !best.has_value();
    if (best)
        verdict.counterexample = to_trace(n.alphabet_ref(), best->steps);
    return verdict;
}

// --- engine: fused product search -----------------------------------------

/// Interning arenas for the fused search. One matching run of the right
/// machine (a "config") is its control state plus, per port, the word of
/// observation symbols the left trace has produced that the run has not yet
/// reproduced. Pending words, configs, and config sets all repeat massively
/// across product nodes, so each is stored exactly once and passed around as
/// a dense id; equality checks collapse to integer comparisons.
struct FusedArena {
    const MultiPortFsm& m;
    std::uint64_t budget;
    std::uint64_t created = 0;

    // Pending words; id 0 is the empty word.
    std::unordered_map<std::vector<int>, int, VecIntHash> word_ids;
    std::vector<const std::vector<int>*> words_by_id;

    // Config key: m-state followed by one pending-word id per port.
    std::unordered_map<std::vector<int>, int, VecIntHash> config_ids;
    std::vector<const std::vector<int>*> configs;
    std::vector<bool> config_drained;

    // Set key: n-state followed by the sorted config ids.
    std::unordered_map<std::vector<int>, int, VecIntHash> set_ids;
    std::vector<const std::vector<int>*> sets; // keys, indexed by id

    explicit FusedArena(const MultiPortFsm& machine, std::uint64_t max_nodes)
        : m(machine), budget(max_nodes) {
        intern_word({});
    }

    void charge() {
        if (++created > budget)
            throw ResourceError("fused search exceeded the node budget");
    }

    int intern_word(std::vector<int> word) {
        auto [it, fresh] = word_ids.try_emplace(std::move(word), 0);
        if (fresh) {
            it->second = static_cast<int>(words_by_id.size());
            words_by_id.push_back(&it->first);
        }
        return it->second;
    }

    const std::vector<int>& word(int id) const {
        return *words_by_id[static_cast<std::size_t>(id)];
    }

    int intern_config(std::vector<int> key) {
        auto [it, fresh] = config_ids.try_emplace(std::move(key), 0);
        if (fresh) {
            charge();
            it->second = static_cast<int>(configs.size());
            bool drained = true;
            for (std::size_t i = 1; i < it->first.size(); ++i)
                if (it->first[i] != 0)
                    drained = false;
            config_drained.push_back(drained);
            configs.push_back(&it->first);
        }
        return it->second;
    }

    int intern_set(int n_state, std::vector<int> sorted_config_ids) {
        std::vector<int> key;
        key.reserve(sorted_config_ids.size() + 1);
        key.push_back(n_state);
        key.insert(key.end(), sorted_config_ids.begin(), sorted_config_ids.end());
        auto [it, fresh] = set_ids.try_emplace(std::move(key), 0);
        if (fresh) {
            it->second = static_cast<int>(sets.size());
            sets.push_back(&it->first);
        }
        return it->second;
    }

    bool set_has_drained(int set_id) const {
        const std::vector<int>& key = *sets[set_id];
        for (std::size_t i = 1; i < key.size(); ++i)
            if (config_drained[static_cast<std::size_t>(key[i])])
                return true;
        return false;
    }
};

/// Fires every enabled transition of `m` until no run can consume further
/// pending symbols; returns the closure as sorted config ids.
std::vector<int> saturate(std::vector<int> seed_ids, FusedArena& arena) {
    const Alphabet& alphabet = arena.m.alphabet();
    std::set<int> closed(seed_ids.begin(), seed_ids.end());
    std::vector<int> work(closed.begin(), closed.end());

    while (!work.empty()) {
        int id = work.back();
        work.pop_back();
        // References into the arenas stay valid while they grow: ids point at
        // hash-map keys, whose addresses are stable.
        const std::vector<int>& cfg = *arena.configs[static_cast<std::size_t>(id)];
        for (const Transition& t : arena.m.transitions_from(cfg[0])) {
            int q = alphabet.port_of(t.input) - 1;
            const std::vector<int>& wq = arena.word(cfg[1 + q]);
            if (wq.empty() || wq.front() != t.input)
                continue;
            std::size_t take_q = 1;
            if (t.outputs[q] != kNullOutput) {
                if (wq.size() < 2 || wq[1] != t.outputs[q])
                    continue;
                take_q = 2;
            }
            bool enabled = true;
            for (int p = 0; p < alphabet.ports() && enabled; ++p) {
                if (p == q || t.outputs[p] == kNullOutput)
                    continue;
                const std::vector<int>& wp = arena.word(cfg[1 + p]);
                if (wp.empty() || wp.front() != t.outputs[p])
                    enabled = false;
            }
            if (!enabled)
                continue;

            std::vector<int> succ(cfg);
            succ[0] = t.target;
            succ[1 + q] = arena.intern_word(std::vector<int>(wq.begin() + take_q, wq.end()));
            for (int p = 0; p < alphabet.ports(); ++p) {
                if (p == q || t.outputs[p] == kNullOutput)
                    continue;
                const std::vector<int>& wp = arena.word(cfg[1 + p]);
                succ[1 + p] = arena.intern_word(std::vector<int>(wp.begin() + 1, wp.end()));
            }
            int succ_id = arena.intern_config(std::move(succ));
            if (closed.insert(succ_id).second)
                work.push_back(succ_id);
        }
    }
    return {closed.begin(), closed.end()};
}

Verdict strong_fused(const MultiPortFsm& n, const MultiPortFsm& m, int k,
                     const StrongCheckOptions& options) {
    Verdict verdict;
    const Alphabet& alphabet = *n.alphabet_ref();
    FusedArena arena(m, options.limits.effective_max_nodes());

    // Node of the levelled product search. Traces are reconstructed through
    // the parent links, so levels can drop everything except this skeleton.
    struct Node {
        int set_id;
        int parent; // index into the previous level, -1 at the root
        Step step;  // the left-machine step that created this node
    };

    // Left-machine transitions reordered by (input, outputs, target): nodes
    // are created in lexicographic trace order, so within a level the first
    // node carrying a given set id owns the minimal trace to it.
    std::vector<std::vector<Transition>> ordered(static_cast<std::size_t>(n.num_states()));
    for (int s = 0; s < n.num_states(); ++s) {
        ordered[static_cast<std::size_t>(s)] = n.transitions_from(s);
        std::sort(ordered[static_cast<std::size_t>(s)].begin(),
                  ordered[static_cast<std::size_t>(s)].end(),
                  [](const Transition& a, const Transition& b) {
                      if (a.input != b.input)
                          return a.input < b.input;
                      if (a.outputs != b.outputs)
                          return a.outputs < b.outputs;
                      return a.target < b.target;
                  });
    }

    // Start config: m at its initial state with nothing pending (word id 0).
    std::vector<int> start(static_cast<std::size_t>(1 + alphabet.ports()), 0);
    start[0] = m.initial();
    int start_id = arena.intern_config(std::move(start));
    int root_set = arena.intern_set(n.initial(), saturate({start_id}, arena));

    std::vector<std::vector<Node>> history;
    history.push_back({Node{root_set, -1, {}}});
    std::unordered_set<int> expanded{root_set};

    auto rebuild_trace = [&](int depth, int index) {
        std::vector<Step> steps(static_cast<std::size_t>(depth));
        for (int d = depth; d > 0; --d) {
            const Node& node = history[static_cast<std::size_t>(d)][static_cast<std::size_t>(index)];
            steps[static_cast<std::size_t>(d - 1)] = node.step;
            index = node.parent;
        }
        return to_trace(n.alphabet_ref(), steps);
    };

    for (int depth = 0; depth <= k; ++depth) {
        std::vector<Node>& level = history.back();
        verdict.stats.product_nodes += level.size();

        // Nodes sit in trace order, so the first unmatched one is minimal.
        for (std::size_t i = 0; i < level.size(); ++i) {
            if (!arena.set_has_drained(level[i].set_id)) {
                verdict.pass = false;
                verdict.counterexample = rebuild_trace(depth, static_cast<int>(i));
                return verdict;
            }
        }
        if (depth == k)
            break;

        std::vector<Node> next;
        for (std::size_t i = 0; i < level.size(); ++i) {
            const std::vector<int>& key = *arena.sets[static_cast<std::size_t>(level[i].set_id)];
            for (const Transition& t : ordered[static_cast<std::size_t>(key[0])]) {
                // Append the step's events to every matching run, then close.
                std::vector<int> extended;
                extended.reserve(key.size() - 1);
                int q = alphabet.port_of(t.input) - 1;
                for (std::size_t ci = 1; ci < key.size(); ++ci) {
                    const std::vector<int>& cfg = *arena.configs[static_cast<std::size_t>(key[ci])];
                    std::vector<int> succ(cfg);
                    std::vector<int> grown(arena.word(cfg[1 + q]));
                    grown.push_back(t.input);
                    if (t.outputs[q] != kNullOutput)
                        grown.push_back(t.outputs[q]);
                    succ[1 + q] = arena.intern_word(std::move(grown));
                    for (int p = 0; p < alphabet.ports(); ++p) {
                        if (p == q || t.outputs[p] == kNullOutput)
                            continue;
                        std::vector<int> grown_p(arena.word(cfg[1 + p]));
                        grown_p.push_back(t.outputs[p]);
                        succ[1 + p] = arena.intern_word(std::move(grown_p));
                    }
                    extended.push_back(arena.intern_config(std::move(succ)));
                }
                std::sort(extended.begin(), extended.end());
                extended.erase(std::unique(extended.begin(), extended.end()), extended.end());
                int child = arena.intern_set(t.target, saturate(std::move(extended), arena));
                // Sets already seen — at an earlier depth or earlier in this
                // level — were reached by an equal-or-shorter trace; skip.
                if (!expanded.insert(child).second)
                    continue;
                arena.charge();
                next.push_back(Node{child, static_cast<int>(i), Step{t.input, t.outputs}});
            }
        }
        history.push_back(std::move(next));
    }

    verdict.pass = true;
    return verdict;
}

} // namespace

// --- projection automaton ---------------------------------------------------

ProjectionAutomaton::ProjectionAutomaton(const MultiPortFsm& m, int port)
    : port_(port), num_fsm_states_(m.num_states()), initial_(m.initial()) {
    const Alphabet& alphabet = m.alphabet();
    if (port < 1 || port > alphabet.ports())
        throw UsageError("port " + std::to_string(port) + " out of range 1.." +
                         std::to_string(alphabet.ports()));

    edges_.resize(num_fsm_states_);
    for (int s = 0; s < m.num_states(); ++s) {
        for (const Transition& t : m.transitions_from(s)) {
            bool input_here = alphabet.port_of(t.input) == port;
            int out = t.outputs[port - 1];
            if (input_here && out == kNullOutput) {
                edges_[s].emplace_back(t.input, t.target);
            } else if (input_here) {
                int mid = static_cast<int>(edges_.size());
                edges_.emplace_back();
                edges_[s].emplace_back(t.input, mid);
                edges_[mid].emplace_back(out, t.target);
            } else if (out != kNullOutput) {
                edges_[s].emplace_back(out, t.target);
            } else {
                edges_[s].emplace_back(kTau, t.target);
            }
        }
    }
    for (auto& list : edges_)
        std::sort(list.begin(), list.end());
}

std::vector<int> ProjectionAutomaton::closure(const std::vector<int>& states) const {
    std::vector<bool> seen(num_states(), false);
    std::vector<int> stack = states;
    for (int s : states)
        seen[s] = true;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (const auto& [symbol, target] : edges_[s]) {
            if (symbol != kTau)
                break; // sorted: silent moves first
            if (!seen[target]) {
                seen[target] = true;
                stack.push_back(target);
            }
        }
    }
    std::vector<int> result;
    for (int s = 0; s < num_states(); ++s)
        if (seen[s])
            result.push_back(s);
    return result;
}

std::vector<int> ProjectionAutomaton::step(const std::vector<int>& states, int symbol) const {
    std::vector<int> reachable = closure(states);
    std::vector<bool> seen(num_states(), false);
    std::vector<int> result;
    for (int s : reachable)
        for (const auto& [label, target] : edges_[s])
            if (label == symbol && !seen[target]) {
                seen[target] = true;
                result.push_back(target);
            }
    std::sort(result.begin(), result.end());
    return result;
}

bool ProjectionAutomaton::accepts(const std::vector<int>& word) const {
    std::vector<int> current = start();
    for (int symbol : word) {
        current = step(current, symbol);
        if (current.empty())
            return false;
    }
    return true;
}

// --- checks -----------------------------------------------------------------

WeakVerdict check_weak(const MultiPortFsm& n, const MultiPortFsm& m) {
    require_comparable(n, m);
    const Alphabet& alphabet = n.alphabet();

    WeakVerdict verdict;
    verdict.pass = true;
    for (int port = 1; port <= alphabet.ports(); ++port) {
        ProjectionAutomaton pa_n{n, port};
        ProjectionAutomaton pa_m{m, port};

        std::vector<int> symbols = alphabet.inputs_at(port);
        const auto& outputs = alphabet.outputs_at(port);
        symbols.insert(symbols.end(), outputs.begin(), outputs.end());

        struct ProductNode {
            std::vector<int> left;
            std::vector<int> right;
            std::int64_t parent;
            int symbol;
        };
        std::vector<ProductNode> nodes;
        std::unordered_set<std::vector<int>, VecIntHash> seen;

        auto encode = [](const std::vector<int>& left, const std::vector<int>& right) {
            std::vector<int> flat = left;
            flat.push_back(-2);
            flat.insert(flat.end(), right.begin(), right.end());
            return flat;
        };

        nodes.push_back({pa_n.start(), pa_m.start(), -1, 0});
        seen.insert(encode(nodes[0].left, nodes[0].right));

        WeakVerdict::PortFinding finding;
        finding.port = port;
        finding.pass = true;

        for (std::size_t head = 0; head < nodes.size() && finding.pass; ++head) {
            for (int symbol : symbols) {
                std::vector<int> left = pa_n.step(nodes[head].left, symbol);
                if (left.empty())
                    continue;
                std::vector<int> right = pa_m.step(nodes[head].right, symbol);
                if (right.empty()) {
                    finding.pass = false;
                    std::vector<int> word{symbol};
                    for (std::int64_t at = static_cast<std::int64_t>(head); nodes[at].parent >= 0;
                         at = nodes[at].parent)
                        word.push_back(nodes[at].symbol);
                    std::reverse(word.begin(), word.end());
                    finding.missing_word = std::move(word);
                    break;
                }
                std::vector<int> key = encode(left, right);
                if (seen.insert(std::move(key)).second)
                    nodes.push_back({std::move(left), std::move(right),
                                     static_cast<std::int64_t>(head), symbol});
            }
        }

        verdict.pass = verdict.pass && finding.pass;
        verdict.ports.push_back(std::move(finding));
    }
    return verdict;
}

Verdict check_strong_bounded(const MultiPortFsm& n, const MultiPortFsm& m, int k,
                             const StrongCheckOptions& options) {
    require_comparable(n, m);
    if (k < 0)
        throw UsageError("negative step bound");
    if (options.engine == StrongEngine::enumerate || options.parallel)
        return strong_enumerate(n, m, k, options);
    return strong_fused(n, m, k, options);
}

Verdict check_strong_all_output_case(const MultiPortFsm& n, const MultiPortFsm& m) {
    require_comparable(n, m);

    for (int s = 0; s < m.num_states(); ++s)
        for (const Transition& t : m.transitions_from(s))
            for (int out : t.outputs)
                if (out == kNullOutput)
                    throw PreconditionError(
                        "right machine must produce an output at every port on every transition");

    Verdict verdict;

    // A left transition with a silent slot can never be matched: any
    // observationally equal trace of the right machine has one output more
    // at that port. Report the shortest path reaching such a transition.
    {
        struct PathNode {
            int state;
            std::int64_t parent;
            const Transition* via;
        };
        std::vector<PathNode> nodes{{n.initial(), -1, nullptr}};
        std::vector<bool> discovered(n.num_states(), false);
        discovered[n.initial()] = true;
        for (std::size_t head = 0; head < nodes.size(); ++head) {
            const Transition* offending = nullptr;
            for (const Transition& t : n.transitions_from(nodes[head].state)) {
                bool silent_slot = false;
                for (int out : t.outputs)
                    silent_slot = silent_slot || out == kNullOutput;
                if (!silent_slot)
                    continue;
                if (offending == nullptr || t.input < offending->input ||
                    (t.input == offending->input && t.outputs < offending->outputs))
                    offending = &t;
            }
            if (offending != nullptr) {
                std::vector<Step> steps{Step{offending->input, offending->outputs}};
                for (std::int64_t at = static_cast<std::int64_t>(head); nodes[at].via != nullptr;
                     at = nodes[at].parent)
                    steps.push_back(Step{nodes[at].via->input, nodes[at].via->outputs});
                std::reverse(steps.begin(), steps.end());
                verdict.pass = false;
                verdict.counterexample = to_trace(n.alphabet_ref(), steps);
                return verdict;
            }
            for (const Transition& t : n.transitions_from(nodes[head].state))
                if (!discovered[t.target]) {
                    discovered[t.target] = true;
                    nodes.push_back({t.target, static_cast<std::int64_t>(head), &t});
                }
        }
    }

    // Both machines emit everywhere, so equal observations mean equal step
    // sequences: decide plain language inclusion over full step labels.
    struct SubsetNode {
        int n_state;
        std::vector<int> m_states;
        std::int64_t parent;
        const Transition* via;
    };
    std::vector<SubsetNode> nodes{{n.initial(), {m.initial()}, -1, nullptr}};
    std::unordered_set<std::vector<int>, VecIntHash> seen;
    {
        std::vector<int> key{n.initial(), -2, m.initial()};
        seen.insert(std::move(key));
    }

    for (std::size_t head = 0; head < nodes.size(); ++head) {
        verdict.stats.product_nodes += 1;
        const Transition* failing = nullptr;
        for (const Transition& t : n.transitions_from(nodes[head].n_state)) {
            std::vector<int> successors;
            for (int ms : nodes[head].m_states)
                for (const Transition& mt : m.transitions_from(ms))
                    if (mt.input == t.input && mt.outputs == t.outputs &&
                        !std::binary_search(successors.begin(), successors.end(), mt.target))
                        successors.insert(
                            std::upper_bound(successors.begin(), successors.end(), mt.target),
                            mt.target);
            if (successors.empty()) {
                if (failing == nullptr || t.input < failing->input ||
                    (t.input == failing->input && t.outputs < failing->outputs))
                    failing = &t;
                continue;
            }
            std::vector<int> key{t.target, -2};
            key.insert(key.end(), successors.begin(), successors.end());
            if (seen.insert(std::move(key)).second)
                nodes.push_back({t.target, std::move(successors),
                                 static_cast<std::int64_t>(head), &t});
        }
        if (failing != nullptr) {
            std::vector<Step> steps{Step{failing->input, failing->outputs}};
            for (std::int64_t at = static_cast<std::int64_t>(head); nodes[at].via != nullptr;
                 at = nodes[at].parent)
                steps.push_back(Step{nodes[at].via->input, nodes[at].via->outputs});
            std::reverse(steps.begin(), steps.end());
            verdict.pass = false;
            verdict.counterexample = to_trace(n.alphabet_ref(), steps);
            return verdict;
        }
    }

    verdict.pass = true;
    return verdict;
}

Verdict check_parikh_case_bounded(const MultiPortFsm& n, const MultiPortFsm& m, int bound,
                                  const StrongCheckOptions& options) {
    require_comparable(n, m);
    if (bound < 0)
        throw UsageError("negative step bound");
    const Alphabet& alphabet = n.alphabet();
    for (int p = 1; p <= alphabet.ports(); ++p)
        if (alphabet.inputs_at(p).size() + alphabet.outputs_at(p).size() > 1)
            throw PreconditionError("port " + std::to_string(p) +
                                    " observes more than one symbol; count vectors cannot "
                                    "represent observation classes");

    const std::uint64_t budget = options.limits.effective_max_nodes();
    std::uint64_t entries = 0;
    Verdict verdict;

    // Observation classes are symbol-count vectors; traces with equal counts
    // have equal step counts, so the levels can be compared in lockstep.
    struct LeftEntry {
        std::vector<int> counts;
        std::vector<Step> min_trace;
    };
    auto count_key = [&](int state, const std::vector<int>& counts) {
        std::vector<int> key{state};
        key.insert(key.end(), counts.begin(), counts.end());
        return key;
    };

    std::unordered_map<std::vector<int>, LeftEntry, VecIntHash> left_level;
    left_level.emplace(count_key(n.initial(), std::vector<int>(alphabet.num_symbols(), 0)),
                       LeftEntry{std::vector<int>(alphabet.num_symbols(), 0), {}});
    std::unordered_set<std::vector<int>, VecIntHash> right_level;
    right_level.insert(count_key(m.initial(), std::vector<int>(alphabet.num_symbols(), 0)));

    auto advance_counts = [](std::vector<int> counts, const Transition& t) {
        counts[t.input] += 1;
        for (int out : t.outputs)
            if (out != kNullOutput)
                counts[out] += 1;
        return counts;
    };

    for (int depth = 0; depth <= bound; ++depth) {
        std::unordered_set<std::vector<int>, VecIntHash> right_vectors;
        for (const auto& key : right_level)
            right_vectors.insert(std::vector<int>(key.begin() + 1, key.end()));

        const LeftEntry* worst = nullptr;
        for (const auto& [key, entry] : left_level) {
            verdict.stats.traces_enumerated += 1;
            if (!right_vectors.contains(entry.counts) &&
                (worst == nullptr || steps_less(entry.min_trace, worst->min_trace)))
                worst = &entry;
        }
        if (worst != nullptr) {
            verdict.pass = false;
            verdict.counterexample = to_trace(n.alphabet_ref(), worst->min_trace);
            return verdict;
        }
        if (depth == bound)
            break;

        std::unordered_map<std::vector<int>, LeftEntry, VecIntHash> next_left;
        for (const auto& [key, entry] : left_level) {
            int state = key[0];
            for (const Transition& t : n.transitions_from(state)) {
                std::vector<int> counts = advance_counts(entry.counts, t);
                std::vector<Step> trace = entry.min_trace;
                trace.push_back(Step{t.input, t.outputs});
                std::vector<int> child_key = count_key(t.target, counts);
                auto it = next_left.find(child_key);
                if (it == next_left.end()) {
                    if (++entries > budget)
                        throw ResourceError("count-vector search exceeded the node budget");
                    next_left.emplace(std::move(child_key),
                                      LeftEntry{std::move(counts), std::move(trace)});
                } else if (steps_less(trace, it->second.min_trace)) {
                    it->second.min_trace = std::move(trace);
                }
            }
        }
        std::unordered_set<std::vector<int>, VecIntHash> next_right;
        for (const auto& key : right_level) {
            int state = key[0];
            std::vector<int> counts(key.begin() + 1, key.end());
            for (const Transition& t : m.transitions_from(state)) {
                if (++entries > budget)
                    throw ResourceError("count-vector search exceeded the node budget");
                next_right.insert(count_key(t.target, advance_counts(counts, t)));
            }
        }
        left_level = std::move(next_left);
        right_level = std::move(next_right);
    }

    verdict.pass = true;
    return verdict;
}

DistinguishReport distinguishable_bounded(const MultiPortFsm& n, const MultiPortFsm& m, int k,
                                          const StrongCheckOptions& options) {
    DistinguishReport report;
    report.n_from_m = check_strong_bounded(n, m, k, options);
    report.m_from_n = check_strong_bounded(m, n, k, options);
    return report;
}

} // namespace mpfsm
