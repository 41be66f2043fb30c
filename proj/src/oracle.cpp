#include "mpfsm/oracle.hpp"

#include <cstdlib>
#include <deque>
#include <limits>
#include <unordered_map>

#include "mpfsm/errors.hpp"

namespace mpfsm {

std::uint64_t SearchLimits::effective_max_nodes() const {
    if (max_nodes != 0)
        return max_nodes;
    static const std::uint64_t from_env = [] {
        if (const char* text = std::getenv("MPFSM_BUDGET")) {
            char* end = nullptr;
            unsigned long long value = std::strtoull(text, &end, 10);
            if (end != text && value > 0)
                return static_cast<std::uint64_t>(value);
        }
        return std::uint64_t{50'000'000};
    }();
    return from_env;
}

namespace {

struct CursorSearch {
    const MultiPortFsm& machine;
    std::vector<std::vector<int>> words; // projection per port
    std::vector<std::uint64_t> radix;    // mixed-radix weights: state, then cursors
    std::uint64_t bound = 0;

    explicit CursorSearch(const GlobalTrace& sigma, const MultiPortFsm& m) : machine(m) {
        int ports = m.alphabet().ports();
        words.reserve(ports);
        for (int p = 1; p <= ports; ++p)
            words.push_back(project(sigma, p));

        radix.assign(ports + 1, 0);
        std::uint64_t weight = 1;
        radix[0] = 1; // state dimension has weight 1
        bound = static_cast<std::uint64_t>(m.num_states());
        weight = bound;
        for (int p = 0; p < ports; ++p) {
            radix[p + 1] = weight;
            std::uint64_t dim = words[p].size() + 1;
            if (weight > std::numeric_limits<std::uint64_t>::max() / dim)
                throw ResourceError("configuration space too large to index");
            weight *= dim;
            bound = weight;
        }
    }

    std::uint64_t encode(int state, const std::vector<int>& cursors) const {
        std::uint64_t code = static_cast<std::uint64_t>(state);
        for (std::size_t p = 0; p < cursors.size(); ++p)
            code += radix[p + 1] * static_cast<std::uint64_t>(cursors[p]);
        return code;
    }

    void decode(std::uint64_t code, int& state, std::vector<int>& cursors) const {
        state = static_cast<int>(code % static_cast<std::uint64_t>(machine.num_states()));
        code /= static_cast<std::uint64_t>(machine.num_states());
        for (std::size_t p = 0; p < words.size(); ++p) {
            std::uint64_t dim = words[p].size() + 1;
            cursors[p] = static_cast<int>(code % dim);
            code /= dim;
        }
    }

    bool done(const std::vector<int>& cursors) const {
        for (std::size_t p = 0; p < words.size(); ++p)
            if (cursors[p] != static_cast<int>(words[p].size()))
                return false;
        return true;
    }

    /// True if the transition can consume the next projection symbols; fills
    /// the advanced cursor vector on success.
    bool enabled(const Transition& t, const std::vector<int>& cursors, std::vector<int>& next) const {
        const Alphabet& alphabet = machine.alphabet();
        int q = alphabet.port_of(t.input) - 1;
        const auto& word_q = words[q];
        int c = cursors[q];
        if (c >= static_cast<int>(word_q.size()) || word_q[c] != t.input)
            return false;
        int advance_q = 1;
        if (t.outputs[q] != kNullOutput) {
            if (c + 1 >= static_cast<int>(word_q.size()) || word_q[c + 1] != t.outputs[q])
                return false;
            advance_q = 2;
        }
        next = cursors;
        next[q] = c + advance_q;
        for (std::size_t p = 0; p < words.size(); ++p) {
            if (static_cast<int>(p) == q || t.outputs[p] == kNullOutput)
                continue;
            int cp = cursors[p];
            if (cp >= static_cast<int>(words[p].size()) || words[p][cp] != t.outputs[p])
                return false;
            next[p] = cp + 1;
        }
        return true;
    }
};

} // namespace

MembershipResult member_closure(const GlobalTrace& sigma, const MultiPortFsm& m,
                                const SearchLimits& limits) {
    require_same_alphabet(sigma.alphabet, m.alphabet_ref());
    MembershipResult result;
    CursorSearch search{sigma, m};
    result.stats.configuration_bound = search.bound;

    const std::uint64_t budget = limits.effective_max_nodes();
    int ports = m.alphabet().ports();

    // Per discovered configuration: code, predecessor index, fired transition.
    std::vector<std::uint64_t> codes;
    std::vector<std::int64_t> pred;
    std::vector<const Transition*> via;
    std::unordered_map<std::uint64_t, std::size_t> seen;

    std::vector<int> start_cursors(ports, 0);
    std::uint64_t start = search.encode(m.initial(), start_cursors);
    codes.push_back(start);
    pred.push_back(-1);
    via.push_back(nullptr);
    seen.emplace(start, 0);

    std::optional<std::size_t> accepted;
    if (search.done(start_cursors))
        accepted = 0;

    std::vector<int> cursors(ports), next(ports);
    for (std::size_t head = 0; head < codes.size() && !accepted; ++head) {
        int state = 0;
        search.decode(codes[head], state, cursors);
        for (const Transition& t : m.transitions_from(state)) {
            if (!search.enabled(t, cursors, next))
                continue;
            std::uint64_t code = search.encode(t.target, next);
            if (!seen.emplace(code, codes.size()).second)
                continue;
            if (codes.size() >= budget)
                throw ResourceError("membership search exceeded the node budget");
            codes.push_back(code);
            pred.push_back(static_cast<std::int64_t>(head));
            via.push_back(&t);
            if (search.done(next)) {
                accepted = codes.size() - 1;
                break;
            }
        }
    }

    result.stats.configurations_visited = codes.size();
    if (!accepted)
        return result;

    result.member = true;
    std::vector<const Transition*> path;
    for (std::size_t at = *accepted; via[at] != nullptr; at = static_cast<std::size_t>(pred[at]))
        path.push_back(via[at]);

    GlobalTrace witness;
    witness.alphabet = m.alphabet_ref();
    for (auto it = path.rbegin(); it != path.rend(); ++it)
        witness.steps.push_back(Step{(*it)->input, (*it)->outputs});
    int end_state = 0;
    search.decode(codes[*accepted], end_state, cursors);
    result.witness = std::move(witness);
    result.witness_end_state = end_state;
    return result;
}

bool member_closure_bruteforce(const GlobalTrace& sigma, const MultiPortFsm& m,
                               const SearchLimits& limits) {
    require_same_alphabet(sigma.alphabet, m.alphabet_ref());
    const ClassKey wanted = class_key(sigma);
    const std::uint64_t budget = limits.effective_max_nodes();
    std::uint64_t paths = 0;

    GlobalTrace candidate;
    candidate.alphabet = m.alphabet_ref();

    auto walk = [&](auto&& self, int state, std::size_t depth) -> bool {
        if (depth == sigma.steps.size()) {
            if (++paths > budget)
                throw ResourceError("reference enumeration exceeded the node budget");
            return class_key(candidate) == wanted;
        }
        for (const Transition& t : m.transitions_from(state)) {
            candidate.steps.push_back(Step{t.input, t.outputs});
            bool found = self(self, t.target, depth + 1);
            candidate.steps.pop_back();
            if (found)
                return true;
        }
        return false;
    };
    return walk(walk, m.initial(), 0);
}

PrefixClosureResult member_pc(const GlobalTrace& sigma, const MultiPortFsm& m,
                              const SearchLimits& limits) {
    PrefixClosureResult result;
    for (std::size_t len = 0; len <= sigma.steps.size(); ++len) {
        MembershipResult step = member_closure(sigma.prefix(len), m, limits);
        result.stats.absorb(step.stats);
        if (!step.member) {
            result.member = false;
            result.failing_prefix_len = len;
            return result;
        }
        result.prefix_end_states.push_back(*step.witness_end_state);
        result.prefix_witnesses.push_back(std::move(*step.witness));
    }
    result.member = true;
    return result;
}

} // namespace mpfsm
