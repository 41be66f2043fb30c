#include "mpfsm/multitape.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

#include "mpfsm/errors.hpp"

namespace mpfsm {

namespace {

void validate_tuple(const MultiTapeFa& a, const TapeTuple& t) {
    require_same_tape_alphabet(a.alphabet_ref(), t.alphabet);
    const TapeAlphabet& alpha = a.alphabet();
    if (static_cast<int>(t.words.size()) != alpha.tapes())
        throw UsageError("tuple arity does not match the alphabet's tape count");
    for (std::size_t i = 0; i < t.words.size(); ++i)
        for (int sym : t.words[i]) {
            if (sym < 0 || sym >= alpha.num_symbols())
                throw UsageError("tuple contains an unknown symbol id");
            if (alpha.tape_of(sym) != static_cast<int>(i) + 1)
                throw UsageError("tuple word for tape " + std::to_string(i + 1) +
                                 " contains symbol '" + alpha.name(sym) +
                                 "' of tape " + std::to_string(alpha.tape_of(sym)));
        }
}

} // namespace

TapeAlphabet::TapeAlphabet(std::vector<std::vector<std::string>> per_tape) {
    if (per_tape.empty())
        throw UsageError("a tape alphabet needs at least one tape");
    first_id_.push_back(0);
    for (const auto& tape : per_tape) {
        int t = static_cast<int>(first_id_.size());
        for (const auto& name : tape) {
            if (!valid_symbol_name(name))
                throw UsageError("invalid symbol name '" + name + "'");
            for (const auto& seen : names_)
                if (seen == name)
                    throw UsageError("duplicate symbol '" + name + "'");
            names_.push_back(name);
            tape_of_.push_back(t);
        }
        first_id_.push_back(static_cast<int>(names_.size()));
    }
}

std::vector<int> TapeAlphabet::symbols_at(int tape) const {
    if (tape < 1 || tape > tapes())
        throw UsageError("tape index out of range: " + std::to_string(tape));
    std::vector<int> ids;
    for (int s = first_id_[tape - 1]; s < first_id_[tape]; ++s) ids.push_back(s);
    return ids;
}

std::optional<int> TapeAlphabet::find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

int TapeAlphabet::require(const std::string& name) const {
    if (auto id = find(name)) return *id;
    throw UsageError("unknown symbol '" + name + "'");
}

bool TapeAlphabet::operator==(const TapeAlphabet& other) const {
    return names_ == other.names_ && tape_of_ == other.tape_of_ && first_id_ == other.first_id_;
}

void require_same_tape_alphabet(const TapeAlphabetRef& a, const TapeAlphabetRef& b) {
    if (!a || !b)
        throw UsageError("operand is missing its alphabet");
    if (a == b) return;
    if (!(*a == *b))
        throw UsageError("operands declare different alphabets");
}

std::size_t TapeTuple::total_length() const {
    std::size_t n = 0;
    for (const auto& w : words) n += w.size();
    return n;
}

bool TapeTuple::operator==(const TapeTuple& other) const {
    if (words != other.words) return false;
    if (alphabet == other.alphabet) return true;
    return alphabet && other.alphabet && *alphabet == *other.alphabet;
}

std::optional<int> MultiTapeFa::find_state(const std::string& name) const {
    for (std::size_t i = 0; i < state_names_.size(); ++i)
        if (state_names_[i] == name) return static_cast<int>(i);
    return std::nullopt;
}

std::size_t MultiTapeFa::num_transitions() const {
    std::size_t n = 0;
    for (const auto& list : transitions_) n += list.size();
    return n;
}

bool MultiTapeFa::operator==(const MultiTapeFa& other) const {
    return *alphabet_ == *other.alphabet_ && state_names_ == other.state_names_ &&
           initial_ == other.initial_ && transitions_ == other.transitions_;
}

MtfaBuilder::MtfaBuilder(TapeAlphabetRef alphabet) : alphabet_(std::move(alphabet)) {
    if (!alphabet_)
        throw UsageError("automaton alphabet must not be null");
}

MtfaBuilder& MtfaBuilder::state(const std::string& name) {
    if (!valid_symbol_name(name))
        throw UsageError("invalid state name '" + name + "'");
    for (const auto& seen : states_)
        if (seen == name)
            throw UsageError("duplicate state '" + name + "'");
    states_.push_back(name);
    return *this;
}

MtfaBuilder& MtfaBuilder::initial(const std::string& name) {
    initial_ = name;
    return *this;
}

MtfaBuilder& MtfaBuilder::transition(const std::string& src, const std::string& symbol,
                                     const std::string& dst) {
    transitions_.emplace_back(src, symbol, dst);
    return *this;
}

MultiTapeFa MtfaBuilder::build() {
    if (states_.empty())
        throw UsageError("automaton declares no states");
    if (!initial_)
        throw UsageError("automaton declares no initial state");

    MultiTapeFa fa;
    fa.alphabet_ = alphabet_;
    fa.state_names_ = states_;
    fa.transitions_.assign(states_.size(), {});

    auto state_id = [&](const std::string& name) {
        if (auto id = fa.find_state(name)) return *id;
        throw UsageError("unknown state '" + name + "'");
    };
    fa.initial_ = state_id(*initial_);

    for (const auto& [src, symbol, dst] : transitions_) {
        int s = state_id(src);
        int sym = alphabet_->require(symbol);
        int d = state_id(dst);
        fa.transitions_[s].emplace_back(sym, d);
    }
    for (auto& list : fa.transitions_) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return fa;
}

TupleAcceptance accepts_tuple(const MultiTapeFa& a, const TapeTuple& t,
                              const SearchLimits& limits) {
    validate_tuple(a, t);
    const std::uint64_t budget = limits.effective_max_nodes();
    const int tapes = a.alphabet().tapes();
    const int num_states = a.num_states();

    // Mixed-radix code over (state, cursor vector); also the visited bound.
    std::uint64_t span = static_cast<std::uint64_t>(num_states);
    for (const auto& w : t.words) {
        std::uint64_t radix = w.size() + 1;
        if (span > std::numeric_limits<std::uint64_t>::max() / radix)
            throw ResourceError("configuration space too large to index");
        span *= radix;
    }

    TupleAcceptance result;
    result.stats.configuration_bound = span;

    struct Config {
        int state;
        std::vector<int> cursors;
    };
    auto encode = [&](const Config& c) {
        std::uint64_t code = static_cast<std::uint64_t>(c.state);
        std::uint64_t mult = static_cast<std::uint64_t>(num_states);
        for (int i = 0; i < tapes; ++i) {
            code += mult * static_cast<std::uint64_t>(c.cursors[i]);
            mult *= static_cast<std::uint64_t>(t.words[i].size() + 1);
        }
        return code;
    };
    auto exhausted = [&](const Config& c) {
        for (int i = 0; i < tapes; ++i)
            if (c.cursors[i] != static_cast<int>(t.words[i].size())) return false;
        return true;
    };

    std::deque<Config> queue;
    std::unordered_set<std::uint64_t> visited;
    Config start{a.initial(), std::vector<int>(tapes, 0)};
    visited.insert(encode(start));
    queue.push_back(std::move(start));

    while (!queue.empty()) {
        Config cur = std::move(queue.front());
        queue.pop_front();
        if (exhausted(cur)) {
            result.accepted = true;
            break;
        }
        for (const auto& [sym, target] : a.transitions_from(cur.state)) {
            int tape = a.alphabet().tape_of(sym) - 1;
            int pos = cur.cursors[tape];
            if (pos >= static_cast<int>(t.words[tape].size())) continue;
            if (t.words[tape][pos] != sym) continue;
            Config next{target, cur.cursors};
            ++next.cursors[tape];
            if (visited.insert(encode(next)).second) {
                if (visited.size() > budget)
                    throw ResourceError("tuple acceptance search exceeded the configured budget");
                queue.push_back(std::move(next));
            }
        }
    }
    result.stats.configurations_visited = visited.size();
    return result;
}

MultiTapeFa fa_union(const MultiTapeFa& a, const MultiTapeFa& b) {
    require_same_tape_alphabet(a.alphabet_ref(), b.alphabet_ref());
    MtfaBuilder builder(a.alphabet_ref());
    builder.state("u0");
    for (int s = 0; s < a.num_states(); ++s) builder.state("l_" + a.state_name(s));
    for (int s = 0; s < b.num_states(); ++s) builder.state("r_" + b.state_name(s));
    builder.initial("u0");

    const TapeAlphabet& alpha = a.alphabet();
    for (int s = 0; s < a.num_states(); ++s)
        for (const auto& [sym, tgt] : a.transitions_from(s))
            builder.transition("l_" + a.state_name(s), alpha.name(sym), "l_" + a.state_name(tgt));
    for (int s = 0; s < b.num_states(); ++s)
        for (const auto& [sym, tgt] : b.transitions_from(s))
            builder.transition("r_" + b.state_name(s), alpha.name(sym), "r_" + b.state_name(tgt));
    // The fresh initial behaves like both original initials at once.
    for (const auto& [sym, tgt] : a.transitions_from(a.initial()))
        builder.transition("u0", alpha.name(sym), "l_" + a.state_name(tgt));
    for (const auto& [sym, tgt] : b.transitions_from(b.initial()))
        builder.transition("u0", alpha.name(sym), "r_" + b.state_name(tgt));
    return builder.build();
}

MultiTapeFa fa_concat(const MultiTapeFa& a, const MultiTapeFa& b) {
    require_same_tape_alphabet(a.alphabet_ref(), b.alphabet_ref());
    MtfaBuilder builder(a.alphabet_ref());
    for (int s = 0; s < a.num_states(); ++s) builder.state("l_" + a.state_name(s));
    for (int s = 0; s < b.num_states(); ++s) builder.state("r_" + b.state_name(s));
    builder.initial("l_" + a.state_name(a.initial()));

    const TapeAlphabet& alpha = a.alphabet();
    const std::string b_init = "r_" + b.state_name(b.initial());
    for (int s = 0; s < a.num_states(); ++s)
        for (const auto& [sym, tgt] : a.transitions_from(s)) {
            builder.transition("l_" + a.state_name(s), alpha.name(sym), "l_" + a.state_name(tgt));
            // Any step of the left part may be its last; hand over to the
            // right part on the same symbol.
            builder.transition("l_" + a.state_name(s), alpha.name(sym), b_init);
        }
    for (int s = 0; s < b.num_states(); ++s)
        for (const auto& [sym, tgt] : b.transitions_from(s))
            builder.transition("r_" + b.state_name(s), alpha.name(sym), "r_" + b.state_name(tgt));
    // An empty left word hands over before consuming anything.
    for (const auto& [sym, tgt] : b.transitions_from(b.initial()))
        builder.transition("l_" + a.state_name(a.initial()), alpha.name(sym),
                           "r_" + b.state_name(tgt));
    return builder.build();
}

MultiPortFsm embed_fsm(const MultiTapeFa& a) {
    const TapeAlphabet& alpha = a.alphabet();
    const int tapes = alpha.tapes();
    const int verdict_port = tapes + 1;

    FsmBuilder builder(verdict_port);
    for (int t = 1; t <= tapes; ++t)
        for (int sym : alpha.symbols_at(t)) builder.input(t, alpha.name(sym));
    builder.output(verdict_port, "0");
    builder.output(verdict_port, "1");

    std::string sink = "s_e";
    while (a.find_state(sink)) sink += "_";
    for (int s = 0; s < a.num_states(); ++s) builder.state(a.state_name(s));
    builder.state(sink);
    builder.initial(a.state_name(a.initial()));

    auto tuple_with = [&](const std::string& bit) {
        std::vector<std::string> outs(verdict_port, "-");
        outs.back() = bit;
        return outs;
    };
    for (int s = 0; s < a.num_states(); ++s) {
        for (int sym = 0; sym < alpha.num_symbols(); ++sym) {
            bool defined = false;
            for (const auto& [edge_sym, tgt] : a.transitions_from(s)) {
                if (edge_sym != sym) continue;
                defined = true;
                // A defined input may be answered as still-on-a-path or as
                // already-diverged; both stay available to the simulation.
                builder.transition(a.state_name(s), alpha.name(sym), tuple_with("1"),
                                   a.state_name(tgt));
                builder.transition(a.state_name(s), alpha.name(sym), tuple_with("0"),
                                   a.state_name(tgt));
            }
            if (!defined)
                builder.transition(a.state_name(s), alpha.name(sym), tuple_with("0"), sink);
        }
    }
    for (int sym = 0; sym < alpha.num_symbols(); ++sym)
        builder.transition(sink, alpha.name(sym), tuple_with("0"), sink);
    return builder.build();
}

TupleInclusionVerdict bounded_tuple_inclusion(const MultiTapeFa& a, const MultiTapeFa& b,
                                              int bound, const SearchLimits& limits) {
    require_same_tape_alphabet(a.alphabet_ref(), b.alphabet_ref());
    if (bound < 0)
        throw UsageError("negative length bound");
    const std::uint64_t budget = limits.effective_max_nodes();
    const TapeAlphabet& alpha = a.alphabet();

    TupleInclusionVerdict verdict;
    std::uint64_t entries = 0;

    // words -> reachable end states; map order is per-tape lexicographic, so
    // the first failing entry of the shortest failing level is the minimal
    // witness.
    using Level = std::map<std::vector<std::vector<int>>, std::vector<int>>;
    Level level;
    level.emplace(std::vector<std::vector<int>>(alpha.tapes()),
                  std::vector<int>{a.initial()});

    for (int len = 0; len <= bound; ++len) {
        for (const auto& [words, states] : level) {
            TapeTuple tuple{a.alphabet_ref(), words};
            ++verdict.stats.traces_enumerated;
            TupleAcceptance acc = accepts_tuple(b, tuple, limits);
            verdict.stats.absorb(acc.stats);
            if (!acc.accepted) {
                verdict.pass = false;
                verdict.witness = std::move(tuple);
                return verdict;
            }
        }
        if (len == bound) break;
        Level next;
        for (const auto& [words, states] : level) {
            for (int s : states) {
                for (const auto& [sym, tgt] : a.transitions_from(s)) {
                    std::vector<std::vector<int>> grown = words;
                    grown[alpha.tape_of(sym) - 1].push_back(sym);
                    auto [it, fresh] = next.emplace(std::move(grown), std::vector<int>{});
                    if (fresh && ++entries > budget)
                        throw ResourceError(
                            "tuple enumeration exceeded the configured search budget");
                    auto& list = it->second;
                    auto pos = std::lower_bound(list.begin(), list.end(), tgt);
                    if (pos == list.end() || *pos != tgt) list.insert(pos, tgt);
                }
            }
        }
        level = std::move(next);
    }
    verdict.pass = true;
    return verdict;
}

} // namespace mpfsm
