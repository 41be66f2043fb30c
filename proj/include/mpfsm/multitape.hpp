#ifndef MPFSM_MULTITAPE_HPP
#define MPFSM_MULTITAPE_HPP

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpfsm/fsm.hpp"
#include "mpfsm/verdict.hpp"

namespace mpfsm {

/// Disjoint per-tape symbol alphabets. Symbols are interned tape by tape,
/// so ids are contiguous and ordered by (tape, declaration position).
class TapeAlphabet {
public:
    explicit TapeAlphabet(std::vector<std::vector<std::string>> per_tape);

    int tapes() const { return static_cast<int>(first_id_.size()) - 1; }
    int num_symbols() const { return static_cast<int>(names_.size()); }
    const std::string& name(int symbol) const { return names_.at(symbol); }
    /// 1-based tape owning the symbol.
    int tape_of(int symbol) const { return tape_of_.at(symbol); }
    /// Symbol ids of one tape, ascending. `tape` is 1-based.
    std::vector<int> symbols_at(int tape) const;

    std::optional<int> find(const std::string& name) const;
    int require(const std::string& name) const;

    bool operator==(const TapeAlphabet& other) const;

private:
    std::vector<std::string> names_;
    std::vector<int> tape_of_;
    std::vector<int> first_id_; // first_id_[t] = first symbol id of tape t+1
};

using TapeAlphabetRef = std::shared_ptr<const TapeAlphabet>;

/// A tuple of per-tape words, the objects a multi-tape automaton accepts.
struct TapeTuple {
    TapeAlphabetRef alphabet;
    std::vector<std::vector<int>> words;

    std::size_t total_length() const;
    bool operator==(const TapeTuple& other) const;
};

/// Finite automaton over the union of disjoint tape alphabets. Every state
/// accepts, so both the interleaving language and the tuple language are
/// prefix-closed.
class MultiTapeFa {
public:
    const TapeAlphabet& alphabet() const { return *alphabet_; }
    const TapeAlphabetRef& alphabet_ref() const { return alphabet_; }
    int num_states() const { return static_cast<int>(state_names_.size()); }
    const std::string& state_name(int state) const { return state_names_.at(state); }
    std::optional<int> find_state(const std::string& name) const;
    int initial() const { return initial_; }
    /// Outgoing (symbol, target) pairs, sorted.
    const std::vector<std::pair<int, int>>& transitions_from(int state) const {
        return transitions_.at(state);
    }
    std::size_t num_transitions() const;

    bool operator==(const MultiTapeFa& other) const;

private:
    friend class MtfaBuilder;

    TapeAlphabetRef alphabet_;
    std::vector<std::string> state_names_;
    int initial_ = 0;
    std::vector<std::vector<std::pair<int, int>>> transitions_;
};

class MtfaBuilder {
public:
    explicit MtfaBuilder(TapeAlphabetRef alphabet);

    MtfaBuilder& state(const std::string& name);
    MtfaBuilder& initial(const std::string& name);
    MtfaBuilder& transition(const std::string& src, const std::string& symbol,
                            const std::string& dst);

    MultiTapeFa build();

private:
    TapeAlphabetRef alphabet_;
    std::vector<std::string> states_;
    std::optional<std::string> initial_;
    std::vector<std::tuple<std::string, std::string, std::string>> transitions_;
};

struct TupleAcceptance {
    bool accepted = false;
    SearchStats stats;
};

/// Does the automaton accept the tuple? Reachability over (state, cursor
/// vector) configurations; a configuration with every cursor at its word's
/// end accepts.
TupleAcceptance accepts_tuple(const MultiTapeFa& a, const TapeTuple& t,
                              const SearchLimits& limits = {});

/// Automaton whose tuple language is the union of the operands'.
MultiTapeFa fa_union(const MultiTapeFa& a, const MultiTapeFa& b);

/// Automaton whose tuple language is the elementwise concatenation of the
/// operands' (per tape: a word of `a` followed by a word of `b`).
MultiTapeFa fa_concat(const MultiTapeFa& a, const MultiTapeFa& b);

/// FSM with r+1 ports simulating the automaton: tape p symbols become the
/// inputs at port p, and port r+1 answers every input with 1 while the run
/// follows a path of the automaton and 0 forever after it diverges.
MultiPortFsm embed_fsm(const MultiTapeFa& a);

struct TupleInclusionVerdict {
    bool pass = false;
    /// Witness accepted by the left automaton but not the right: minimal by
    /// total length, then by per-tape lexicographic comparison.
    std::optional<TapeTuple> witness;
    SearchStats stats;
};

/// Is every tuple of `a` with total length at most `bound` a tuple of `b`?
TupleInclusionVerdict bounded_tuple_inclusion(const MultiTapeFa& a, const MultiTapeFa& b,
                                              int bound, const SearchLimits& limits = {});

/// Throws UsageError when the two alphabets are not interchangeable.
void require_same_tape_alphabet(const TapeAlphabetRef& a, const TapeAlphabetRef& b);

} // namespace mpfsm

#endif
