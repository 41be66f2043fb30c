#ifndef MPFSM_TRACE_HPP
#define MPFSM_TRACE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "mpfsm/alphabet.hpp"

namespace mpfsm {

/// One input applied to a machine together with the full output tuple it
/// produced. outputs has one slot per port; kNullOutput marks empty slots.
struct Step {
    int input = 0;
    std::vector<int> outputs;

    bool operator==(const Step& other) const = default;
};

/// A sequence of steps as observed by a global tester.
struct GlobalTrace {
    AlphabetRef alphabet;
    std::vector<Step> steps;

    std::size_t size() const { return steps.size(); }
    bool empty() const { return steps.empty(); }

    /// First `len` steps as a new trace.
    GlobalTrace prefix(std::size_t len) const;

    bool operator==(const GlobalTrace& other) const;
};

/// What each port-local observer sees: one symbol word per port.
struct LocalTraceTuple {
    AlphabetRef alphabet;
    std::vector<std::vector<int>> words;

    bool operator==(const LocalTraceTuple& other) const;
};

/// The word observed at `port` (1-based): the input when it belongs to the
/// port, immediately followed by that step's output at the port, if any.
std::vector<int> project(const GlobalTrace& trace, int port);

/// All port projections of a trace at once.
LocalTraceTuple project_all(const GlobalTrace& trace);

/// True if both traces look the same to every port-local observer.
bool equivalent(const GlobalTrace& a, const GlobalTrace& b);

/// Flat encoding of project_all(), usable as a hash/map key. Two traces get
/// the same key exactly when they are observationally equivalent.
using ClassKey = std::vector<int>;
ClassKey class_key(const GlobalTrace& trace);

/// Renders a step as `in / (o1, ..., oN)`.
std::string format_step(const Alphabet& alphabet, const Step& step);
/// One formatted step per line.
std::string format_trace(const GlobalTrace& trace);
/// Space-separated symbol names of a port-local word.
std::string format_word(const Alphabet& alphabet, const std::vector<int>& word);

/// Throws UsageError unless both traces/machines use equal alphabets.
void require_same_alphabet(const AlphabetRef& a, const AlphabetRef& b);

} // namespace mpfsm

#endif
