#ifndef MPFSM_VERDICT_HPP
#define MPFSM_VERDICT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "mpfsm/trace.hpp"

namespace mpfsm {

/// Counters accumulated by the bounded searches; useful for reports and for
/// checking complexity envelopes in tests.
struct SearchStats {
    std::uint64_t configurations_visited = 0; // distinct cursor configurations
    std::uint64_t configuration_bound = 0;    // product bound for the last query
    std::uint64_t traces_enumerated = 0;
    std::uint64_t classes_checked = 0;
    std::uint64_t product_nodes = 0;

    void absorb(const SearchStats& other) {
        configurations_visited += other.configurations_visited;
        configuration_bound = std::max(configuration_bound, other.configuration_bound);
        traces_enumerated += other.traces_enumerated;
        classes_checked += other.classes_checked;
        product_nodes += other.product_nodes;
    }
};

/// Node budget for bounded searches. A search that would exceed the budget
/// throws ResourceError instead of returning a truncated answer. The value 0
/// picks the default, overridable through the MPFSM_BUDGET environment
/// variable.
struct SearchLimits {
    std::uint64_t max_nodes = 0;

    std::uint64_t effective_max_nodes() const;
};

/// Outcome of a conformance check. A failed check carries a replayable
/// counterexample: a trace of the examined (left-hand) machine.
struct Verdict {
    bool pass = false;
    std::optional<GlobalTrace> counterexample;
    std::optional<int> failing_port;
    std::optional<std::size_t> offending_prefix_len;
    SearchStats stats;
};

/// Port-wise outcome of the projection-language check.
struct WeakVerdict {
    struct PortFinding {
        int port = 0;
        bool pass = false;
        /// Shortest local observation of the left machine the right machine
        /// cannot produce; empty when the port passes.
        std::vector<int> missing_word;
    };

    bool pass = false;
    std::vector<PortFinding> ports;
};

} // namespace mpfsm

#endif
