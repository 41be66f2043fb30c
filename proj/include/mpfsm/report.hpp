#ifndef MPFSM_REPORT_HPP
#define MPFSM_REPORT_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "mpfsm/conformance.hpp"
#include "mpfsm/fsm.hpp"
#include "mpfsm/oracle.hpp"
#include "mpfsm/trace.hpp"
#include "mpfsm/verdict.hpp"

namespace mpfsm {

/// Building blocks for the structured check reports. Key order is fixed and
/// no volatile data (timestamps, durations, paths) is emitted here, so equal
/// inputs render byte-identical documents.

nlohmann::ordered_json step_to_json(const Alphabet& alphabet, const Step& step);
nlohmann::ordered_json trace_to_json(const GlobalTrace& trace);
/// Per-port observation words of a trace.
nlohmann::ordered_json projections_to_json(const GlobalTrace& trace);
nlohmann::ordered_json stats_to_json(const SearchStats& stats);

/// Verdict fields of a conformance check: pass flag, counterexample steps
/// with their projections, failing port / offending prefix when set, and
/// the search statistics.
nlohmann::ordered_json verdict_to_json(const Verdict& verdict);
nlohmann::ordered_json weak_verdict_to_json(const WeakVerdict& verdict, const Alphabet& alphabet);
nlohmann::ordered_json membership_to_json(const MembershipResult& result);
nlohmann::ordered_json prefix_closure_to_json(const PrefixClosureResult& result);
nlohmann::ordered_json well_formed_to_json(const MultiPortFsm& m, const WellFormedReport& report);

/// Canonical rendering: two-space indentation, trailing newline.
std::string render_report(const nlohmann::ordered_json& doc);

} // namespace mpfsm

#endif
