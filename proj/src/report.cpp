#include "mpfsm/report.hpp"

namespace mpfsm {

using nlohmann::ordered_json;

ordered_json step_to_json(const Alphabet& alphabet, const Step& step) {
    ordered_json doc;
    doc["input"] = alphabet.name(step.input);
    ordered_json outs = ordered_json::array();
    for (int o : step.outputs) outs.push_back(o == kNullOutput ? "-" : alphabet.name(o));
    doc["outputs"] = std::move(outs);
    return doc;
}

ordered_json trace_to_json(const GlobalTrace& trace) {
    ordered_json steps = ordered_json::array();
    for (const Step& step : trace.steps) steps.push_back(step_to_json(*trace.alphabet, step));
    return steps;
}

ordered_json projections_to_json(const GlobalTrace& trace) {
    const Alphabet& alphabet = *trace.alphabet;
    ordered_json ports = ordered_json::array();
    for (int p = 1; p <= alphabet.ports(); ++p) {
        ordered_json entry;
        entry["port"] = p;
        ordered_json events = ordered_json::array();
        for (int sym : project(trace, p)) events.push_back(alphabet.name(sym));
        entry["events"] = std::move(events);
        ports.push_back(std::move(entry));
    }
    return ports;
}

ordered_json stats_to_json(const SearchStats& stats) {
    ordered_json doc;
    doc["configurations_visited"] = stats.configurations_visited;
    doc["configuration_bound"] = stats.configuration_bound;
    doc["traces_enumerated"] = stats.traces_enumerated;
    doc["classes_checked"] = stats.classes_checked;
    doc["product_nodes"] = stats.product_nodes;
    return doc;
}

ordered_json verdict_to_json(const Verdict& verdict) {
    ordered_json doc;
    doc["pass"] = verdict.pass;
    if (verdict.counterexample) {
        doc["counterexample"] = trace_to_json(*verdict.counterexample);
        doc["projections"] = projections_to_json(*verdict.counterexample);
    }
    if (verdict.failing_port) doc["failing_port"] = *verdict.failing_port;
    if (verdict.offending_prefix_len)
        doc["offending_prefix_length"] = *verdict.offending_prefix_len;
    doc["statistics"] = stats_to_json(verdict.stats);
    return doc;
}

ordered_json weak_verdict_to_json(const WeakVerdict& verdict, const Alphabet& alphabet) {
    ordered_json doc;
    doc["pass"] = verdict.pass;
    ordered_json ports = ordered_json::array();
    for (const auto& finding : verdict.ports) {
        ordered_json entry;
        entry["port"] = finding.port;
        entry["pass"] = finding.pass;
        if (!finding.pass) {
            ordered_json word = ordered_json::array();
            for (int sym : finding.missing_word) word.push_back(alphabet.name(sym));
            entry["missing_word"] = std::move(word);
        }
        ports.push_back(std::move(entry));
    }
    doc["ports"] = std::move(ports);
    return doc;
}

ordered_json membership_to_json(const MembershipResult& result) {
    ordered_json doc;
    doc["member"] = result.member;
    if (result.witness) doc["witness"] = trace_to_json(*result.witness);
    doc["statistics"] = stats_to_json(result.stats);
    return doc;
}

ordered_json prefix_closure_to_json(const PrefixClosureResult& result) {
    ordered_json doc;
    doc["member"] = result.member;
    if (result.failing_prefix_len)
        doc["failing_prefix_length"] = *result.failing_prefix_len;
    if (result.member && !result.prefix_witnesses.empty())
        doc["witness"] = trace_to_json(result.prefix_witnesses.back());
    doc["statistics"] = stats_to_json(result.stats);
    return doc;
}

ordered_json well_formed_to_json(const MultiPortFsm& m, const WellFormedReport& report) {
    const Alphabet& alphabet = m.alphabet();
    ordered_json doc;
    doc["states"] = m.num_states();
    doc["ports"] = alphabet.ports();
    doc["transitions"] = m.num_transitions();
    doc["complete"] = report.complete;
    doc["connected"] = report.connected;
    doc["deterministic"] = report.deterministic;
    ordered_json missing = ordered_json::array();
    for (const auto& [state, input] : report.missing) {
        ordered_json entry;
        entry["state"] = m.state_name(state);
        entry["input"] = alphabet.name(input);
        missing.push_back(std::move(entry));
    }
    doc["missing"] = std::move(missing);
    ordered_json unreachable = ordered_json::array();
    for (int state : report.unreachable) unreachable.push_back(m.state_name(state));
    doc["unreachable"] = std::move(unreachable);
    return doc;
}

std::string render_report(const ordered_json& doc) {
    return doc.dump(2) + "\n";
}

} // namespace mpfsm
