#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpfsm/conformance.hpp"
#include "mpfsm/constructions.hpp"
#include "mpfsm/errors.hpp"
#include "mpfsm/fsm.hpp"
#include "mpfsm/model_io.hpp"
#include "mpfsm/oracle.hpp"
#include "mpfsm/reductions.hpp"
#include "mpfsm/report.hpp"

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw mpfsm::UsageError("cannot read file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw mpfsm::UsageError("cannot write file '" + path + "'");
    out << content;
    if (!out)
        throw mpfsm::UsageError("cannot write file '" + path + "'");
}

mpfsm::MultiPortFsm load_fsm(const std::string& path, const std::string& completion) {
    mpfsm::MultiPortFsm m = mpfsm::parse_fsm(read_file(path));
    if (completion == "self-loop") return mpfsm::complete(m, mpfsm::CompletionPolicy::self_loop_null);
    if (completion == "error-state") return mpfsm::complete(m, mpfsm::CompletionPolicy::error_state);
    return m;
}

void emit_report(const std::string& path, ordered_json doc) {
    if (!path.empty()) write_file(path, mpfsm::render_report(doc));
}

int default_bound(const mpfsm::MultiPortFsm& n, const mpfsm::MultiPortFsm& m) {
    long long product = static_cast<long long>(n.num_states()) * m.num_states();
    long long cap = std::numeric_limits<int>::max();
    return static_cast<int>(std::min(product, cap));
}

/// True when every transition of the machine fills every output slot.
bool all_output(const mpfsm::MultiPortFsm& m) {
    for (int s = 0; s < m.num_states(); ++s)
        for (const mpfsm::Transition& t : m.transitions_from(s))
            for (int o : t.outputs)
                if (o == mpfsm::kNullOutput) return false;
    return true;
}

/// True when no port observes more than one symbol, so occurrence counts
/// determine observations.
bool counting_applicable(const mpfsm::Alphabet& alphabet) {
    for (int p = 1; p <= alphabet.ports(); ++p)
        if (alphabet.inputs_at(p).size() + alphabet.outputs_at(p).size() > 1) return false;
    return true;
}

void print_counterexample(const mpfsm::Verdict& verdict) {
    if (!verdict.counterexample) return;
    std::cout << "counterexample:\n";
    if (verdict.counterexample->empty())
        std::cout << "  (empty trace)\n";
    for (const mpfsm::Step& step : verdict.counterexample->steps)
        std::cout << "  " << mpfsm::format_step(*verdict.counterexample->alphabet, step) << "\n";
}

struct CheckArgs {
    std::string left, right, completion, report;
    int k = -1;
    bool parallel = false;
    bool exact = false;
    std::string engine = "fused";
};

int run_check_weak(const CheckArgs& args) {
    mpfsm::MultiPortFsm n = load_fsm(args.left, args.completion);
    mpfsm::MultiPortFsm m = load_fsm(args.right, args.completion);
    mpfsm::WeakVerdict verdict = mpfsm::check_weak(n, m);
    for (const auto& finding : verdict.ports) {
        std::cout << "port " << finding.port << ": ";
        if (finding.pass)
            std::cout << "pass\n";
        else
            std::cout << "missing " << mpfsm::format_word(n.alphabet(), finding.missing_word)
                      << "\n";
    }
    std::cout << "weak conformance: " << (verdict.pass ? "pass" : "fail") << "\n";
    ordered_json doc;
    doc["command"] = "check-weak";
    doc.update(mpfsm::weak_verdict_to_json(verdict, n.alphabet()));
    emit_report(args.report, doc);
    return verdict.pass ? 0 : 1;
}

int run_check_strong(const CheckArgs& args) {
    mpfsm::MultiPortFsm n = load_fsm(args.left, args.completion);
    mpfsm::MultiPortFsm m = load_fsm(args.right, args.completion);
    int k = args.k >= 0 ? args.k : default_bound(n, m);

    mpfsm::StrongCheckOptions options;
    options.engine = args.engine == "enumerate" ? mpfsm::StrongEngine::enumerate
                                                : mpfsm::StrongEngine::fused;
    if (args.parallel) {
        options.engine = mpfsm::StrongEngine::enumerate;
        options.parallel = true;
    }

    mpfsm::Verdict verdict;
    std::string mode;
    if (args.exact) {
        if (all_output(m)) {
            mode = "all-output";
            verdict = mpfsm::check_strong_all_output_case(n, m);
            std::cout << "mode: all-output (exact)\n";
        } else if (counting_applicable(m.alphabet())) {
            mode = "counting";
            verdict = mpfsm::check_parikh_case_bounded(n, m, k, options);
            std::cout << "mode: counting (bounded at k=" << k << ")\n";
        } else {
            throw mpfsm::PreconditionError(
                "neither the all-output case nor the counting case applies to the right machine");
        }
    } else {
        mode = "bounded";
        verdict = mpfsm::check_strong_bounded(n, m, k, options);
    }

    if (verdict.pass) {
        std::cout << "strong conformance: pass";
    } else {
        std::cout << "strong conformance: fail";
    }
    if (mode != "all-output") std::cout << " (k=" << k << ")";
    std::cout << "\n";
    print_counterexample(verdict);

    ordered_json doc;
    doc["command"] = "check-strong";
    doc["mode"] = mode;
    if (mode != "all-output") doc["k"] = k;
    if (mode == "bounded")
        doc["engine"] = options.engine == mpfsm::StrongEngine::enumerate ? "enumerate" : "fused";
    doc.update(mpfsm::verdict_to_json(verdict));
    emit_report(args.report, doc);
    return verdict.pass ? 0 : 1;
}

struct MemberArgs {
    std::string trace, machine, report;
    bool pc = false;
};

int run_member(const MemberArgs& args) {
    mpfsm::MultiPortFsm m = mpfsm::parse_fsm(read_file(args.machine));
    mpfsm::GlobalTrace sigma = mpfsm::parse_trace(read_file(args.trace), m);
    ordered_json doc;
    doc["command"] = "member";
    doc["prefix_closed"] = args.pc;
    int exit_code = 0;
    if (args.pc) {
        mpfsm::PrefixClosureResult result = mpfsm::member_pc(sigma, m);
        if (result.member) {
            std::cout << "member: true\n";
            if (!result.prefix_witnesses.empty() && !result.prefix_witnesses.back().empty())
                std::cout << "witness:\n" << mpfsm::format_trace(result.prefix_witnesses.back());
        } else {
            std::cout << "member: false (prefix of length " << *result.failing_prefix_len
                      << " fails)\n";
            exit_code = 1;
        }
        doc.update(mpfsm::prefix_closure_to_json(result));
    } else {
        mpfsm::MembershipResult result = mpfsm::member_closure(sigma, m);
        if (result.member) {
            std::cout << "member: true\n";
            if (result.witness && !result.witness->empty())
                std::cout << "witness:\n" << mpfsm::format_trace(*result.witness);
        } else {
            std::cout << "member: false\n";
            exit_code = 1;
        }
        doc.update(mpfsm::membership_to_json(result));
    }
    emit_report(args.report, doc);
    return exit_code;
}

struct ProjectArgs {
    std::string trace, machine;
    int port = 0;
};

int run_project(const ProjectArgs& args) {
    mpfsm::MultiPortFsm m = mpfsm::parse_fsm(read_file(args.machine));
    mpfsm::GlobalTrace sigma = mpfsm::parse_trace(read_file(args.trace), m);
    std::cout << mpfsm::format_word(m.alphabet(), mpfsm::project(sigma, args.port)) << "\n";
    return 0;
}

int run_distinguish(const CheckArgs& args) {
    mpfsm::MultiPortFsm n = load_fsm(args.left, args.completion);
    mpfsm::MultiPortFsm m = load_fsm(args.right, args.completion);
    int k = args.k >= 0 ? args.k : default_bound(n, m);
    mpfsm::DistinguishReport report = mpfsm::distinguishable_bounded(n, m, k);

    auto describe = [&](const char* label, const mpfsm::Verdict& verdict) {
        if (verdict.pass) {
            std::cout << label << ": contained up to k=" << k << "\n";
        } else {
            std::cout << label << ": witness found\n";
            print_counterexample(verdict);
        }
    };
    describe("left against right", report.n_from_m);
    describe("right against left", report.m_from_n);
    std::cout << "distinguishable: " << (report.distinguishable() ? "yes" : "no") << " (k=" << k
              << ")\n";

    ordered_json doc;
    doc["command"] = "distinguish";
    doc["k"] = k;
    doc["distinguishable"] = report.distinguishable();
    doc["left_against_right"] = mpfsm::verdict_to_json(report.n_from_m);
    doc["right_against_left"] = mpfsm::verdict_to_json(report.m_from_n);
    emit_report(args.report, doc);
    return 0;
}

struct GenArgs {
    std::string instance, out;
};

int run_gen_pcp(const GenArgs& args) {
    mpfsm::PcpInstance inst = mpfsm::parse_pcp(read_file(args.instance));
    const int solver_bound = 8;
    std::optional<std::vector<int>> solution = mpfsm::solve_pcp_bounded(inst, solver_bound);
    mpfsm::PcpGadget gadget = mpfsm::gen_pcp_gadget(inst);
    auto [fn, fm] = mpfsm::gen_pcp_fsm_gadget(inst);

    int bound = 10;
    if (solution) {
        std::size_t w = 0;
        for (int idx : *solution) w += inst.pairs[idx - 1].first.size();
        bound = static_cast<int>(2 + 2 * w);
    }

    std::filesystem::create_directories(args.out);
    auto path = [&](const char* name) { return (std::filesystem::path(args.out) / name).string(); };
    write_file(path("n.mtfa"), mpfsm::serialize_mtfa(gadget.n));
    write_file(path("m.mtfa"), mpfsm::serialize_mtfa(gadget.m));
    write_file(path("fn.fsm"), mpfsm::serialize_fsm(fn));
    write_file(path("fm.fsm"), mpfsm::serialize_fsm(fm));

    ordered_json manifest;
    manifest["kind"] = "pcp";
    ordered_json pairs = ordered_json::array();
    for (const auto& [alpha, beta] : inst.pairs) pairs.push_back({alpha, beta});
    manifest["pairs"] = std::move(pairs);
    manifest["solver_index_bound"] = solver_bound;
    manifest["solution"] = solution ? ordered_json(*solution) : ordered_json(nullptr);
    manifest["bound"] = bound;
    // Tuple inclusion of n in m (and of the embeddings) at `bound`.
    manifest["expected_pass"] = !solution.has_value();
    manifest["files"] = {{"n", "n.mtfa"}, {"m", "m.mtfa"}, {"fn", "fn.fsm"}, {"fm", "fm.fsm"}};
    write_file(path("manifest.json"), mpfsm::render_report(manifest));

    std::cout << "wrote gadget files to " << args.out << "\n";
    std::cout << "expected: " << (solution ? "fail" : "pass") << " at bound " << bound << "\n";
    return 0;
}

int run_gen_sat(const GenArgs& args) {
    mpfsm::OneInThreeSatInstance inst = mpfsm::parse_sat(read_file(args.instance));
    std::optional<std::vector<bool>> solution = mpfsm::solve_one_in_three(inst);
    mpfsm::SatGadget gadget = mpfsm::gen_sat_gadget(inst);

    std::filesystem::create_directories(args.out);
    auto path = [&](const char* name) { return (std::filesystem::path(args.out) / name).string(); };
    write_file(path("n.fsm"), mpfsm::serialize_fsm(gadget.n));
    write_file(path("m.fsm"), mpfsm::serialize_fsm(gadget.m));

    ordered_json manifest;
    manifest["kind"] = "one-in-three-sat";
    manifest["vars"] = inst.vars;
    manifest["clauses"] = inst.clauses.size();
    manifest["bound"] = gadget.bound;
    if (solution) {
        ordered_json bits = ordered_json::array();
        for (bool b : *solution) bits.push_back(b);
        manifest["solution"] = std::move(bits);
    } else {
        manifest["solution"] = nullptr;
    }
    // The strong bounded check of n against m at `bound`.
    manifest["expected_pass"] = solution.has_value();
    ordered_json ports = ordered_json::array();
    for (const auto& [role, port] : gadget.port_map) ports.push_back({role, port});
    manifest["port_map"] = std::move(ports);
    manifest["files"] = {{"n", "n.fsm"}, {"m", "m.fsm"}};
    write_file(path("manifest.json"), mpfsm::render_report(manifest));

    std::cout << "wrote gadget files to " << args.out << "\n";
    std::cout << "expected: " << (solution ? "pass" : "fail") << " at bound " << gadget.bound
              << "\n";
    return 0;
}

struct WitnessArgs {
    std::string machine, trace, out;
};

int run_witness(const WitnessArgs& args) {
    mpfsm::MultiPortFsm m = mpfsm::parse_fsm(read_file(args.machine));
    mpfsm::GlobalTrace sigma = mpfsm::parse_trace(read_file(args.trace), m);
    mpfsm::MultiPortFsm n = mpfsm::witness_fsm(m, sigma);
    std::string text = mpfsm::serialize_fsm(n);
    if (args.out.empty())
        std::cout << text;
    else
        write_file(args.out, text);
    return 0;
}

struct InfoArgs {
    std::string machine, report;
};

int run_info(const InfoArgs& args) {
    mpfsm::MultiPortFsm m = mpfsm::parse_fsm(read_file(args.machine));
    mpfsm::WellFormedReport report = mpfsm::check_well_formed(m);
    std::cout << "states: " << m.num_states() << "\n";
    std::cout << "ports: " << m.alphabet().ports() << "\n";
    std::cout << "transitions: " << m.num_transitions() << "\n";
    std::cout << "complete: " << (report.complete ? "yes" : "no") << "\n";
    std::cout << "connected: " << (report.connected ? "yes" : "no") << "\n";
    std::cout << "deterministic: " << (report.deterministic ? "yes" : "no") << "\n";
    for (const auto& [state, input] : report.missing)
        std::cout << "missing: " << m.state_name(state) << " on " << m.alphabet().name(input)
                  << "\n";
    for (int state : report.unreachable)
        std::cout << "unreachable: " << m.state_name(state) << "\n";
    ordered_json doc;
    doc["command"] = "info";
    doc.update(mpfsm::well_formed_to_json(m, report));
    emit_report(args.report, doc);
    return report.well_formed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conformance checking for FSMs observed at distributed ports"};
    app.require_subcommand(1);

    auto add_completion = [](CLI::App* cmd, std::string& target) {
        cmd->add_option("--complete", target,
                        "Complete both machines first: self-loop | error-state")
            ->check(CLI::IsMember({"self-loop", "error-state"}));
    };
    auto add_report = [](CLI::App* cmd, std::string& target) {
        cmd->add_option("--report", target, "Write a structured report to this file");
    };

    CheckArgs weak_args;
    CLI::App* weak = app.add_subcommand("check-weak",
                                        "Per-port projected-language inclusion of N in M");
    weak->add_option("N", weak_args.left, "Left machine file")->required();
    weak->add_option("M", weak_args.right, "Right machine file")->required();
    add_completion(weak, weak_args.completion);
    add_report(weak, weak_args.report);

    CheckArgs strong_args;
    CLI::App* strong = app.add_subcommand(
        "check-strong", "Bounded strong conformance: every trace of N with at most k inputs "
                        "must be observationally matched by M");
    strong->add_option("N", strong_args.left, "Left machine file")->required();
    strong->add_option("M", strong_args.right, "Right machine file")->required();
    strong->add_option("--k", strong_args.k, "Input-count bound (default |S_N|*|S_M|)");
    strong->add_option("--engine", strong_args.engine, "Search engine: fused | enumerate")
        ->check(CLI::IsMember({"fused", "enumerate"}));
    strong->add_flag("--parallel", strong_args.parallel,
                     "Parallel enumeration (implies --engine enumerate)");
    strong->add_flag("--exact", strong_args.exact,
                     "Use the exact all-output decision or the counting case; exit 3 if "
                     "neither applies");
    add_completion(strong, strong_args.completion);
    add_report(strong, strong_args.report);

    MemberArgs member_args;
    CLI::App* member = app.add_subcommand("member",
                                          "Is the trace an observation of some machine trace?");
    member->add_option("trace", member_args.trace, "Trace file")->required();
    member->add_option("M", member_args.machine, "Machine file")->required();
    member->add_flag("--pc", member_args.pc, "Also require every prefix to be an observation");
    add_report(member, member_args.report);

    ProjectArgs project_args;
    CLI::App* project = app.add_subcommand("project", "Port-local observation of a trace");
    project->add_option("trace", project_args.trace, "Trace file")->required();
    project->add_option("M", project_args.machine, "Machine file supplying the alphabet")
        ->required();
    project->add_option("--port", project_args.port, "1-based port")->required();

    CheckArgs distinguish_args;
    CLI::App* distinguish = app.add_subcommand(
        "distinguish", "Check both conformance directions and report witnesses");
    distinguish->add_option("N", distinguish_args.left, "Left machine file")->required();
    distinguish->add_option("M", distinguish_args.right, "Right machine file")->required();
    distinguish->add_option("--k", distinguish_args.k, "Input-count bound (default |S_N|*|S_M|)");
    add_completion(distinguish, distinguish_args.completion);
    add_report(distinguish, distinguish_args.report);

    GenArgs pcp_args;
    CLI::App* gen_pcp = app.add_subcommand(
        "gen-pcp", "Build the correspondence-problem automata and their machine embeddings");
    gen_pcp->add_option("instance", pcp_args.instance, "Instance file (alpha | beta lines)")
        ->required();
    gen_pcp->add_option("--out", pcp_args.out, "Output directory")->required();

    GenArgs sat_args;
    CLI::App* gen_sat = app.add_subcommand(
        "gen-sat", "Build the one-in-three machines whose bounded check mirrors solvability");
    gen_sat->add_option("instance", sat_args.instance, "Instance file (vars R + clause lines)")
        ->required();
    gen_sat->add_option("--out", sat_args.out, "Output directory")->required();

    WitnessArgs witness_args;
    CLI::App* witness = app.add_subcommand(
        "witness", "Build a deterministic machine that replays the trace and conforms to M");
    witness->add_option("M", witness_args.machine, "Machine file")->required();
    witness->add_option("trace", witness_args.trace, "Trace file")->required();
    witness->add_option("--out", witness_args.out, "Output machine file (default stdout)");

    InfoArgs info_args;
    CLI::App* info = app.add_subcommand("info", "Structural well-formedness report");
    info->add_option("M", info_args.machine, "Machine file")->required();
    add_report(info, info_args.report);

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(weak)) return run_check_weak(weak_args);
        if (app.got_subcommand(strong)) return run_check_strong(strong_args);
        if (app.got_subcommand(member)) return run_member(member_args);
        if (app.got_subcommand(project)) return run_project(project_args);
        if (app.got_subcommand(distinguish)) return run_distinguish(distinguish_args);
        if (app.got_subcommand(gen_pcp)) return run_gen_pcp(pcp_args);
        if (app.got_subcommand(gen_sat)) return run_gen_sat(sat_args);
        if (app.got_subcommand(witness)) return run_witness(witness_args);
        if (app.got_subcommand(info)) return run_info(info_args);
        return 2;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const mpfsm::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mpfsm::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const mpfsm::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const mpfsm::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
