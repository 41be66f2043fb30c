// Acceptance gate: one self-contained check per shipped guarantee. Each
// check prints a [PASS]/[FAIL] line with its wall time; the process exits
// nonzero if any check fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mpfsm/conformance.hpp"
#include "mpfsm/constructions.hpp"
#include "mpfsm/model_io.hpp"
#include "mpfsm/multitape.hpp"
#include "mpfsm/oracle.hpp"
#include "mpfsm/reductions.hpp"
#include "mpfsm/report.hpp"
#include "support/generators.hpp"

using namespace mpfsm;

namespace {

struct Failure {
    std::string message;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw Failure{message};
}

int g_failed = 0;

void run(int number, const std::string& label, const std::function<void()>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string problem;
    try {
        body();
    } catch (const Failure& f) {
        problem = f.message;
    } catch (const std::exception& e) {
        problem = std::string("unexpected exception: ") + e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    if (problem.empty()) {
        std::printf("[PASS] criterion %d: %s (%lld ms)\n", number, label.c_str(),
                    static_cast<long long>(ms));
    } else {
        std::printf("[FAIL] criterion %d: %s (%lld ms): %s\n", number, label.c_str(),
                    static_cast<long long>(ms), problem.c_str());
        ++g_failed;
    }
    std::fflush(stdout);
}

Step step_of(const Alphabet& al, const std::string& input,
             const std::vector<std::string>& outputs) {
    Step s;
    s.input = al.require(input);
    for (const auto& name : outputs)
        s.outputs.push_back(name == "-" ? kNullOutput : al.require(name));
    return s;
}

/// Strips a gadget tape word back to instance characters: marker symbols are
/// dropped and "c_<tape>" becomes 'c'.
std::string strip_tape_word(const TapeAlphabet& al, const std::vector<int>& word) {
    std::string text;
    for (int sym : word) {
        const std::string& name = al.name(sym);
        auto underscore = name.find('_');
        if (underscore == std::string::npos) continue; // x / x' markers
        text += name.substr(0, underscore);
    }
    return text;
}

void criterion_1_separation() {
    auto fix = fixtures();
    require(check_weak(fix.n1, fix.m1).pass, "per-port inclusion should pass");
    Verdict v = check_strong_bounded(fix.n1, fix.m1, 1);
    require(!v.pass, "bounded strong check should fail at k=1");
    require(v.counterexample.has_value(), "failing check must carry a counterexample");
    GlobalTrace expected{fix.m1.alphabet_ref(),
                         {step_of(fix.m1.alphabet(), "x1", {"y1", "y2'"})}};
    require(equivalent(*v.counterexample, expected),
            "counterexample must be observation-equal to x1 / (y1, y2')");
    require(*v.counterexample == expected, "counterexample must be exactly x1 / (y1, y2')");
}

void criterion_2_oracle_equivalence() {
    auto fix = fixtures();
    const MultiPortFsm* machines[] = {&fix.m1, &fix.n1, &fix.m4, &fix.m5,
                                      &fix.m7, &fix.m7_loop, &fix.m_nonpc};
    long long checked = 0;
    for (const MultiPortFsm* m : machines) {
        testgen::for_all_traces(m->alphabet_ref(), 4, [&](const GlobalTrace& sigma) {
            bool fast = member_closure(sigma, *m).member;
            bool slow = member_closure_bruteforce(sigma, *m);
            require(fast == slow, "exhaustive disagreement on " + format_trace(sigma));
            ++checked;
            return true;
        });
    }
    require(checked > 20000, "exhaustive sweep unexpectedly small");

    std::mt19937 rng(20260815);
    for (int i = 0; i < 1000; ++i) {
        testgen::FsmShape shape;
        shape.max_states = 4;
        shape.ports = testgen::pick(rng, 1, 3);
        auto alphabet = testgen::random_alphabet(rng, shape);
        auto m = testgen::random_fsm(rng, alphabet, shape);
        auto sigma = testgen::random_trace(rng, alphabet, 5);
        bool fast = member_closure(sigma, m).member;
        bool slow = member_closure_bruteforce(sigma, m);
        require(fast == slow, "random disagreement at iteration " + std::to_string(i));
    }
}

void criterion_3_complexity_envelope() {
    std::mt19937 rng(31337);
    for (int i = 0; i < 100; ++i) {
        testgen::FsmShape shape;
        shape.max_states = testgen::pick(rng, 1, 5);
        shape.ports = testgen::pick(rng, 1, 3);
        auto alphabet = testgen::random_alphabet(rng, shape);
        auto m = testgen::random_fsm(rng, alphabet, shape);
        auto sigma = testgen::random_trace(rng, alphabet, 6);
        auto result = member_closure(sigma, m);
        std::uint64_t bound = static_cast<std::uint64_t>(m.num_states());
        for (int p = 1; p <= m.alphabet().ports(); ++p)
            bound *= static_cast<std::uint64_t>(project(sigma, p).size()) + 1;
        require(result.stats.configurations_visited <= bound,
                "visited " + std::to_string(result.stats.configurations_visited) +
                    " configurations against a bound of " + std::to_string(bound));
    }
}

void criterion_4_closure_not_prefix_closed() {
    auto fix = fixtures();
    const Alphabet& al = fix.m_nonpc.alphabet();
    GlobalTrace sigma{fix.m_nonpc.alphabet_ref(),
                      {step_of(al, "x1", {"y1", "-"}), step_of(al, "x1", {"y1", "y2"})}};
    require(member_closure(sigma, fix.m_nonpc).member,
            "the two-step trace should be in the closure");
    auto pc = member_pc(sigma, fix.m_nonpc);
    require(!pc.member, "the same trace should fall outside the prefix-closed core");
    require(pc.failing_prefix_len.has_value() && *pc.failing_prefix_len == 1,
            "the one-step prefix is the one that fails");
}

void criterion_5_loop_variant_equality() {
    auto fix = fixtures();
    require(check_strong_bounded(fix.m7_loop, fix.m7, 6).pass,
            "the loop variant should conform to the base machine at k=6");
    require(check_strong_bounded(fix.m7, fix.m7_loop, 6).pass,
            "the base machine should conform to the loop variant at k=6");
    enumerate_bounded(fix.m7_loop, 6, [&](const GlobalTrace& sigma) {
        require(member_closure(sigma, fix.m7).member,
                "loop-variant behaviour outside the base closure: " + format_trace(sigma));
        return true;
    });
    enumerate_bounded(fix.m7, 6, [&](const GlobalTrace& sigma) {
        require(member_closure(sigma, fix.m7_loop).member,
                "base behaviour outside the loop variant's closure: " + format_trace(sigma));
        return true;
    });
}

void criterion_6_pcp_gadget() {
    PcpInstance solvable{{{"ab", "a"}, {"b", "bb"}}};
    auto gadget = gen_pcp_gadget(solvable);
    auto inclusion = bounded_tuple_inclusion(gadget.n, gadget.m, 8);
    require(!inclusion.pass, "inclusion should fail for the solvable instance");
    require(inclusion.witness.has_value(), "failing inclusion must carry a witness tuple");

    auto solution = solve_pcp_bounded(solvable, 8);
    require(solution.has_value(), "the solver should find the known solution");
    std::string alpha_cat, beta_cat;
    for (int index : *solution) {
        alpha_cat += solvable.pairs[static_cast<std::size_t>(index - 1)].first;
        beta_cat += solvable.pairs[static_cast<std::size_t>(index - 1)].second;
    }
    require(alpha_cat == beta_cat, "solver output must be a genuine correspondence");
    const TapeAlphabet& al = gadget.n.alphabet();
    require(strip_tape_word(al, inclusion.witness->words[0]) == alpha_cat,
            "tape-1 witness content must spell the matched word");
    require(strip_tape_word(al, inclusion.witness->words[1]) == beta_cat,
            "tape-2 witness content must spell the matched word");

    auto [fn, fm] = gen_pcp_fsm_gadget(solvable);
    require(!check_strong_bounded(fn, fm, 8).pass,
            "the machine form should fail at the same bound");

    PcpInstance hopeless{{{"a", "b"}}};
    auto no_gadget = gen_pcp_gadget(hopeless);
    require(bounded_tuple_inclusion(no_gadget.n, no_gadget.m, 10).pass,
            "inclusion should pass for the unsolvable instance at bound 10");
    auto [hn, hm] = gen_pcp_fsm_gadget(hopeless);
    require(check_strong_bounded(hn, hm, 10).pass,
            "the machine form should pass for the unsolvable instance at bound 10");
}

void criterion_7_embedding_lemma() {
    std::mt19937 rng(7701);
    auto alphabet = testgen::two_tape_alphabet();
    for (int i = 0; i < 50; ++i) {
        auto a = testgen::random_mtfa(rng, alphabet, 3);
        auto b = testgen::random_mtfa(rng, alphabet, 3);
        auto fa = embed_fsm(a);
        auto fb = embed_fsm(b);
        for (int bound = 0; bound <= 5; ++bound) {
            bool tuples = bounded_tuple_inclusion(a, b, bound).pass;
            bool machines = check_strong_bounded(fa, fb, bound).pass;
            require(tuples == machines, "pair " + std::to_string(i) + " diverges at bound " +
                                            std::to_string(bound));
        }
    }
}

void criterion_8_sat_gadget() {
    std::mt19937 rng(88001);
    int instances = 0;
    for (int vars : {2, 3, 4}) {
        for (int clauses : {1, 2}) {
            for (int i = 0; i < 34; ++i) {
                auto inst = testgen::random_sat_instance(rng, vars, clauses);
                auto gadget = gen_sat_gadget(inst);
                require(gadget.bound == vars + 2, "probe bound must be the variable count + 2");
                bool machine_pass = check_strong_bounded(gadget.n, gadget.m, gadget.bound).pass;
                bool solver_pass = solve_one_in_three(inst).has_value();
                require(machine_pass == solver_pass,
                        "gadget and solver disagree at instance " + std::to_string(instances));
                ++instances;
            }
        }
    }
    require(instances >= 200, "sweep must cover at least 200 instances");
}

void criterion_9_special_cases() {
    std::mt19937 rng(90909);
    testgen::FsmShape shape;
    shape.max_states = 3;
    shape.ports = 2;
    shape.all_outputs = true;
    for (int i = 0; i < 50; ++i) {
        MultiPortFsm m = testgen::random_fsm(rng, testgen::random_alphabet(rng, shape), shape);
        MultiPortFsm n = i % 3 == 0   ? testgen::random_fsm(rng, m.alphabet_ref(), shape)
                         : i % 3 == 1 ? testgen::mutate_one_output(rng, m)
                                      : m;
        bool exact = check_strong_all_output_case(n, m).pass;
        bool bounded = check_strong_bounded(n, m, 5).pass;
        require(exact == bounded,
                "all-output pair " + std::to_string(i) + " splits the two deciders");
    }

    testgen::FsmShape counting_shape;
    counting_shape.max_states = 3;
    for (int i = 0; i < 50; ++i) {
        auto alphabet = testgen::counting_alphabet(testgen::pick(rng, 1, 2),
                                                   testgen::pick(rng, 1, 2));
        auto n = testgen::random_fsm(rng, alphabet, counting_shape);
        auto m = testgen::random_fsm(rng, alphabet, counting_shape);
        for (int bound = 0; bound <= 6; ++bound) {
            bool counted = check_parikh_case_bounded(n, m, bound).pass;
            bool exact = check_strong_bounded(n, m, bound).pass;
            require(counted == exact, "counting pair " + std::to_string(i) +
                                          " diverges at bound " + std::to_string(bound));
        }
    }
}

void criterion_10_witness_construction() {
    auto fix = fixtures();
    int built = 0;
    auto exercise = [&](const MultiPortFsm& m, const GlobalTrace& sigma) {
        require(member_pc(sigma, m).member, "candidate trace must pass the prefix-closure check");
        MultiPortFsm w = witness_fsm(m, sigma);
        require(w.replays(sigma), "witness machine must replay the trace");
        int k = static_cast<int>(sigma.steps.size()) + 2;
        require(check_strong_bounded(w, m, k).pass,
                "witness machine must conform at k = trace length + 2");
        ++built;
    };
    for (const MultiPortFsm* m : {&fix.m4, &fix.m5, &fix.m7}) {
        enumerate_bounded(*m, 3, [&](const GlobalTrace& sigma) {
            exercise(*m, sigma);
            return built < 19;
        });
        if (built >= 19) break;
    }
    // One representative that is equivalent to, but not itself, a path label.
    const Alphabet& al = fix.m7.alphabet();
    GlobalTrace reordered{fix.m7.alphabet_ref(),
                          {step_of(al, "x1", {"y1", "-"}), step_of(al, "x2", {"-", "y2'"})}};
    exercise(fix.m7, reordered);
    require(built >= 20, "need at least 20 witness constructions, got " + std::to_string(built));
}

void criterion_11_closure_constructions() {
    std::mt19937 rng(111111);
    auto alphabet = testgen::two_tape_alphabet();
    for (int i = 0; i < 50; ++i) {
        auto a = testgen::random_mtfa(rng, alphabet, 3);
        auto b = testgen::random_mtfa(rng, alphabet, 3);
        auto u = fa_union(a, b);
        auto c = fa_concat(a, b);
        testgen::for_all_tuples(alphabet, 5, [&](const TapeTuple& t) {
            bool in_a = accepts_tuple(a, t).accepted;
            bool in_b = accepts_tuple(b, t).accepted;
            require(accepts_tuple(u, t).accepted == (in_a || in_b),
                    "union law fails on pair " + std::to_string(i));
            require(accepts_tuple(c, t).accepted == testgen::concat_reference(a, b, t),
                    "concatenation law fails on pair " + std::to_string(i));
            return true;
        });
    }
}

void criterion_12_monotonicity_and_determinism() {
    std::mt19937 rng(121212);
    for (int i = 0; i < 25; ++i) {
        testgen::FsmShape shape;
        shape.max_states = 3;
        shape.ports = 2;
        auto [n, m] = testgen::random_fsm_pair(rng, shape);
        bool failed = false;
        for (int k = 0; k <= 4; ++k) {
            bool pass = check_strong_bounded(n, m, k).pass;
            require(!(failed && pass), "a verdict flipped back to pass as the bound grew");
            failed = failed || !pass;
        }
    }

    auto fix = fixtures();
    auto render = [&]() {
        Verdict v = check_strong_bounded(fix.n1, fix.m1, 1);
        nlohmann::ordered_json doc;
        doc["command"] = "check-strong";
        doc.update(verdict_to_json(v));
        return render_report(doc);
    };
    std::string first = render();
    require(!first.empty() && first == render(), "reports must be byte-identical across runs");

    auto render_weak = [&]() {
        WeakVerdict v = check_weak(fix.m1, fix.n1);
        return render_report(weak_verdict_to_json(v, fix.m1.alphabet()));
    };
    require(render_weak() == render_weak(),
            "projection reports must be byte-identical across runs");
}

} // namespace

int main() {
    run(1, "one machine separates per-port inclusion from bounded strong conformance",
        criterion_1_separation);
    run(2, "membership oracle matches the brute-force reference", criterion_2_oracle_equivalence);
    run(3, "membership search stays inside its configuration bound",
        criterion_3_complexity_envelope);
    run(4, "closure membership is not prefix-closed", criterion_4_closure_not_prefix_closed);
    run(5, "self-loop variant and base machine conform both ways at k=6",
        criterion_5_loop_variant_equality);
    run(6, "correspondence gadget fails exactly on solvable instances", criterion_6_pcp_gadget);
    run(7, "tuple inclusion coincides with the embedded machine check",
        criterion_7_embedding_lemma);
    run(8, "satisfiability gadget agrees with the assignment solver", criterion_8_sat_gadget);
    run(9, "exact special-case deciders agree with the bounded engine",
        criterion_9_special_cases);
    run(10, "constructed witness machines replay their trace and conform",
        criterion_10_witness_construction);
    run(11, "union and concatenation obey their tuple-language equations",
        criterion_11_closure_constructions);
    run(12, "verdicts are monotone in the bound and reports deterministic",
        criterion_12_monotonicity_and_determinism);
    return g_failed == 0 ? 0 : 1;
}
