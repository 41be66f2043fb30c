#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mpfsm/constructions.hpp"
#include "mpfsm/errors.hpp"
#include "mpfsm/model_io.hpp"
#include "mpfsm/reductions.hpp"
#include "support/generators.hpp"

using namespace mpfsm;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("the one-state mixed-output machine serializes to the canonical eight lines") {
    auto fix = fixtures();
    CHECK(serialize_fsm(fix.m1) ==
          "ports 2\n"
          "inputs 1: x1\n"
          "outputs 1: y1 y1'\n"
          "outputs 2: y2 y2'\n"
          "states s0\n"
          "initial s0\n"
          "trans s0 x1 / (y1, y2) -> s0\n"
          "trans s0 x1 / (y1', y2') -> s0\n");
}

TEST_CASE("machine files round-trip through parse and serialize") {
    auto fix = fixtures();
    for (const MultiPortFsm* m : {&fix.m1, &fix.n1, &fix.m4, &fix.m5, &fix.m7, &fix.m7_loop,
                                  &fix.m_nonpc}) {
        std::string text = serialize_fsm(*m);
        auto parsed = parse_fsm(text);
        CHECK(parsed == *m);
        CHECK(serialize_fsm(parsed) == text);
    }
}

TEST_CASE("random machines round-trip") {
    std::mt19937 rng(111);
    for (int round = 0; round < 30; ++round) {
        testgen::FsmShape shape;
        shape.max_states = 5;
        shape.ports = testgen::pick(rng, 1, 4);
        shape.max_inputs_per_port = 2;
        auto m = testgen::random_fsm(rng, testgen::random_alphabet(rng, shape), shape);
        auto parsed = parse_fsm(serialize_fsm(m));
        CHECK(parsed == m);
    }
}

TEST_CASE("parsing tolerates comments, blank lines and loose spacing") {
    auto text =
        "# a machine with one state\n"
        "ports 2\n"
        "\n"
        "inputs 1:   x1\n"
        "outputs 1: y1   y1'  # primed variant\n"
        "outputs 2: y2 y2'\n"
        "states   s0\n"
        "initial s0\n"
        "trans s0 x1 / ( y1 , y2 ) -> s0   # the plain pair\n"
        "trans \t s0\tx1  /  (y1',  y2')   ->   s0\n";
    auto fix = fixtures();
    CHECK(parse_fsm(text) == fix.m1);
}

TEST_CASE("machine parse errors carry line numbers") {
    auto expect_error = [](const std::string& text, int line) {
        try {
            parse_fsm(text);
            FAIL_CHECK("expected a parse error for:\n" << text);
        } catch (const ParseError& e) {
            CHECK(e.line() == line);
        }
    };
    expect_error("states s0\n", 1);                      // must open with ports
    expect_error("ports zero\n", 1);                     // bad count
    expect_error("ports 1\nstates s0\ninitial s0\nwut s0\n", 4);
    expect_error("ports 1\ninputs 1: x\nstates s0\ninitial s0\n"
                 "trans s0 x / (y) -> s0\n", 5);         // unknown output symbol
    expect_error("ports 2\ninputs 1: x\noutputs 2: y\nstates s0\ninitial s0\n"
                 "trans s0 x / (y) -> s0\n", 6);         // arity mismatch
    expect_error("ports 1\ninputs 1: x\nstates s0\ninitial s0\n"
                 "trans s0 x / (-) -> s0\ntrans s0 x / (-) -> s0\n", 6); // duplicate
    expect_error("ports 1\ninputs 1: x\nstates s0\ninitial s9\n", 4);
    expect_error("ports 1\ninputs 1: x\ninputs 1: x\nstates s0\ninitial s0\n", 3);
    expect_error("ports 1\ninputs 2: x\nstates s0\ninitial s0\n", 2); // port out of range
    expect_error("ports 1\nstates s0\ninputs 1: x\ninitial s0\n", 3); // symbols after states
    expect_error("ports 1\ninputs 1: x\nstates s0\n", 3);             // missing initial
    expect_error("ports 1\ninputs 1: x\nstates s0 s0\ninitial s0\n", 3);
}

TEST_CASE("trace files resolve against a machine and round-trip") {
    auto fix = fixtures();
    auto text = "x1 / (y1, y2)\nx1 / (y1', y2')\n";
    auto trace = parse_trace(text, fix.m1);
    REQUIRE(trace.steps.size() == 2);
    CHECK(fix.m1.replays(trace));
    CHECK(serialize_trace(trace) == text);

    auto empty = parse_trace("# nothing\n\n", fix.m1);
    CHECK(empty.steps.empty());
    CHECK(serialize_trace(empty) == "");

    auto nulls = parse_trace("x1 / (-, -)\n", fix.m1);
    CHECK(nulls.steps[0].outputs == std::vector<int>{kNullOutput, kNullOutput});
}

TEST_CASE("trace parse errors") {
    auto fix = fixtures();
    CHECK_THROWS_AS(parse_trace("y1 / (y1, y2)\n", fix.m1), ParseError);  // output as input
    CHECK_THROWS_AS(parse_trace("x1 / (y2, y1)\n", fix.m1), ParseError);  // wrong ports
    CHECK_THROWS_AS(parse_trace("x1 / (y1)\n", fix.m1), ParseError);      // arity
    CHECK_THROWS_AS(parse_trace("x1 (y1, y2)\n", fix.m1), ParseError);    // missing slash
    CHECK_THROWS_AS(parse_trace("zz / (y1, y2)\n", fix.m1), ParseError);  // unknown input
}

TEST_CASE("multi-tape automaton files round-trip") {
    auto fix = fixtures();
    for (const MultiTapeFa* fa : {&fix.echo3, &fix.mismatch_m}) {
        std::string text = serialize_mtfa(*fa);
        auto parsed = parse_mtfa(text);
        CHECK(parsed == *fa);
        CHECK(serialize_mtfa(parsed) == text);
    }

    std::mt19937 rng(222);
    for (int round = 0; round < 20; ++round) {
        auto fa = testgen::random_mtfa(rng, testgen::two_tape_alphabet(), 4);
        CHECK(parse_mtfa(serialize_mtfa(fa)) == fa);
    }
}

TEST_CASE("multi-tape parse errors") {
    CHECK_THROWS_AS(parse_mtfa("alphabet 1: a\n"), ParseError);
    CHECK_THROWS_AS(parse_mtfa("tapes 1\nalphabet 1: a\nstates s0\ninitial s0\n"
                               "trans s0 a s0\n"), ParseError); // missing arrow
    CHECK_THROWS_AS(parse_mtfa("tapes 1\nalphabet 1: a a\nstates s0\ninitial s0\n"), ParseError);
    CHECK_THROWS_AS(parse_mtfa("tapes 2\nalphabet 1: a\nstates s0\ninitial s0\n"
                               "trans s0 b -> s0\n"), ParseError); // unknown symbol
}

TEST_CASE("correspondence instance files round-trip") {
    PcpInstance inst{{{"ab", "a"}, {"b", "bb"}}};
    auto text = serialize_pcp(inst);
    CHECK(text == "ab | a\nb | bb\n");
    auto parsed = parse_pcp(text);
    CHECK(parsed.pairs == inst.pairs);
    CHECK(parse_pcp("  ab|a  \n# comment\nb  |bb\n").pairs == inst.pairs);

    CHECK_THROWS_AS(parse_pcp(""), ParseError);
    CHECK_THROWS_AS(parse_pcp("ab a\n"), ParseError);      // no separator
    CHECK_THROWS_AS(parse_pcp("ab | a | b\n"), ParseError); // two separators
    CHECK_THROWS_AS(parse_pcp("| a\n"), ParseError);        // empty side
    CHECK_THROWS_AS(parse_pcp("a? | a\n"), ParseError);     // non-alphanumeric
}

TEST_CASE("satisfiability instance files round-trip") {
    using L = OneInThreeSatInstance::Literal;
    OneInThreeSatInstance inst{3, {{L{1}, L{2, true}, L{3}}, {L{2}, L{2}, L{1, true}}}};
    auto text = serialize_sat(inst);
    CHECK(text == "vars 3\n1 -2 3\n2 2 -1\n");
    auto parsed = parse_sat(text);
    CHECK(parsed.vars == 3);
    CHECK(parsed.clauses == inst.clauses);

    CHECK_THROWS_AS(parse_sat(""), ParseError);
    CHECK_THROWS_AS(parse_sat("vars 2\n1 2\n"), ParseError);     // two literals only
    CHECK_THROWS_AS(parse_sat("vars 2\n1 0 2\n"), ParseError);   // zero literal
    CHECK_THROWS_AS(parse_sat("vars 2\n1 2 3\n"), ParseError);   // out of range
    CHECK_THROWS_AS(parse_sat("clauses\n"), ParseError);
}

TEST_CASE("the committed fixture files match the in-memory fixtures") {
    auto data = std::filesystem::path(MPFSM_DATA_DIR) / "fixtures";
    auto fix = fixtures();
    CHECK(slurp(data / "m1.fsm") == serialize_fsm(fix.m1));
    CHECK(slurp(data / "n1.fsm") == serialize_fsm(fix.n1));
    CHECK(slurp(data / "m4.fsm") == serialize_fsm(fix.m4));
    CHECK(slurp(data / "m5.fsm") == serialize_fsm(fix.m5));
    CHECK(slurp(data / "m7.fsm") == serialize_fsm(fix.m7));
    CHECK(slurp(data / "m7_loop.fsm") == serialize_fsm(fix.m7_loop));
    CHECK(slurp(data / "m_nonpc.fsm") == serialize_fsm(fix.m_nonpc));
    CHECK(slurp(data / "mismatch_m.mtfa") == serialize_mtfa(fix.mismatch_m));
    CHECK(slurp(data / "echo3.mtfa") == serialize_mtfa(fix.echo3));
}

TEST_CASE("every file in the error corpus is rejected with a parse error") {
    auto dir = std::filesystem::path(MPFSM_DATA_DIR) / "error_corpus";
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        ++seen;
        auto ext = entry.path().extension().string();
        auto text = slurp(entry.path());
        INFO("file: " << entry.path().string());
        if (ext == ".fsm") {
            CHECK_THROWS_AS(parse_fsm(text), ParseError);
        } else if (ext == ".mtfa") {
            CHECK_THROWS_AS(parse_mtfa(text), ParseError);
        } else if (ext == ".pcp") {
            CHECK_THROWS_AS(parse_pcp(text), ParseError);
        } else if (ext == ".sat") {
            CHECK_THROWS_AS(parse_sat(text), ParseError);
        } else if (ext == ".tr") {
            auto fix = fixtures();
            CHECK_THROWS_AS(parse_trace(text, fix.m1), ParseError);
        } else {
            FAIL_CHECK("unexpected extension in the error corpus: " << ext);
        }
    }
    CHECK(seen >= 6);
}
