#include <doctest.h>

#include <string>
#include <vector>

#include "mpfsm/constructions.hpp"
#include "mpfsm/errors.hpp"
#include "mpfsm/fsm.hpp"
#include "mpfsm/trace.hpp"
#include "support/generators.hpp"

using namespace mpfsm;

TEST_CASE("alphabet assigns canonical ids: inputs per port, then outputs per port") {
    AlphabetBuilder ab(2);
    ab.output(2, "y2").input(1, "x1").output(1, "y1").input(2, "x2");
    auto al = ab.build();
    CHECK(al->num_symbols() == 4);
    CHECK(al->name(0) == "x1");
    CHECK(al->name(1) == "x2");
    CHECK(al->name(2) == "y1");
    CHECK(al->name(3) == "y2");
    CHECK(al->is_input(0));
    CHECK(al->is_input(1));
    CHECK_FALSE(al->is_input(2));
    CHECK(al->port_of(1) == 2);
    CHECK(al->port_of(2) == 1);
    CHECK(al->inputs_at(1) == std::vector<int>{0});
    CHECK(al->outputs_at(2) == std::vector<int>{3});
    CHECK(al->all_inputs() == std::vector<int>{0, 1});
    CHECK(al->find("x2") == 1);
    CHECK_FALSE(al->find("nope").has_value());
    CHECK_THROWS_AS(al->require("nope"), UsageError);
}

TEST_CASE("alphabet rejects bad declarations") {
    CHECK_THROWS_AS(AlphabetBuilder(0), UsageError);
    AlphabetBuilder ab(2);
    ab.input(1, "x1");
    CHECK_THROWS_AS(ab.input(2, "x1"), UsageError);  // duplicate name
    CHECK_THROWS_AS(ab.output(1, "x1"), UsageError); // duplicate across kinds
    CHECK_THROWS_AS(ab.input(3, "x9"), UsageError);  // port out of range
    CHECK_THROWS_AS(ab.input(0, "x9"), UsageError);
    CHECK_THROWS_AS(ab.input(1, ""), UsageError);
    CHECK_THROWS_AS(ab.input(1, "-"), UsageError);
    CHECK_THROWS_AS(ab.input(1, "a b"), UsageError);
    CHECK_THROWS_AS(ab.input(1, "a#b"), UsageError);
    CHECK_THROWS_AS(ab.input(1, "a/b"), UsageError);
    CHECK_THROWS_AS(ab.input(1, "a,b"), UsageError);
}

TEST_CASE("symbol name validity") {
    CHECK(valid_symbol_name("x1"));
    CHECK(valid_symbol_name("y2'"));
    CHECK(valid_symbol_name("z-1"));
    CHECK_FALSE(valid_symbol_name(""));
    CHECK_FALSE(valid_symbol_name("-"));
    CHECK_FALSE(valid_symbol_name("a b"));
    CHECK_FALSE(valid_symbol_name("a(b"));
    CHECK_FALSE(valid_symbol_name("a)b"));
    CHECK_FALSE(valid_symbol_name("a,b"));
    CHECK_FALSE(valid_symbol_name("a#b"));
    CHECK_FALSE(valid_symbol_name("a/b"));
}

TEST_CASE("builder validates states, initial, symbols, arity, duplicates") {
    FsmBuilder fb(2);
    fb.input(1, "x1").output(1, "y1").output(2, "y2");
    fb.state("s0").state("s1");
    CHECK_THROWS_AS(FsmBuilder(fb).state("s0").build(), UsageError); // duplicate state

    SUBCASE("initial must exist") {
        fb.initial("nope");
        CHECK_THROWS_AS(fb.build(), UsageError);
    }
    SUBCASE("initial defaults to the first declared state") {
        fb.transition("s0", "x1", {"y1", "-"}, "s1");
        MultiPortFsm m = fb.build();
        CHECK(m.initial() == 0);
        CHECK(m.state_name(m.initial()) == "s0");
    }
    SUBCASE("unknown source state") {
        fb.initial("s0");
        fb.transition("zz", "x1", {"y1", "-"}, "s1");
        CHECK_THROWS_AS(fb.build(), UsageError);
    }
    SUBCASE("unknown input symbol") {
        fb.initial("s0");
        fb.transition("s0", "y1", {"-", "-"}, "s1"); // output used as input
        CHECK_THROWS_AS(fb.build(), UsageError);
    }
    SUBCASE("output in wrong slot") {
        fb.initial("s0");
        fb.transition("s0", "x1", {"y2", "-"}, "s1"); // y2 belongs to port 2
        CHECK_THROWS_AS(fb.build(), UsageError);
    }
    SUBCASE("arity mismatch") {
        fb.initial("s0");
        fb.transition("s0", "x1", {"y1"}, "s1");
        CHECK_THROWS_AS(fb.build(), UsageError);
    }
    SUBCASE("duplicate transition") {
        fb.initial("s0");
        fb.transition("s0", "x1", {"y1", "y2"}, "s1");
        fb.transition("s0", "x1", {"y1", "y2"}, "s1");
        CHECK_THROWS_AS(fb.build(), UsageError);
    }
    SUBCASE("a machine needs at least one state") {
        FsmBuilder empty(1);
        empty.input(1, "x");
        CHECK_THROWS_AS(empty.build(), UsageError);
    }
}

TEST_CASE("transitions are kept sorted by (input, target, outputs)") {
    FsmBuilder fb(1);
    fb.input(1, "a").input(1, "b").output(1, "y");
    fb.state("s0").state("s1").initial("s0");
    fb.transition("s0", "b", {"-"}, "s0");
    fb.transition("s0", "a", {"y"}, "s1");
    fb.transition("s0", "a", {"-"}, "s1");
    fb.transition("s0", "a", {"y"}, "s0");
    auto m = fb.build();
    const auto& ts = m.transitions_from(0);
    REQUIRE(ts.size() == 4);
    // input a (id 0) before b (id 1); within a: target 0 before 1; within
    // target 1: null output (-1) before y.
    CHECK(ts[0].input == 0);
    CHECK(ts[0].target == 0);
    CHECK(ts[1].input == 0);
    CHECK(ts[1].target == 1);
    CHECK(ts[1].outputs == std::vector<int>{kNullOutput});
    CHECK(ts[2].input == 0);
    CHECK(ts[2].target == 1);
    CHECK(ts[2].outputs == std::vector<int>{2});
    CHECK(ts[3].input == 1);
}

TEST_CASE("well-formedness report on the fixture machines") {
    auto fix = fixtures();
    auto r1 = check_well_formed(fix.m1);
    CHECK(r1.complete);
    CHECK(r1.connected);
    CHECK_FALSE(r1.deterministic);
    CHECK(r1.well_formed());

    auto r4 = check_well_formed(fix.m4);
    CHECK(r4.complete);
    CHECK(r4.connected);
    CHECK(r4.deterministic);

    CHECK(check_well_formed(fix.m5).deterministic);
    CHECK(check_well_formed(fix.m7).deterministic);
    CHECK_FALSE(check_well_formed(fix.m7_loop).deterministic);
    CHECK(check_well_formed(fix.m_nonpc).well_formed());
}

TEST_CASE("incomplete and disconnected machines are reported and repairable") {
    FsmBuilder fb(1);
    fb.input(1, "a").input(1, "b").output(1, "y");
    fb.state("s0").state("s1").state("dead").initial("s0");
    fb.transition("s0", "a", {"y"}, "s1");
    fb.transition("dead", "a", {"-"}, "dead");
    auto m = fb.build();

    auto rep = check_well_formed(m);
    CHECK_FALSE(rep.complete);
    CHECK_FALSE(rep.connected);
    CHECK(rep.unreachable == std::vector<int>{2});
    // missing: (s0, b), (s1, a), (s1, b), (dead, b)
    CHECK(rep.missing.size() == 4);
    CHECK_FALSE(rep.well_formed());

    auto self = complete(m, CompletionPolicy::self_loop_null);
    CHECK(self.num_states() == m.num_states());
    CHECK(check_well_formed(self).complete);
    // defined behaviour untouched
    CHECK(self.transitions_from(0)[0] == m.transitions_from(0)[0]);

    auto err = complete(m, CompletionPolicy::error_state);
    CHECK(err.num_states() == m.num_states() + 1);
    CHECK(check_well_formed(err).complete);

    auto trimmed = trim(self);
    CHECK(trimmed.num_states() == 2);
    CHECK_FALSE(trimmed.find_state("dead").has_value());
    CHECK(check_well_formed(trimmed).well_formed());
}

TEST_CASE("completing an already complete machine is the identity") {
    auto fix = fixtures();
    CHECK(complete(fix.m4, CompletionPolicy::self_loop_null) == fix.m4);
    CHECK(complete(fix.m4, CompletionPolicy::error_state) == fix.m4);
    CHECK(trim(fix.m4) == fix.m4);
}

TEST_CASE("bounded enumeration lists every path label once, preorder") {
    auto fix = fixtures();
    auto traces = enumerate_bounded(fix.m1, 2);
    REQUIRE(traces.size() == 7);
    const Alphabet& al = fix.m1.alphabet();
    int y1 = al.require("y1"), y2 = al.require("y2");
    int y1p = al.require("y1'"), y2p = al.require("y2'");
    Step a{al.require("x1"), {y1, y2}};
    Step b{al.require("x1"), {y1p, y2p}};
    CHECK(traces[0].steps.empty());
    CHECK(traces[1].steps == std::vector<Step>{a});
    CHECK(traces[2].steps == std::vector<Step>{a, a});
    CHECK(traces[3].steps == std::vector<Step>{a, b});
    CHECK(traces[4].steps == std::vector<Step>{b});
    CHECK(traces[5].steps == std::vector<Step>{b, a});
    CHECK(traces[6].steps == std::vector<Step>{b, b});
    for (const auto& t : traces)
        CHECK(fix.m1.replays(t));
}

TEST_CASE("enumeration callback can stop the walk early") {
    auto fix = fixtures();
    int seen = 0;
    enumerate_bounded(fix.m1, 3, [&](const GlobalTrace&) { return ++seen < 3; });
    CHECK(seen == 3);
}

TEST_CASE("replays rejects traces the machine cannot produce") {
    auto fix = fixtures();
    const Alphabet& al = fix.m1.alphabet();
    GlobalTrace mixed{fix.m1.alphabet_ref(),
                      {Step{al.require("x1"), {al.require("y1"), al.require("y2'")}}}};
    CHECK_FALSE(fix.m1.replays(mixed));
    CHECK(fix.n1.replays(mixed));
}

TEST_CASE("projections and observational equivalence") {
    auto fix = fixtures();
    const Alphabet& al = fix.m4.alphabet();
    int x1 = al.require("x1"), x2 = al.require("x2");
    GlobalTrace fwd{fix.m4.alphabet_ref(),
                    {Step{x1, {kNullOutput, kNullOutput}}, Step{x2, {kNullOutput, kNullOutput}}}};
    GlobalTrace rev{fix.m4.alphabet_ref(),
                    {Step{x2, {kNullOutput, kNullOutput}}, Step{x1, {kNullOutput, kNullOutput}}}};
    CHECK(project(fwd, 1) == std::vector<int>{x1});
    CHECK(project(fwd, 2) == std::vector<int>{x2});
    CHECK(equivalent(fwd, rev));
    CHECK(class_key(fwd) == class_key(rev));

    auto tuple = project_all(fwd);
    REQUIRE(tuple.words.size() == 2);
    CHECK(tuple.words[0] == std::vector<int>{x1});
    CHECK(tuple.words[1] == std::vector<int>{x2});

    // Output order within one step is not observable across ports, but the
    // relative order at one port is.
    const Alphabet& a1 = fix.m1.alphabet();
    GlobalTrace one{fix.m1.alphabet_ref(),
                    {Step{a1.require("x1"), {a1.require("y1"), a1.require("y2")}}}};
    GlobalTrace other{fix.m1.alphabet_ref(),
                      {Step{a1.require("x1"), {a1.require("y1'"), a1.require("y2'")}}}};
    CHECK_FALSE(equivalent(one, other));
    CHECK(project(one, 1) == std::vector<int>{a1.require("x1"), a1.require("y1")});
}

TEST_CASE("equivalence of step permutations holds on random traces") {
    std::mt19937 rng(7101);
    for (int round = 0; round < 50; ++round) {
        testgen::FsmShape shape;
        shape.ports = testgen::pick(rng, 2, 3);
        auto al = testgen::random_alphabet(rng, shape);
        auto t = testgen::random_trace(rng, al, 5);
        if (t.steps.size() < 2)
            continue;
        auto swapped = t;
        std::swap(swapped.steps[0], swapped.steps[1]);
        bool keys_equal = class_key(t) == class_key(swapped);
        CHECK(equivalent(t, swapped) == keys_equal);
        CHECK(equivalent(t, t));
    }
}

TEST_CASE("step and trace formatting") {
    auto fix = fixtures();
    const Alphabet& al = fix.m1.alphabet();
    Step s{al.require("x1"), {al.require("y1"), kNullOutput}};
    CHECK(format_step(al, s) == "x1 / (y1, -)");
    GlobalTrace t{fix.m1.alphabet_ref(), {s, s}};
    CHECK(format_trace(t) == "x1 / (y1, -)\nx1 / (y1, -)\n");
    CHECK(format_word(al, {al.require("x1"), al.require("y1'")}) == "x1 y1'");
    CHECK(format_word(al, {}) == "");
}

TEST_CASE("alphabet mismatch is rejected up front") {
    auto fix = fixtures();
    FsmBuilder fb(2);
    fb.input(1, "x1").output(1, "y1").output(1, "y1'").output(2, "y2").output(2, "y2'");
    fb.state("s0").initial("s0");
    fb.transition("s0", "x1", {"y1", "y2"}, "s0");
    auto clone = fb.build(); // same declarations, separately built alphabet

    // Structurally equal alphabets are interchangeable.
    CHECK(clone.alphabet() == fix.m1.alphabet());
    CHECK_NOTHROW(require_same_alphabet(clone.alphabet_ref(), fix.m1.alphabet_ref()));

    FsmBuilder other(1);
    other.input(1, "x1").output(1, "y1");
    other.state("s0").initial("s0");
    other.transition("s0", "x1", {"y1"}, "s0");
    auto different = other.build();
    CHECK_THROWS_AS(require_same_alphabet(different.alphabet_ref(), fix.m1.alphabet_ref()),
                    UsageError);
}

TEST_CASE("random machines from the generator are well formed") {
    std::mt19937 rng(4242);
    for (int round = 0; round < 40; ++round) {
        testgen::FsmShape shape;
        shape.max_states = 5;
        shape.ports = testgen::pick(rng, 1, 3);
        shape.max_inputs_per_port = 2;
        auto [a, b] = testgen::random_fsm_pair(rng, shape);
        CHECK(check_well_formed(a).well_formed());
        CHECK(check_well_formed(b).well_formed());
        CHECK(a.alphabet() == b.alphabet());
    }
}
