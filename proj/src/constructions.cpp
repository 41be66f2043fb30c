#include "mpfsm/constructions.hpp"

#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "mpfsm/errors.hpp"
#include "mpfsm/oracle.hpp"
#include "mpfsm/reductions.hpp"

namespace mpfsm {

namespace {

/// Deterministic sub-machine: per (state, input) keep the least transition
/// under the canonical ordering.
MultiPortFsm restrict_deterministic(const MultiPortFsm& m) {
    FsmBuilder builder(m.alphabet_ref());
    for (int s = 0; s < m.num_states(); ++s) builder.state(m.state_name(s));
    builder.initial(m.state_name(m.initial()));
    const Alphabet& alphabet = m.alphabet();
    auto out_names = [&](const std::vector<int>& outs) {
        std::vector<std::string> names;
        for (int o : outs) names.push_back(o == kNullOutput ? "-" : alphabet.name(o));
        return names;
    };
    for (int s = 0; s < m.num_states(); ++s) {
        int last_input = -1;
        for (const Transition& t : m.transitions_from(s)) {
            if (t.input == last_input) continue; // sorted: first is least
            last_input = t.input;
            builder.transition(m.state_name(s), alphabet.name(t.input), out_names(t.outputs),
                               m.state_name(t.target));
        }
    }
    return builder.build();
}

} // namespace

MultiPortFsm witness_fsm(const MultiPortFsm& m, const GlobalTrace& sigma,
                         const SearchLimits& limits) {
    require_same_alphabet(m.alphabet_ref(), sigma.alphabet);
    PrefixClosureResult pc = member_pc(sigma, m, limits);
    if (!pc.member)
        throw PreconditionError(
            "trace is not in the prefix-closed observational language of the machine");

    const std::size_t k = sigma.steps.size();
    if (k == 0) return trim(restrict_deterministic(m));

    const Alphabet& alphabet = m.alphabet();
    auto out_names = [&](const std::vector<int>& outs) {
        std::vector<std::string> names;
        for (int o : outs) names.push_back(o == kNullOutput ? "-" : alphabet.name(o));
        return names;
    };

    // Fresh chain state names, kept clear of m's.
    std::unordered_set<std::string> used;
    for (int s = 0; s < m.num_states(); ++s) used.insert(m.state_name(s));
    std::vector<std::string> chain;
    for (std::size_t i = 0; i < k; ++i) {
        std::string name = "w" + std::to_string(i);
        while (used.count(name)) name += "_";
        used.insert(name);
        chain.push_back(name);
    }

    FsmBuilder builder(m.alphabet_ref());
    for (const std::string& name : chain) builder.state(name);
    for (int s = 0; s < m.num_states(); ++s) builder.state(m.state_name(s));
    builder.initial(chain[0]);

    for (std::size_t i = 1; i <= k; ++i) {
        const Step& step = sigma.steps[i - 1];
        const std::string& src = chain[i - 1];
        const std::string dst =
            i < k ? chain[i] : m.state_name(pc.prefix_end_states[k]);
        builder.transition(src, alphabet.name(step.input), out_names(step.outputs), dst);

        // Off-chain inputs behave like the anchor state that realizes the
        // same observations as the chain so far.
        const int anchor = pc.prefix_end_states[i - 1];
        int last_input = -1;
        for (const Transition& t : m.transitions_from(anchor)) {
            if (t.input == step.input) continue;
            if (t.input == last_input) continue;
            last_input = t.input;
            builder.transition(src, alphabet.name(t.input), out_names(t.outputs),
                               m.state_name(t.target));
        }
    }
    // Embedded deterministic copy of m.
    for (int s = 0; s < m.num_states(); ++s) {
        int last_input = -1;
        for (const Transition& t : m.transitions_from(s)) {
            if (t.input == last_input) continue;
            last_input = t.input;
            builder.transition(m.state_name(s), alphabet.name(t.input), out_names(t.outputs),
                               m.state_name(t.target));
        }
    }
    return trim(builder.build());
}

FixtureSet fixtures() {
    FixtureSet set;
    {
        FsmBuilder mb(2);
        mb.input(1, "x1");
        mb.output(1, "y1").output(1, "y1'");
        mb.output(2, "y2").output(2, "y2'");
        mb.state("s0").initial("s0");
        mb.transition("s0", "x1", {"y1", "y2"}, "s0");
        mb.transition("s0", "x1", {"y1'", "y2'"}, "s0");
        set.m1 = mb.build();

        FsmBuilder nb(set.m1.alphabet_ref());
        nb.state("s0").initial("s0");
        nb.transition("s0", "x1", {"y1", "y2'"}, "s0");
        set.n1 = nb.build();
    }
    {
        FsmBuilder b(2);
        b.input(1, "x1").input(2, "x2");
        b.output(1, "y1").output(1, "y1'");
        b.output(2, "y2").output(2, "y2'");
        b.state("s0").state("s1").state("s3").state("s4");
        b.initial("s0");
        b.transition("s0", "x1", {"-", "-"}, "s1");
        b.transition("s0", "x2", {"y1'", "y2'"}, "s3");
        b.transition("s1", "x1", {"y1", "y2"}, "s4");
        b.transition("s1", "x2", {"-", "-"}, "s0");
        b.transition("s3", "x1", {"y1'", "y2'"}, "s3");
        b.transition("s3", "x2", {"y1'", "y2'"}, "s3");
        b.transition("s4", "x1", {"y1", "y2"}, "s4");
        b.transition("s4", "x2", {"y1", "y2"}, "s4");
        set.m4 = b.build();
    }
    {
        FsmBuilder b(2);
        b.input(1, "x1").input(2, "x2");
        b.output(1, "y1");
        b.output(2, "y2").output(2, "y2'");
        b.state("s0").state("s1").state("s2");
        b.initial("s0");
        b.transition("s0", "x1", {"y1", "-"}, "s1");
        b.transition("s0", "x2", {"-", "y2'"}, "s2");
        b.transition("s1", "x1", {"y1", "-"}, "s1");
        b.transition("s1", "x2", {"-", "y2"}, "s1");
        b.transition("s2", "x1", {"y1", "-"}, "s2");
        b.transition("s2", "x2", {"-", "y2'"}, "s2");
        set.m7 = b.build();

        FsmBuilder lb(set.m7.alphabet_ref());
        lb.state("s0").state("s1").state("s2");
        lb.initial("s0");
        lb.transition("s0", "x1", {"y1", "-"}, "s0");
        lb.transition("s0", "x1", {"y1", "-"}, "s1");
        lb.transition("s0", "x2", {"-", "y2'"}, "s2");
        lb.transition("s1", "x1", {"y1", "-"}, "s1");
        lb.transition("s1", "x2", {"-", "y2"}, "s1");
        lb.transition("s2", "x1", {"y1", "-"}, "s2");
        lb.transition("s2", "x2", {"-", "y2'"}, "s2");
        set.m7_loop = lb.build();
    }
    {
        FsmBuilder b(2);
        b.input(1, "x1").input(2, "x2");
        b.output(1, "y1");
        b.output(2, "y2");
        b.state("s0").state("s1").state("s2");
        b.initial("s0");
        b.transition("s0", "x1", {"-", "-"}, "s1");
        b.transition("s0", "x2", {"-", "-"}, "s0");
        b.transition("s1", "x1", {"y1", "y2"}, "s2");
        b.transition("s1", "x2", {"-", "-"}, "s0");
        b.transition("s2", "x1", {"-", "-"}, "s2");
        b.transition("s2", "x2", {"-", "-"}, "s2");
        set.m5 = b.build();
    }
    {
        FsmBuilder b(2);
        b.input(1, "x1");
        b.output(1, "y1");
        b.output(2, "y2");
        b.state("s0").state("s1").state("s2");
        b.initial("s0");
        b.transition("s0", "x1", {"y1", "y2"}, "s1");
        b.transition("s1", "x1", {"y1", "-"}, "s2");
        b.transition("s2", "x1", {"-", "-"}, "s2");
        set.m_nonpc = b.build();
    }
    set.mismatch_m = gen_pcp_gadget({{{"a", "b"}}}).m;
    {
        auto alphabet = std::make_shared<const TapeAlphabet>(std::vector<std::vector<std::string>>{
            {"x", "a_1", "b_1"}, {"a_2", "b_2"}, {"x'"}});
        MtfaBuilder b(alphabet);
        b.state("s0").state("s1").state("m_a").state("m_b").state("s2");
        b.initial("s0");
        b.transition("s0", "x'", "s1");
        b.transition("s1", "a_1", "m_a");
        b.transition("m_a", "a_2", "s1");
        b.transition("s1", "b_1", "m_b");
        b.transition("m_b", "b_2", "s1");
        b.transition("s1", "x", "s2");
        set.echo3 = b.build();
    }
    return set;
}

} // namespace mpfsm
