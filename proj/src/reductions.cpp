#include "mpfsm/reductions.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>

#include "mpfsm/errors.hpp"

namespace mpfsm {

namespace {

void validate_pcp(const PcpInstance& inst) {
    if (inst.pairs.empty())
        throw UsageError("correspondence instance has no pairs");
    for (std::size_t i = 0; i < inst.pairs.size(); ++i)
        if (inst.pairs[i].first.empty() || inst.pairs[i].second.empty())
            throw UsageError("pair " + std::to_string(i + 1) + " has an empty side");
}

std::string f1(char c) { return std::string(1, c) + "_1"; }
std::string f2(char c) { return std::string(1, c) + "_2"; }

void validate_sat(const OneInThreeSatInstance& inst) {
    if (inst.vars < 1)
        throw UsageError("instance declares no variables");
    for (const auto& clause : inst.clauses)
        for (const auto& lit : clause)
            if (lit.var < 1 || lit.var > inst.vars)
                throw UsageError("literal references undeclared variable z" +
                                 std::to_string(lit.var));
}

} // namespace

std::vector<char> PcpInstance::alphabet() const {
    std::set<char> chars;
    for (const auto& [alpha, beta] : pairs) {
        chars.insert(alpha.begin(), alpha.end());
        chars.insert(beta.begin(), beta.end());
    }
    return {chars.begin(), chars.end()};
}

std::optional<std::vector<int>> solve_pcp_bounded(const PcpInstance& inst, int max_indices,
                                                  const SearchLimits& limits) {
    validate_pcp(inst);
    if (max_indices < 0)
        throw UsageError("negative index bound");
    const std::uint64_t budget = limits.effective_max_nodes();
    const int num_pairs = static_cast<int>(inst.pairs.size());

    struct Node {
        std::vector<int> indices;
        std::string top;    // concatenated alpha parts
        std::string bottom; // concatenated beta parts
    };
    // One side must stay a prefix of the other for the stack to ever match.
    auto compatible = [](const std::string& a, const std::string& b) {
        const std::string& shorter = a.size() <= b.size() ? a : b;
        const std::string& longer = a.size() <= b.size() ? b : a;
        return longer.compare(0, shorter.size(), shorter) == 0;
    };

    std::uint64_t explored = 0;
    std::vector<Node> level{{{}, "", ""}};
    for (int len = 1; len <= max_indices && !level.empty(); ++len) {
        std::vector<Node> next;
        for (const Node& node : level) {
            for (int i = 1; i <= num_pairs; ++i) {
                Node grown;
                grown.indices = node.indices;
                grown.indices.push_back(i);
                grown.top = node.top + inst.pairs[i - 1].first;
                grown.bottom = node.bottom + inst.pairs[i - 1].second;
                if (++explored > budget)
                    throw ResourceError("correspondence search exceeded the configured budget");
                if (grown.top == grown.bottom) {
                    // Levels ascend and expansion is in index order, so the
                    // first match is the shortest, lexicographically least
                    // solution. Re-check it from scratch before returning.
                    std::string top, bottom;
                    for (int idx : grown.indices) {
                        top += inst.pairs[idx - 1].first;
                        bottom += inst.pairs[idx - 1].second;
                    }
                    if (top != bottom)
                        throw std::logic_error("solution failed verification");
                    return grown.indices;
                }
                if (compatible(grown.top, grown.bottom)) next.push_back(std::move(grown));
            }
        }
        level = std::move(next);
    }
    return std::nullopt;
}

PcpGadget gen_pcp_gadget(const PcpInstance& inst) {
    validate_pcp(inst);
    const std::vector<char> sigma = inst.alphabet();

    std::vector<std::string> tape1{"x", "x'"};
    std::vector<std::string> tape2;
    for (char c : sigma) tape1.push_back(f1(c));
    for (char c : sigma) tape2.push_back(f2(c));
    auto alphabet = std::make_shared<const TapeAlphabet>(
        std::vector<std::vector<std::string>>{tape1, tape2});

    // n: x, then one or more stacked pairs, then x'. A stacked pair i reads
    // f1 of its top word followed by f2 of its bottom word.
    MtfaBuilder nb(alphabet);
    nb.state("n0").state("h0").state("h1").state("end");
    nb.initial("n0");
    nb.transition("n0", "x", "h0");
    nb.transition("h1", "x'", "end");
    for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
        std::vector<std::string> block;
        for (char c : inst.pairs[i].first) block.push_back(f1(c));
        for (char c : inst.pairs[i].second) block.push_back(f2(c));
        std::vector<std::string> chain{"h0"};
        for (std::size_t j = 1; j < block.size(); ++j) {
            std::string interior = "p" + std::to_string(i + 1) + "_" + std::to_string(j);
            nb.state(interior);
            chain.push_back(interior);
        }
        chain.push_back("h1");
        for (std::size_t j = 0; j < block.size(); ++j)
            nb.transition(chain[j], block[j], chain[j + 1]);
        // Blocks may also start from h1, so any positive number stacks up.
        nb.transition("h1", block[0], chain[1]);
    }

    // m: accepts every tuple n produces except (x f1(w) x', f2(w)). The
    // mid-state cycle cancels equal characters in lockstep; the side states
    // absorb every way the two tracks can disagree.
    MtfaBuilder mb(alphabet);
    mb.state("s0").state("s0'");
    for (char c : sigma) mb.state("m_" + std::string(1, c));
    mb.state("s1").state("s2").state("s3").state("s4").state("s5").state("s6");
    mb.initial("s0");
    mb.transition("s0", "x", "s0'");
    for (char a : sigma) {
        const std::string mid = "m_" + std::string(1, a);
        mb.transition("s0'", f1(a), mid);
        mb.transition(mid, f2(a), "s0'");
        for (char b : sigma)
            if (b != a) mb.transition(mid, f2(b), "s2");
        mb.transition("s0'", f2(a), "s1");
        mb.transition("s0'", f1(a), "s3");
        mb.transition("s1", f2(a), "s1");
        mb.transition("s2", f1(a), "s2");
        mb.transition("s2", f2(a), "s2");
        mb.transition("s3", f1(a), "s3");
    }
    mb.transition("s1", "x'", "s4");
    mb.transition("s2", "x'", "s5");
    mb.transition("s3", "x'", "s6");

    return {nb.build(), mb.build()};
}

std::pair<MultiPortFsm, MultiPortFsm> gen_pcp_fsm_gadget(const PcpInstance& inst) {
    PcpGadget gadget = gen_pcp_gadget(inst);
    return {embed_fsm(gadget.n), embed_fsm(gadget.m)};
}

std::optional<std::vector<bool>> solve_one_in_three(const OneInThreeSatInstance& inst,
                                                    int max_vars) {
    validate_sat(inst);
    if (inst.vars > max_vars)
        throw PreconditionError("instance has more variables than the solver's exhaustive bound (" +
                                std::to_string(max_vars) + ")");
    const std::uint64_t count = std::uint64_t{1} << inst.vars;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        bool ok = true;
        for (const auto& clause : inst.clauses) {
            int satisfied = 0;
            for (const auto& lit : clause) {
                bool value = (mask >> (lit.var - 1)) & 1;
                if (value != lit.negated) ++satisfied;
            }
            if (satisfied != 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            std::vector<bool> assignment(inst.vars);
            for (int v = 0; v < inst.vars; ++v) assignment[v] = (mask >> v) & 1;
            return assignment;
        }
    }
    return std::nullopt;
}

SatGadget gen_sat_gadget(const OneInThreeSatInstance& inst) {
    validate_sat(inst);
    const int r = inst.vars;
    const int q = static_cast<int>(inst.clauses.size());
    if (r < 2)
        throw UsageError("the construction needs at least two variables");

    const int ports = r + q + 2;
    AlphabetBuilder ab(ports);
    ab.input(1, "z-1");
    ab.input(2, "z0");
    for (int p = 1; p <= r; ++p) ab.input(p + 2, "z" + std::to_string(p));
    for (int j = 1; j <= q; ++j) ab.output(r + j + 2, "y" + std::to_string(r + j));
    AlphabetRef alphabet = ab.build();

    auto null_outs = [&] { return std::vector<std::string>(ports, "-"); };
    // Output tuple raised at the monitor port of every clause in `js`.
    auto monitor_outs = [&](const std::vector<int>& js) {
        std::vector<std::string> outs(ports, "-");
        for (int j : js) outs[r + j + 2 - 1] = "y" + std::to_string(r + j);
        return outs;
    };
    auto all_monitors = [&] {
        std::vector<int> js;
        for (int j = 1; j <= q; ++j) js.push_back(j);
        return monitor_outs(js);
    };
    auto zin = [](int p) { return "z" + std::to_string(p); };

    // Clauses watching each literal polarity: pos[p] / neg[p] list the
    // clauses containing z_p / not-z_p in some slot.
    std::vector<std::vector<int>> pos(r + 1), neg(r + 1);
    for (int j = 1; j <= q; ++j)
        for (const auto& lit : inst.clauses[j - 1]) {
            auto& side = lit.negated ? neg[lit.var] : pos[lit.var];
            if (side.empty() || side.back() != j) side.push_back(j);
        }

    // Shared core: s1 self-loops report positive literals, s2 self-loops
    // report negated ones; a probe visiting s1 then s2 collects, per clause,
    // one monitor flash for every satisfied literal of some assignment.
    auto add_core = [&](FsmBuilder& fb) {
        fb.state("s0").state("s1").state("s2").state("s3");
        fb.initial("s0");
        fb.transition("s0", "z-1", null_outs(), "s1");
        fb.transition("s0", "z0", null_outs(), "s0");
        fb.transition("s1", "z-1", null_outs(), "s1");
        fb.transition("s1", "z0", null_outs(), "s2");
        fb.transition("s2", "z-1", null_outs(), "s2");
        fb.transition("s2", "z0", null_outs(), "s2");
        fb.transition("s3", "z-1", null_outs(), "s3");
        fb.transition("s3", "z0", null_outs(), "s3");
        for (int p = 1; p <= r; ++p) {
            fb.transition("s1", zin(p), monitor_outs(pos[p]), "s1");
            fb.transition("s2", zin(p), monitor_outs(neg[p]), "s2");
            fb.transition("s3", zin(p), null_outs(), "s3");
            if (p != 1) fb.transition("s0", zin(p), null_outs(), "s3");
        }
    };
    // The probe input word z1 z-1 z0 z2 .. zr; the final step flashes every
    // monitor at once.
    std::vector<std::string> probe{"z1", "z-1", "z0"};
    for (int p = 2; p <= r; ++p) probe.push_back(zin(p));

    SatGadget gadget;
    gadget.bound = r + 2;
    gadget.port_map.emplace_back(-1, 1);
    gadget.port_map.emplace_back(0, 2);
    for (int p = 1; p <= r; ++p) gadget.port_map.emplace_back(p, p + 2);
    for (int j = 1; j <= q; ++j) gadget.port_map.emplace_back(r + j, r + j + 2);

    {
        // n: from s0, input z1 commits to a chain that replays the probe
        // exactly; any deviation falls into the silent sink.
        FsmBuilder fb(alphabet);
        add_core(fb);
        const int chain_len = r + 2;
        for (int i = 1; i <= chain_len; ++i) fb.state("c" + std::to_string(i));
        fb.transition("s0", probe[0], null_outs(), "c1");
        for (int i = 1; i < chain_len; ++i) {
            const std::string src = "c" + std::to_string(i);
            const std::string dst = "c" + std::to_string(i + 1);
            bool last = i + 1 == chain_len;
            fb.transition(src, probe[i], last ? all_monitors() : null_outs(), dst);
            for (int sym : alphabet->all_inputs()) {
                if (alphabet->name(sym) == probe[i]) continue;
                fb.transition(src, alphabet->name(sym), null_outs(), "s3");
            }
        }
        for (int sym : alphabet->all_inputs())
            fb.transition("c" + std::to_string(chain_len), alphabet->name(sym), null_outs(), "s3");
        gadget.n = fb.build();
    }
    {
        // m: after z1 it grants one arbitrary input, then demands the rest
        // of the probe. The grace step lets m match every observation of n
        // except, when no assignment works, the probe itself.
        FsmBuilder fb(alphabet);
        add_core(fb);
        const int chain_len = r + 2;
        for (int i = 0; i <= chain_len; ++i) fb.state("t" + std::to_string(i));
        fb.transition("s0", probe[0], null_outs(), "t0");
        for (int sym : alphabet->all_inputs())
            fb.transition("t0", alphabet->name(sym), null_outs(), "t1");
        for (int i = 1; i < chain_len; ++i) {
            const std::string src = "t" + std::to_string(i);
            const std::string dst = "t" + std::to_string(i + 1);
            bool last = i + 1 == chain_len;
            fb.transition(src, probe[i], last ? all_monitors() : null_outs(), dst);
            for (int sym : alphabet->all_inputs()) {
                if (alphabet->name(sym) == probe[i]) continue;
                fb.transition(src, alphabet->name(sym), null_outs(), "s3");
            }
        }
        for (int sym : alphabet->all_inputs())
            fb.transition("t" + std::to_string(chain_len), alphabet->name(sym), null_outs(), "s3");
        gadget.m = fb.build();
    }
    return gadget;
}

} // namespace mpfsm
