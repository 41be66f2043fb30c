#include "mpfsm/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <tuple>
#include <utility>

#include "mpfsm/errors.hpp"

namespace mpfsm {

namespace {

struct Line {
    std::size_t number = 0;
    std::string text;
};

/// Content lines only: comments stripped, blank lines dropped.
std::vector<Line> content_lines(const std::string& text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        ++number;
        pos = end + 1;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos)
            lines.push_back({number, std::move(line)});
        if (pos > text.size()) break;
    }
    return lines;
}

struct Token {
    std::string text;
    std::size_t column = 0; // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ' || line[i] == '\t') {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        tokens.push_back({line.substr(start, i - start), start + 1});
    }
    return tokens;
}

int parse_int(const Token& token, std::size_t line) {
    int value = 0;
    const char* begin = token.text.data();
    const char* end = begin + token.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError("expected an integer, got '" + token.text + "'", line, token.column);
    return value;
}

/// Port token of a declaration line: `P:`.
int parse_port_token(const Token& token, std::size_t line) {
    if (token.text.empty() || token.text.back() != ':')
        throw ParseError("expected 'PORT:' after the directive", line, token.column);
    Token bare{token.text.substr(0, token.text.size() - 1), token.column};
    return parse_int(bare, line);
}

std::vector<std::string> split_tuple(const std::string& inner) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = inner.find(',', pos);
        std::string part = inner.substr(pos, comma == std::string::npos ? std::string::npos
                                                                        : comma - pos);
        std::size_t first = part.find_first_not_of(" \t");
        std::size_t last = part.find_last_not_of(" \t");
        parts.push_back(first == std::string::npos ? std::string()
                                                   : part.substr(first, last - first + 1));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return parts;
}

/// Parses `IN / (o1, ..., oN)` starting at token position `at`; returns the
/// input name and output slot names ("-" for empty).
std::pair<std::string, std::vector<std::string>> parse_step_text(const std::string& line,
                                                                 std::size_t at,
                                                                 std::size_t line_no) {
    std::size_t open = line.find('(', at);
    std::size_t close = line.find(')', open == std::string::npos ? at : open);
    if (open == std::string::npos || close == std::string::npos)
        throw ParseError("expected an output tuple '(o1, ..., oN)'", line_no, at + 1);
    std::vector<Token> head = tokenize(line.substr(at, open - at));
    if (head.size() != 2 || head[1].text != "/")
        throw ParseError("expected 'IN / (o1, ..., oN)'", line_no, at + 1);
    std::vector<std::string> outs = split_tuple(line.substr(open + 1, close - open - 1));
    for (const std::string& name : outs)
        if (name.empty())
            throw ParseError("empty output slot; use '-' for no output", line_no, open + 1);
    return {head[0].text, outs};
}

std::string join_tuple(const std::vector<std::string>& names) {
    std::string out = "(";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
    }
    return out + ")";
}

} // namespace

MultiPortFsm parse_fsm(const std::string& text) {
    std::vector<Line> lines = content_lines(text);
    if (lines.empty())
        throw ParseError("empty machine file", 1);

    enum class Phase { ports, symbols, states, initial, trans };
    Phase phase = Phase::ports;

    int ports = 0;
    // (port, names, line) declarations in file order.
    struct SymDecl {
        bool input;
        int port;
        std::vector<Token> names;
        std::size_t line;
    };
    std::vector<SymDecl> decls;
    std::vector<Token> state_tokens;
    std::size_t states_line = 0;
    std::string initial_name;
    struct TransDecl {
        std::string src, input, dst;
        std::vector<std::string> outs;
        std::size_t line;
    };
    std::vector<TransDecl> trans;

    for (const Line& line : lines) {
        std::vector<Token> tokens = tokenize(line.text);
        const std::string& directive = tokens[0].text;
        if (phase == Phase::ports) {
            if (directive != "ports")
                throw ParseError("expected 'ports N' as the first directive", line.number,
                                 tokens[0].column);
            if (tokens.size() != 2)
                throw ParseError("expected 'ports N'", line.number, tokens[0].column);
            ports = parse_int(tokens[1], line.number);
            if (ports < 1)
                throw ParseError("a machine needs at least one port", line.number,
                                 tokens[1].column);
            phase = Phase::symbols;
            continue;
        }
        if (directive == "inputs" || directive == "outputs") {
            if (phase != Phase::symbols)
                throw ParseError("symbol declarations must precede 'states'", line.number,
                                 tokens[0].column);
            if (tokens.size() < 3)
                throw ParseError("expected '" + directive + " PORT: sym ...'", line.number,
                                 tokens[0].column);
            int port = parse_port_token(tokens[1], line.number);
            if (port < 1 || port > ports)
                throw ParseError("port " + std::to_string(port) + " out of range 1.." +
                                     std::to_string(ports),
                                 line.number, tokens[1].column);
            decls.push_back({directive == "inputs", port,
                             {tokens.begin() + 2, tokens.end()}, line.number});
            continue;
        }
        if (directive == "states") {
            if (phase != Phase::symbols)
                throw ParseError("unexpected 'states' directive", line.number, tokens[0].column);
            if (tokens.size() < 2)
                throw ParseError("expected 'states id ...'", line.number, tokens[0].column);
            state_tokens.assign(tokens.begin() + 1, tokens.end());
            states_line = line.number;
            phase = Phase::initial;
            continue;
        }
        if (directive == "initial") {
            if (phase != Phase::initial)
                throw ParseError("unexpected 'initial' directive", line.number, tokens[0].column);
            if (tokens.size() != 2)
                throw ParseError("expected 'initial id'", line.number, tokens[0].column);
            initial_name = tokens[1].text;
            phase = Phase::trans;
            continue;
        }
        if (directive == "trans") {
            if (phase != Phase::trans)
                throw ParseError("'trans' must follow 'initial'", line.number, tokens[0].column);
            if (tokens.size() < 3)
                throw ParseError("expected 'trans src IN / (o1, ...) -> dst'", line.number,
                                 tokens[0].column);
            std::size_t step_at = tokens[2].column - 1;
            auto [input, outs] = parse_step_text(line.text, step_at, line.number);
            std::size_t close = line.text.find(')', step_at);
            std::vector<Token> tail = tokenize(line.text.substr(close + 1));
            if (tail.size() != 2 || tail[0].text != "->")
                throw ParseError("expected '-> dst' after the output tuple", line.number,
                                 close + 2);
            trans.push_back({tokens[1].text, input, tail[1].text, outs, line.number});
            continue;
        }
        throw ParseError("unknown directive '" + directive + "'", line.number, tokens[0].column);
    }
    if (phase == Phase::ports)
        throw ParseError("missing 'ports' directive", lines.back().number);
    if (phase == Phase::symbols)
        throw ParseError("missing 'states' directive", lines.back().number);
    if (phase == Phase::initial)
        throw ParseError("missing 'initial' directive", lines.back().number);

    FsmBuilder builder(ports);
    for (const SymDecl& decl : decls)
        for (const Token& name : decl.names) {
            try {
                if (decl.input)
                    builder.input(decl.port, name.text);
                else
                    builder.output(decl.port, name.text);
            } catch (const UsageError& e) {
                throw ParseError(e.what(), decl.line, name.column);
            }
        }
    for (const Token& name : state_tokens) {
        try {
            builder.state(name.text);
        } catch (const UsageError& e) {
            throw ParseError(e.what(), states_line, name.column);
        }
    }
    builder.initial(initial_name);

    std::set<std::tuple<std::string, std::string, std::vector<std::string>, std::string>> seen;
    for (const TransDecl& t : trans) {
        if (static_cast<int>(t.outs.size()) != ports)
            throw ParseError("output tuple has " + std::to_string(t.outs.size()) +
                                 " slots; expected " + std::to_string(ports),
                             t.line);
        if (!seen.insert({t.src, t.input, t.outs, t.dst}).second)
            throw ParseError("duplicate transition", t.line);
        try {
            builder.transition(t.src, t.input, t.outs, t.dst);
        } catch (const UsageError& e) {
            throw ParseError(e.what(), t.line);
        }
    }
    try {
        return builder.build();
    } catch (const UsageError& e) {
        throw ParseError(e.what(), lines.back().number);
    }
}

std::string serialize_fsm(const MultiPortFsm& m) {
    const Alphabet& alphabet = m.alphabet();
    std::string out = "ports " + std::to_string(alphabet.ports()) + "\n";
    for (int p = 1; p <= alphabet.ports(); ++p) {
        if (alphabet.inputs_at(p).empty()) continue;
        out += "inputs " + std::to_string(p) + ":";
        for (int sym : alphabet.inputs_at(p)) out += " " + alphabet.name(sym);
        out += "\n";
    }
    for (int p = 1; p <= alphabet.ports(); ++p) {
        if (alphabet.outputs_at(p).empty()) continue;
        out += "outputs " + std::to_string(p) + ":";
        for (int sym : alphabet.outputs_at(p)) out += " " + alphabet.name(sym);
        out += "\n";
    }
    out += "states";
    for (int s = 0; s < m.num_states(); ++s) out += " " + m.state_name(s);
    out += "\ninitial " + m.state_name(m.initial()) + "\n";
    for (int s = 0; s < m.num_states(); ++s)
        for (const Transition& t : m.transitions_from(s)) {
            std::vector<std::string> outs;
            for (int o : t.outputs)
                outs.push_back(o == kNullOutput ? "-" : alphabet.name(o));
            out += "trans " + m.state_name(s) + " " + alphabet.name(t.input) + " / " +
                   join_tuple(outs) + " -> " + m.state_name(t.target) + "\n";
        }
    return out;
}

GlobalTrace parse_trace(const std::string& text, const MultiPortFsm& m) {
    const Alphabet& alphabet = m.alphabet();
    GlobalTrace trace{m.alphabet_ref(), {}};
    for (const Line& line : content_lines(text)) {
        auto [input_name, out_names] = parse_step_text(line.text, 0, line.number);
        auto input = alphabet.find(input_name);
        if (!input || !alphabet.is_input(*input))
            throw ParseError("unknown input '" + input_name + "'", line.number);
        if (static_cast<int>(out_names.size()) != alphabet.ports())
            throw ParseError("output tuple has " + std::to_string(out_names.size()) +
                                 " slots; expected " + std::to_string(alphabet.ports()),
                             line.number);
        Step step;
        step.input = *input;
        for (int p = 1; p <= alphabet.ports(); ++p) {
            const std::string& name = out_names[p - 1];
            if (name == "-") {
                step.outputs.push_back(kNullOutput);
                continue;
            }
            auto sym = alphabet.find(name);
            if (!sym || alphabet.is_input(*sym))
                throw ParseError("unknown output '" + name + "'", line.number);
            if (alphabet.port_of(*sym) != p)
                throw ParseError("output '" + name + "' does not belong to port " +
                                     std::to_string(p),
                                 line.number);
            step.outputs.push_back(*sym);
        }
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

std::string serialize_trace(const GlobalTrace& trace) {
    return format_trace(trace);
}

MultiTapeFa parse_mtfa(const std::string& text) {
    std::vector<Line> lines = content_lines(text);
    if (lines.empty())
        throw ParseError("empty automaton file", 1);

    enum class Phase { tapes, symbols, states, initial, trans };
    Phase phase = Phase::tapes;

    int tapes = 0;
    std::vector<std::vector<std::string>> per_tape;
    std::set<std::string> symbol_names;
    std::vector<Token> state_tokens;
    std::size_t states_line = 0;
    std::string initial_name;
    struct TransDecl {
        std::string src, symbol, dst;
        std::size_t line;
    };
    std::vector<TransDecl> trans;

    for (const Line& line : lines) {
        std::vector<Token> tokens = tokenize(line.text);
        const std::string& directive = tokens[0].text;
        if (phase == Phase::tapes) {
            if (directive != "tapes" || tokens.size() != 2)
                throw ParseError("expected 'tapes R' as the first directive", line.number,
                                 tokens[0].column);
            tapes = parse_int(tokens[1], line.number);
            if (tapes < 1)
                throw ParseError("an automaton needs at least one tape", line.number,
                                 tokens[1].column);
            per_tape.assign(tapes, {});
            phase = Phase::symbols;
            continue;
        }
        if (directive == "alphabet") {
            if (phase != Phase::symbols)
                throw ParseError("alphabet declarations must precede 'states'", line.number,
                                 tokens[0].column);
            if (tokens.size() < 3)
                throw ParseError("expected 'alphabet TAPE: sym ...'", line.number,
                                 tokens[0].column);
            int tape = parse_port_token(tokens[1], line.number);
            if (tape < 1 || tape > tapes)
                throw ParseError("tape " + std::to_string(tape) + " out of range 1.." +
                                     std::to_string(tapes),
                                 line.number, tokens[1].column);
            for (auto it = tokens.begin() + 2; it != tokens.end(); ++it) {
                if (!symbol_names.insert(it->text).second)
                    throw ParseError("duplicate symbol '" + it->text + "'", line.number,
                                     it->column);
                per_tape[tape - 1].push_back(it->text);
            }
            continue;
        }
        if (directive == "states") {
            if (phase != Phase::symbols)
                throw ParseError("unexpected 'states' directive", line.number, tokens[0].column);
            if (tokens.size() < 2)
                throw ParseError("expected 'states id ...'", line.number, tokens[0].column);
            state_tokens.assign(tokens.begin() + 1, tokens.end());
            states_line = line.number;
            phase = Phase::initial;
            continue;
        }
        if (directive == "initial") {
            if (phase != Phase::initial)
                throw ParseError("unexpected 'initial' directive", line.number, tokens[0].column);
            if (tokens.size() != 2)
                throw ParseError("expected 'initial id'", line.number, tokens[0].column);
            initial_name = tokens[1].text;
            phase = Phase::trans;
            continue;
        }
        if (directive == "trans") {
            if (phase != Phase::trans)
                throw ParseError("'trans' must follow 'initial'", line.number, tokens[0].column);
            if (tokens.size() != 5 || tokens[3].text != "->")
                throw ParseError("expected 'trans src sym -> dst'", line.number,
                                 tokens[0].column);
            trans.push_back({tokens[1].text, tokens[2].text, tokens[4].text, line.number});
            continue;
        }
        throw ParseError("unknown directive '" + directive + "'", line.number, tokens[0].column);
    }
    if (phase == Phase::tapes)
        throw ParseError("missing 'tapes' directive", lines.back().number);
    if (phase == Phase::symbols)
        throw ParseError("missing 'states' directive", lines.back().number);
    if (phase == Phase::initial)
        throw ParseError("missing 'initial' directive", lines.back().number);

    TapeAlphabetRef alphabet;
    try {
        alphabet = std::make_shared<const TapeAlphabet>(per_tape);
    } catch (const UsageError& e) {
        throw ParseError(e.what(), lines.front().number);
    }
    MtfaBuilder builder(alphabet);
    for (const Token& name : state_tokens) {
        try {
            builder.state(name.text);
        } catch (const UsageError& e) {
            throw ParseError(e.what(), states_line, name.column);
        }
    }
    builder.initial(initial_name);
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (const TransDecl& t : trans) {
        if (!seen.insert({t.src, t.symbol, t.dst}).second)
            throw ParseError("duplicate transition", t.line);
        builder.transition(t.src, t.symbol, t.dst);
    }
    try {
        return builder.build();
    } catch (const UsageError& e) {
        throw ParseError(e.what(), lines.back().number);
    }
}

std::string serialize_mtfa(const MultiTapeFa& fa) {
    const TapeAlphabet& alphabet = fa.alphabet();
    std::string out = "tapes " + std::to_string(alphabet.tapes()) + "\n";
    for (int t = 1; t <= alphabet.tapes(); ++t) {
        std::vector<int> symbols = alphabet.symbols_at(t);
        if (symbols.empty()) continue;
        out += "alphabet " + std::to_string(t) + ":";
        for (int sym : symbols) out += " " + alphabet.name(sym);
        out += "\n";
    }
    out += "states";
    for (int s = 0; s < fa.num_states(); ++s) out += " " + fa.state_name(s);
    out += "\ninitial " + fa.state_name(fa.initial()) + "\n";
    for (int s = 0; s < fa.num_states(); ++s)
        for (const auto& [sym, target] : fa.transitions_from(s))
            out += "trans " + fa.state_name(s) + " " + alphabet.name(sym) + " -> " +
                   fa.state_name(target) + "\n";
    return out;
}

PcpInstance parse_pcp(const std::string& text) {
    PcpInstance inst;
    for (const Line& line : content_lines(text)) {
        std::size_t bar = line.text.find('|');
        if (bar == std::string::npos)
            throw ParseError("expected 'alpha | beta'", line.number);
        if (line.text.find('|', bar + 1) != std::string::npos)
            throw ParseError("more than one '|' separator", line.number,
                             line.text.find('|', bar + 1) + 1);
        auto strip = [](std::string s) {
            std::size_t first = s.find_first_not_of(" \t");
            if (first == std::string::npos) return std::string();
            std::size_t last = s.find_last_not_of(" \t");
            return s.substr(first, last - first + 1);
        };
        std::string alpha = strip(line.text.substr(0, bar));
        std::string beta = strip(line.text.substr(bar + 1));
        if (alpha.empty() || beta.empty())
            throw ParseError("both sides of a pair must be nonempty", line.number, bar + 1);
        for (const std::string& side : {alpha, beta})
            for (std::size_t i = 0; i < side.size(); ++i)
                if (!std::isalnum(static_cast<unsigned char>(side[i])))
                    throw ParseError("pair characters must be alphanumeric", line.number);
        inst.pairs.emplace_back(alpha, beta);
    }
    if (inst.pairs.empty())
        throw ParseError("instance has no pairs", 1);
    return inst;
}

std::string serialize_pcp(const PcpInstance& inst) {
    std::string out;
    for (const auto& [alpha, beta] : inst.pairs) out += alpha + " | " + beta + "\n";
    return out;
}

OneInThreeSatInstance parse_sat(const std::string& text) {
    std::vector<Line> lines = content_lines(text);
    if (lines.empty())
        throw ParseError("empty instance file", 1);
    std::vector<Token> head = tokenize(lines[0].text);
    if (head[0].text != "vars" || head.size() != 2)
        throw ParseError("expected 'vars R' as the first directive", lines[0].number,
                         head[0].column);
    OneInThreeSatInstance inst;
    inst.vars = parse_int(head[1], lines[0].number);
    if (inst.vars < 1)
        throw ParseError("an instance needs at least one variable", lines[0].number,
                         head[1].column);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::vector<Token> tokens = tokenize(lines[i].text);
        if (tokens.size() != 3)
            throw ParseError("a clause needs exactly three literals", lines[i].number,
                             tokens[0].column);
        std::array<OneInThreeSatInstance::Literal, 3> clause;
        for (int j = 0; j < 3; ++j) {
            int value = parse_int(tokens[j], lines[i].number);
            if (value == 0)
                throw ParseError("literal 0 is not a variable", lines[i].number,
                                 tokens[j].column);
            if (value > inst.vars || value < -inst.vars)
                throw ParseError("literal references undeclared variable z" +
                                     std::to_string(value < 0 ? -value : value),
                                 lines[i].number, tokens[j].column);
            clause[j] = {value < 0 ? -value : value, value < 0};
        }
        inst.clauses.push_back(clause);
    }
    return inst;
}

std::string serialize_sat(const OneInThreeSatInstance& inst) {
    std::string out = "vars " + std::to_string(inst.vars) + "\n";
    for (const auto& clause : inst.clauses) {
        for (int j = 0; j < 3; ++j) {
            if (j) out += " ";
            out += std::to_string(clause[j].negated ? -clause[j].var : clause[j].var);
        }
        out += "\n";
    }
    return out;
}

} // namespace mpfsm
