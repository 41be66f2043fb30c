#include "mpfsm/trace.hpp"

#include "mpfsm/errors.hpp"

namespace mpfsm {

GlobalTrace GlobalTrace::prefix(std::size_t len) const {
    GlobalTrace result;
    result.alphabet = alphabet;
    result.steps.assign(steps.begin(), steps.begin() + std::min(len, steps.size()));
    return result;
}

bool GlobalTrace::operator==(const GlobalTrace& other) const {
    if (steps != other.steps)
        return false;
    return alphabet == other.alphabet || (alphabet && other.alphabet && *alphabet == *other.alphabet);
}

bool LocalTraceTuple::operator==(const LocalTraceTuple& other) const {
    if (words != other.words)
        return false;
    return alphabet == other.alphabet || (alphabet && other.alphabet && *alphabet == *other.alphabet);
}

void require_same_alphabet(const AlphabetRef& a, const AlphabetRef& b) {
    if (a == b)
        return;
    if (!a || !b || !(*a == *b))
        throw UsageError("operands declare different alphabets");
}

std::vector<int> project(const GlobalTrace& trace, int port) {
    const Alphabet& alphabet = *trace.alphabet;
    if (port < 1 || port > alphabet.ports())
        throw UsageError("port " + std::to_string(port) + " out of range 1.." +
                         std::to_string(alphabet.ports()));
    std::vector<int> word;
    for (const Step& step : trace.steps) {
        if (alphabet.port_of(step.input) == port)
            word.push_back(step.input);
        int out = step.outputs[port - 1];
        if (out != kNullOutput)
            word.push_back(out);
    }
    return word;
}

LocalTraceTuple project_all(const GlobalTrace& trace) {
    LocalTraceTuple tuple;
    tuple.alphabet = trace.alphabet;
    tuple.words.reserve(trace.alphabet->ports());
    for (int p = 1; p <= trace.alphabet->ports(); ++p)
        tuple.words.push_back(project(trace, p));
    return tuple;
}

bool equivalent(const GlobalTrace& a, const GlobalTrace& b) {
    require_same_alphabet(a.alphabet, b.alphabet);
    for (int p = 1; p <= a.alphabet->ports(); ++p)
        if (project(a, p) != project(b, p))
            return false;
    return true;
}

ClassKey class_key(const GlobalTrace& trace) {
    ClassKey key;
    for (int p = 1; p <= trace.alphabet->ports(); ++p) {
        if (p > 1)
            key.push_back(-2); // separator; never a symbol id
        auto word = project(trace, p);
        key.insert(key.end(), word.begin(), word.end());
    }
    return key;
}

std::string format_step(const Alphabet& alphabet, const Step& step) {
    std::string text = alphabet.name(step.input) + " / (";
    for (int p = 0; p < alphabet.ports(); ++p) {
        if (p > 0)
            text += ", ";
        int out = step.outputs[p];
        text += out == kNullOutput ? "-" : alphabet.name(out);
    }
    return text + ")";
}

std::string format_trace(const GlobalTrace& trace) {
    std::string text;
    for (const Step& step : trace.steps) {
        text += format_step(*trace.alphabet, step);
        text += '\n';
    }
    return text;
}

std::string format_word(const Alphabet& alphabet, const std::vector<int>& word) {
    std::string text;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i > 0)
            text += ' ';
        text += alphabet.name(word[i]);
    }
    return text;
}

} // namespace mpfsm
