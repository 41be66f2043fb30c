#include "mpfsm/alphabet.hpp"

#include <cctype>

#include "mpfsm/errors.hpp"

namespace mpfsm {

const std::vector<int>& Alphabet::inputs_at(int port) const {
    if (port < 1 || port > ports_)
        throw UsageError("port " + std::to_string(port) + " out of range 1.." + std::to_string(ports_));
    return inputs_by_port_[port - 1];
}

const std::vector<int>& Alphabet::outputs_at(int port) const {
    if (port < 1 || port > ports_)
        throw UsageError("port " + std::to_string(port) + " out of range 1.." + std::to_string(ports_));
    return outputs_by_port_[port - 1];
}

std::optional<int> Alphabet::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

int Alphabet::require(const std::string& name) const {
    auto sym = find(name);
    if (!sym)
        throw UsageError("unknown symbol '" + name + "'");
    return *sym;
}

bool Alphabet::operator==(const Alphabet& other) const {
    return ports_ == other.ports_ && names_ == other.names_ && port_of_ == other.port_of_ &&
           is_input_ == other.is_input_;
}

bool valid_symbol_name(const std::string& name) {
    if (name.empty() || name == "-")
        return false;
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c)))
            return false;
        if (c == '(' || c == ')' || c == ',' || c == '#' || c == '/')
            return false;
    }
    return true;
}

AlphabetBuilder::AlphabetBuilder(int ports) : ports_(ports) {
    if (ports < 1)
        throw UsageError("a machine needs at least one port");
    inputs_.resize(ports);
    outputs_.resize(ports);
}

void AlphabetBuilder::check_name(const std::string& name) const {
    if (!valid_symbol_name(name))
        throw UsageError("invalid symbol name '" + name + "'");
    for (const auto& per_port : inputs_)
        for (const auto& existing : per_port)
            if (existing == name)
                throw UsageError("duplicate symbol '" + name + "'");
    for (const auto& per_port : outputs_)
        for (const auto& existing : per_port)
            if (existing == name)
                throw UsageError("duplicate symbol '" + name + "'");
}

void AlphabetBuilder::check_port(int port) const {
    if (port < 1 || port > ports_)
        throw UsageError("port " + std::to_string(port) + " out of range 1.." + std::to_string(ports_));
}

AlphabetBuilder& AlphabetBuilder::input(int port, const std::string& name) {
    check_port(port);
    check_name(name);
    inputs_[port - 1].push_back(name);
    return *this;
}

AlphabetBuilder& AlphabetBuilder::output(int port, const std::string& name) {
    check_port(port);
    check_name(name);
    outputs_[port - 1].push_back(name);
    return *this;
}

AlphabetRef AlphabetBuilder::build() {
    auto alphabet = std::make_shared<Alphabet>();
    alphabet->ports_ = ports_;
    alphabet->inputs_by_port_.resize(ports_);
    alphabet->outputs_by_port_.resize(ports_);

    auto intern = [&](const std::string& name, int port, bool is_input) {
        int id = static_cast<int>(alphabet->names_.size());
        alphabet->names_.push_back(name);
        alphabet->port_of_.push_back(port);
        alphabet->is_input_.push_back(is_input);
        alphabet->index_.emplace(name, id);
        return id;
    };

    bool any_input = false;
    for (int p = 1; p <= ports_; ++p)
        for (const auto& name : inputs_[p - 1]) {
            int id = intern(name, p, true);
            alphabet->inputs_by_port_[p - 1].push_back(id);
            alphabet->all_inputs_.push_back(id);
            any_input = true;
        }
    for (int p = 1; p <= ports_; ++p)
        for (const auto& name : outputs_[p - 1]) {
            int id = intern(name, p, false);
            alphabet->outputs_by_port_[p - 1].push_back(id);
        }
    if (!any_input)
        throw UsageError("a machine needs at least one input symbol");
    return alphabet;
}

} // namespace mpfsm
