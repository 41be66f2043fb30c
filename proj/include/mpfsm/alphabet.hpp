#ifndef MPFSM_ALPHABET_HPP
#define MPFSM_ALPHABET_HPP

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace mpfsm {

/// Marks an empty output slot in an output tuple.
inline constexpr int kNullOutput = -1;

/// Input/output symbols of a multi-port machine, interned to dense ids.
///
/// Ids follow the canonical declaration order: inputs of port 1..n first,
/// then outputs of port 1..n. All enumeration tie-breaks derive from this
/// ordering, so two machines compare equal only if they declare the same
/// symbols in the same order.
class Alphabet {
public:
    int ports() const { return ports_; }
    int num_symbols() const { return static_cast<int>(names_.size()); }

    const std::string& name(int sym) const { return names_.at(sym); }
    int port_of(int sym) const { return port_of_.at(sym); }
    bool is_input(int sym) const { return is_input_.at(sym); }

    /// Input symbol ids of a port (1-based), declaration order.
    const std::vector<int>& inputs_at(int port) const;
    /// Output symbol ids of a port (1-based), declaration order.
    const std::vector<int>& outputs_at(int port) const;
    /// Every input id in canonical order.
    const std::vector<int>& all_inputs() const { return all_inputs_; }

    std::optional<int> find(const std::string& name) const;
    /// Like find(), but throws UsageError for unknown names.
    int require(const std::string& name) const;

    bool operator==(const Alphabet& other) const;
    bool operator!=(const Alphabet& other) const { return !(*this == other); }

private:
    friend class AlphabetBuilder;

    int ports_ = 0;
    std::vector<std::string> names_;
    std::vector<int> port_of_;
    std::vector<bool> is_input_;
    std::vector<std::vector<int>> inputs_by_port_;
    std::vector<std::vector<int>> outputs_by_port_;
    std::vector<int> all_inputs_;
    std::unordered_map<std::string, int> index_;
};

using AlphabetRef = std::shared_ptr<const Alphabet>;

/// Collects symbol declarations and produces an immutable Alphabet.
class AlphabetBuilder {
public:
    explicit AlphabetBuilder(int ports);

    AlphabetBuilder& input(int port, const std::string& name);
    AlphabetBuilder& output(int port, const std::string& name);

    AlphabetRef build();

private:
    void check_name(const std::string& name) const;
    void check_port(int port) const;

    int ports_;
    std::vector<std::vector<std::string>> inputs_;
    std::vector<std::vector<std::string>> outputs_;
};

/// True if a token may serve as a symbol or state name in model files.
bool valid_symbol_name(const std::string& name);

} // namespace mpfsm

#endif
