#ifndef MPFSM_MODEL_IO_HPP
#define MPFSM_MODEL_IO_HPP

#include <string>

#include "mpfsm/fsm.hpp"
#include "mpfsm/multitape.hpp"
#include "mpfsm/reductions.hpp"
#include "mpfsm/trace.hpp"

namespace mpfsm {

/// Machine file: line-oriented, `#` starts a comment, blank lines ignored.
///
///   ports N
///   inputs P: sym ...     (one line per port with inputs)
///   outputs P: sym ...    (one line per port with outputs)
///   states id ...
///   initial id
///   trans src IN / (o1, o2, ..., oN) -> dst    (`-` marks an empty slot)
///
/// Declaration order fixes the canonical symbol ordering, so serialization
/// followed by parsing reproduces the machine exactly, and parsing followed
/// by serialization normalizes whitespace only.
MultiPortFsm parse_fsm(const std::string& text);
std::string serialize_fsm(const MultiPortFsm& m);

/// Trace file: one step per line, `IN / (o1, ..., oN)`, resolved against the
/// machine's alphabet.
GlobalTrace parse_trace(const std::string& text, const MultiPortFsm& m);
std::string serialize_trace(const GlobalTrace& trace);

/// Multi-tape automaton file (every state accepts, so there is no
/// final-state clause):
///
///   tapes R
///   alphabet T: sym ...
///   states id ...
///   initial id
///   trans src sym -> dst
MultiTapeFa parse_mtfa(const std::string& text);
std::string serialize_mtfa(const MultiTapeFa& fa);

/// Correspondence instance: one `alpha | beta` line per pair, each side a
/// nonempty word whose characters are the symbols.
PcpInstance parse_pcp(const std::string& text);
std::string serialize_pcp(const PcpInstance& inst);

/// One-in-three instance: `vars R`, then one clause per line as three signed
/// variable indices (`-3` reads as "not z3").
OneInThreeSatInstance parse_sat(const std::string& text);
std::string serialize_sat(const OneInThreeSatInstance& inst);

} // namespace mpfsm

#endif
