#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scp/fsm.hpp"
#include "scp/netlist.hpp"

namespace scp {

struct LockSite {
  std::string net;        // locked net (original name)
  std::size_t key_index;  // position in LockResult::key
  CellType gate;          // XOR2 for key bit 0, XNOR2 for key bit 1

  bool operator==(const LockSite&) const = default;
};

struct LockResult {
  Netlist locked;
  std::vector<bool> key;
  std::vector<LockSite> sites;
  std::vector<std::string> key_inputs;  // new primary inputs, key[i] drives sites with key_index i

  bool operator==(const LockResult&) const = default;
};

/// Nets that insert_key_xor may lock: non-key primary inputs, then gate
/// outputs, in declaration order.
std::vector<std::string> lockable_nets(const Netlist& netlist);

/// Inserts k key gates at distinct nets drawn uniformly with `seed`. All
/// former loads of a site net are served by the key gate's output, so the
/// circuit is unchanged under the correct key. k = 0 is the identity.
LockResult insert_key_xor(const Netlist& netlist, std::size_t k, std::uint64_t seed);

/// Key as hex: key[0] is the least significant bit of the last digit.
std::string key_to_hex(const std::vector<bool>& key);
std::vector<bool> key_from_hex(const std::string& hex, std::size_t bits);

enum class EquivalenceMode { Auto, Exhaustive, Trace };

inline constexpr std::size_t kExhaustiveInputLimit = 20;

struct EquivalenceOptions {
  EquivalenceMode mode = EquivalenceMode::Auto;
  /// Key to apply; the lock's correct key when unset.
  std::optional<std::vector<bool>> key;
  std::size_t traces = 256;
  std::size_t cycles = 64;
  std::uint64_t seed = 1;
};

struct Counterexample {
  std::vector<bool> inputs;  // original primary inputs
  std::vector<bool> state;   // DFF values of the original before the cycle
  std::size_t trace = 0;
  std::size_t cycle = 0;
};

struct EquivalenceResult {
  bool equivalent = false;
  std::optional<Counterexample> counterexample;
  bool exhaustive = false;
};

/// Compares original and locked circuits with a key applied. Exhaustive
/// mode enumerates every combination of primary inputs and register state
/// (at most 20 bits in total) and compares outputs and next state. Trace
/// mode runs random input traces from the all-zero state. Auto picks
/// exhaustive when it fits, traces for sequential circuits, and otherwise
/// throws Error.
EquivalenceResult check_lock_equivalence(const Netlist& original, const LockResult& lock,
                                         const EquivalenceOptions& options = {});

struct FsmObfResult {
  FsmTable obfuscated;
  std::vector<std::string> key_sequence;  // fully specified input vectors, applied from reset
  std::vector<std::string> chain_states;
  std::vector<std::string> trap_states;

  std::vector<std::string> decoy_states() const;
};

/// Prepends an unlock chain of `chain_len` decoy states to the reset state
/// and adds a closed set of `traps` decoy states. Only the key sequence
/// walks the chain into the original reset state; any other input sends
/// the machine into the trap set, which it never leaves.
FsmObfResult obfuscate_fsm(const FsmTable& fsm, std::size_t chain_len, std::size_t traps,
                           std::uint64_t seed);

}  // namespace scp
