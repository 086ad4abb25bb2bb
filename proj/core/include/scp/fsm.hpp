#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scp/netlist.hpp"

namespace scp {

/// One row of a state-transition table. `input` is a cube over {0,1,-}
/// whose k-th character is input bit k; `output` is a bit string.
struct FsmTransition {
  std::string state;
  std::string input;
  std::string next;
  std::string output;

  bool operator==(const FsmTransition&) const = default;
};

/// Explicit Mealy machine. An input vector matched by no row of the current
/// state holds the state and drives all-zero outputs.
struct FsmTable {
  std::vector<std::string> states;
  std::string reset_state;
  int input_width = 0;
  int output_width = 0;
  std::vector<FsmTransition> transitions;
  /// Net names used by the synthesized netlist; "in[k]" / "out[k]" when empty.
  std::vector<std::string> input_nets;
  std::vector<std::string> output_nets;

  std::string input_net(int bit) const;
  std::string output_net(int bit) const;
  bool operator==(const FsmTable&) const = default;
};

inline constexpr int kMaxFsmWidth = 32;

/// Throws NetlistError on unknown states, malformed cubes, or two rows of
/// one state matching a common input vector.
void check_fsm(const FsmTable& fsm);

FsmTable fsm_from_json(const nlohmann::json& j);
FsmTable parse_fsm(std::string_view text);
nlohmann::json fsm_to_json(const FsmTable& fsm);

/// Direct table interpreter. Input and output vectors are packed with bit k
/// holding position k.
class FsmInterpreter {
 public:
  explicit FsmInterpreter(const FsmTable& fsm);

  struct Step {
    std::size_t next;
    std::uint64_t output;
  };

  std::size_t state_count() const { return names_.size(); }
  std::size_t reset() const { return reset_; }
  std::size_t state_index(std::string_view name) const;
  const std::string& state_name(std::size_t s) const { return names_[s]; }
  Step step(std::size_t state, std::uint64_t input) const;

 private:
  struct Row {
    std::uint64_t care;
    std::uint64_t value;
    std::size_t next;
    std::uint64_t output;
  };
  std::vector<std::string> names_;
  std::vector<std::vector<Row>> rows_;  // per state
  std::size_t reset_ = 0;
};

/// Packs a fully specified bit string ("0110") into an integer, bit k = char k.
std::uint64_t pack_bits(std::string_view bits);
std::string unpack_bits(std::uint64_t value, int width);

struct FsmSynthesisOptions {
  std::string reset_net = "rst";
  std::string prefix = "fsm$";  // prefix of every internal net and gate id
};

/// One-hot implementation: one DFF per state (DFF i holds state i, q net
/// `<prefix>s<i>`). While `reset_net` is 1 the next state is the reset state.
/// DFFs power up at 0, so a trace starts with one reset cycle.
Netlist synthesize_fsm(const FsmTable& fsm, const FsmSynthesisOptions& options = {});

}  // namespace scp
