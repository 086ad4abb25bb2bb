#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace scp {

/// The fixed primitive library. DFF is the only sequential cell.
enum class CellType : std::uint8_t { INV, BUF, AND2, OR2, NAND2, NOR2, XOR2, XNOR2, DFF };

inline constexpr std::size_t kCellTypeCount = 9;

std::string_view to_string(CellType t) noexcept;
std::optional<CellType> cell_type_from_string(std::string_view name) noexcept;
int arity(CellType t) noexcept;

struct Gate {
  std::string id;
  CellType type = CellType::BUF;
  std::vector<std::string> inputs;
  std::string output;

  bool operator==(const Gate&) const = default;
};

struct Dff {
  std::string d;
  std::string q;

  bool operator==(const Dff&) const = default;
};

/// Structural gate-level circuit. Nets are identified by name.
struct Netlist {
  std::string name;
  std::vector<std::string> primary_inputs;
  std::vector<std::string> primary_outputs;
  std::vector<Gate> gates;
  std::vector<Dff> dffs;

  bool operator==(const Netlist&) const = default;
};

/// Indexed, validated view of a netlist. Construction throws NetlistError
/// on multi-driven nets, undriven loads, wrong arity, duplicate gate ids,
/// or combinational cycles (message lists the gates of one cycle).
class NetlistGraph {
 public:
  enum class DriverKind : std::uint8_t { PrimaryInput, Gate, DffQ };
  struct Driver {
    DriverKind kind;
    std::size_t index;  // into primary_inputs, gates or dffs
  };

  explicit NetlistGraph(const Netlist& netlist);

  std::size_t net_count() const { return names_.size(); }
  std::optional<std::size_t> net_id(std::string_view name) const;
  const std::string& net_name(std::size_t net) const { return names_[net]; }
  const Driver& driver(std::size_t net) const { return drivers_[net]; }

  std::span<const std::size_t> gate_inputs(std::size_t gate) const {
    return {gate_inputs_.data() + gate_offsets_[gate], gate_offsets_[gate + 1] - gate_offsets_[gate]};
  }
  std::size_t gate_output(std::size_t gate) const { return gate_outputs_[gate]; }
  /// Gate indices in topological order.
  std::span<const std::size_t> topo_order() const { return topo_; }
  std::span<const std::size_t> pi_nets() const { return pi_nets_; }
  std::span<const std::size_t> po_nets() const { return po_nets_; }
  std::span<const std::size_t> dff_d_nets() const { return dff_d_; }
  std::span<const std::size_t> dff_q_nets() const { return dff_q_; }
  /// Number of loads (gate pins, DFF d pins, primary outputs) per net.
  std::size_t fanout(std::size_t net) const { return fanout_[net]; }

 private:
  std::size_t intern(const std::string& name);

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<Driver> drivers_;
  std::vector<std::size_t> gate_inputs_;
  std::vector<std::size_t> gate_offsets_;
  std::vector<std::size_t> gate_outputs_;
  std::vector<std::size_t> topo_;
  std::vector<std::size_t> pi_nets_, po_nets_, dff_d_, dff_q_;
  std::vector<std::size_t> fanout_;
};

/// Throws NetlistError if any structural invariant is violated.
void check_netlist(const Netlist& netlist);

Netlist parse_netlist(std::string_view text);
Netlist netlist_from_json(const nlohmann::json& j);
nlohmann::json netlist_to_json(const Netlist& netlist);
std::string save_netlist(const Netlist& netlist);

/// Bit-parallel two-valued simulator: each uint64_t carries 64 independent
/// patterns. Inputs follow `primary_inputs` order, state follows `dffs`.
class Simulator {
 public:
  explicit Simulator(const Netlist& netlist);

  std::size_t input_count() const { return graph_.pi_nets().size(); }
  std::size_t output_count() const { return graph_.po_nets().size(); }
  std::size_t state_count() const { return graph_.dff_q_nets().size(); }

  /// Combinational evaluation of one clock cycle; `next_state` receives the
  /// DFF d values.
  void evaluate(std::span<const std::uint64_t> inputs, std::span<const std::uint64_t> state,
                std::span<std::uint64_t> outputs, std::span<std::uint64_t> next_state);

  const NetlistGraph& graph() const { return graph_; }

 private:
  NetlistGraph graph_;
  std::vector<CellType> types_;
  std::vector<std::uint64_t> values_;
};

}  // namespace scp
