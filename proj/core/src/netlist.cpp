#include "scp/netlist.hpp"

#include <algorithm>
#include <set>

#include "json_util.hpp"
#include "scp/error.hpp"

namespace scp {

using namespace detail;

namespace {

constexpr std::array<std::string_view, kCellTypeCount> kCellNames = {
    "INV", "BUF", "AND2", "OR2", "NAND2", "NOR2", "XOR2", "XNOR2", "DFF"};

}  // namespace

std::string_view to_string(CellType t) noexcept { return kCellNames[static_cast<std::size_t>(t)]; }

std::optional<CellType> cell_type_from_string(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kCellNames.size(); ++i)
    if (kCellNames[i] == name) return static_cast<CellType>(i);
  return std::nullopt;
}

int arity(CellType t) noexcept {
  switch (t) {
    case CellType::INV:
    case CellType::BUF:
    case CellType::DFF: return 1;
    default: return 2;
  }
}

std::size_t NetlistGraph::intern(const std::string& name) {
  auto [it, inserted] = ids_.try_emplace(name, names_.size());
  if (inserted) {
    names_.push_back(name);
    drivers_.push_back({DriverKind::PrimaryInput, SIZE_MAX});
    fanout_.push_back(0);
  }
  return it->second;
}

std::optional<std::size_t> NetlistGraph::net_id(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

NetlistGraph::NetlistGraph(const Netlist& nl) {
  const std::string where = "netlist '" + nl.name + "': ";
  auto set_driver = [&](std::size_t net, Driver d) {
    if (drivers_[net].index != SIZE_MAX)
      throw NetlistError(where + "net '" + names_[net] + "' has multiple drivers");
    drivers_[net] = d;
  };

  for (std::size_t i = 0; i < nl.primary_inputs.size(); ++i) {
    const auto net = intern(nl.primary_inputs[i]);
    set_driver(net, {DriverKind::PrimaryInput, i});
    pi_nets_.push_back(net);
  }
  std::set<std::string> gate_ids;
  gate_offsets_.push_back(0);
  for (std::size_t g = 0; g < nl.gates.size(); ++g) {
    const Gate& gate = nl.gates[g];
    if (!gate_ids.insert(gate.id).second)
      throw NetlistError(where + "duplicate gate id '" + gate.id + "'");
    if (gate.type == CellType::DFF)
      throw NetlistError(where + "gate '" + gate.id + "': DFF must be listed under dffs");
    if (static_cast<int>(gate.inputs.size()) != arity(gate.type))
      throw NetlistError(where + "gate '" + gate.id + "': " + std::string(to_string(gate.type)) +
                         " expects " + std::to_string(arity(gate.type)) + " inputs");
    for (const auto& in : gate.inputs) {
      const auto net = intern(in);
      gate_inputs_.push_back(net);
      ++fanout_[net];
    }
    gate_offsets_.push_back(gate_inputs_.size());
    const auto out = intern(gate.output);
    set_driver(out, {DriverKind::Gate, g});
    gate_outputs_.push_back(out);
  }
  for (std::size_t i = 0; i < nl.dffs.size(); ++i) {
    const auto q = intern(nl.dffs[i].q);
    set_driver(q, {DriverKind::DffQ, i});
    dff_q_.push_back(q);
  }
  for (const auto& dff : nl.dffs) {
    const auto d = intern(dff.d);
    ++fanout_[d];
    dff_d_.push_back(d);
  }
  for (const auto& po : nl.primary_outputs) {
    const auto net = intern(po);
    ++fanout_[net];
    po_nets_.push_back(net);
  }

  for (std::size_t net = 0; net < names_.size(); ++net)
    if (drivers_[net].index == SIZE_MAX)
      throw NetlistError(where + "net '" + names_[net] + "' is used but never driven");

  // Kahn's algorithm over gate-to-gate edges; DFFs break paths.
  const std::size_t n = nl.gates.size();
  std::vector<std::size_t> pending(n, 0);
  std::vector<std::vector<std::size_t>> loads(names_.size());
  for (std::size_t g = 0; g < n; ++g) {
    for (auto in : gate_inputs(g)) {
      if (drivers_[in].kind == DriverKind::Gate) {
        ++pending[g];
        loads[in].push_back(g);
      }
    }
  }
  topo_.reserve(n);
  for (std::size_t g = 0; g < n; ++g)
    if (pending[g] == 0) topo_.push_back(g);
  for (std::size_t head = 0; head < topo_.size(); ++head) {
    for (auto load : loads[gate_outputs_[topo_[head]]])
      if (--pending[load] == 0) topo_.push_back(load);
  }
  if (topo_.size() != n) {
    // Walk backwards from an unresolved gate until a gate repeats.
    std::size_t g = 0;
    while (pending[g] == 0) ++g;
    std::vector<std::size_t> trail;
    std::vector<int> seen(n, -1);
    while (seen[g] < 0) {
      seen[g] = static_cast<int>(trail.size());
      trail.push_back(g);
      for (auto in : gate_inputs(g)) {
        const auto& d = drivers_[in];
        if (d.kind == DriverKind::Gate && pending[d.index] != 0) {
          g = d.index;
          break;
        }
      }
    }
    // trail[k+1] drives trail[k]; print the cycle in signal-flow order.
    std::string cycle = nl.gates[g].id;
    for (std::size_t i = trail.size() - 1; i > static_cast<std::size_t>(seen[g]); --i)
      cycle += " -> " + nl.gates[trail[i]].id;
    cycle += " -> " + nl.gates[g].id;
    throw NetlistError(where + "combinational cycle: " + cycle);
  }
}

void check_netlist(const Netlist& netlist) { NetlistGraph graph(netlist); }

Netlist netlist_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "netlist must be a JSON object");
  Netlist nl;
  nl.name = j.contains("name") ? get_string(j, "name", "") : std::string("netlist");
  nl.primary_inputs = get_string_list(j, "inputs", "");
  nl.primary_outputs = get_string_list(j, "outputs", "");
  const json& gates = require_array(j, "gates", "");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string at = element("gates", i);
    Gate g;
    g.id = get_string(gates[i], "id", at);
    const std::string type = get_string(gates[i], "type", at);
    auto t = cell_type_from_string(type);
    if (!t || *t == CellType::DFF)
      throw NetlistError("gate '" + g.id + "': unknown cell type '" + type + "'");
    g.type = *t;
    g.inputs = get_string_list(gates[i], "inputs", at);
    g.output = get_string(gates[i], "output", at);
    nl.gates.push_back(std::move(g));
  }
  if (auto it = j.find("dffs"); it != j.end()) {
    if (!it->is_array()) throw SchemaError("dffs", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string at = element("dffs", i);
      nl.dffs.push_back({get_string((*it)[i], "d", at), get_string((*it)[i], "q", at)});
    }
  }
  check_netlist(nl);
  return nl;
}

Netlist parse_netlist(std::string_view text) { return netlist_from_json(parse_json(text)); }

json netlist_to_json(const Netlist& nl) {
  json gates = json::array();
  for (const auto& g : nl.gates)
    gates.push_back({{"id", g.id}, {"type", std::string(to_string(g.type))},
                     {"inputs", g.inputs}, {"output", g.output}});
  json dffs = json::array();
  for (const auto& d : nl.dffs) dffs.push_back({{"d", d.d}, {"q", d.q}});
  return {{"name", nl.name}, {"inputs", nl.primary_inputs}, {"outputs", nl.primary_outputs},
          {"gates", gates}, {"dffs", dffs}};
}

std::string save_netlist(const Netlist& netlist) { return netlist_to_json(netlist).dump(1) + "\n"; }

Simulator::Simulator(const Netlist& netlist) : graph_(netlist), values_(graph_.net_count(), 0) {
  types_.reserve(netlist.gates.size());
  for (const auto& g : netlist.gates) types_.push_back(g.type);
}

void Simulator::evaluate(std::span<const std::uint64_t> inputs,
                         std::span<const std::uint64_t> state, std::span<std::uint64_t> outputs,
                         std::span<std::uint64_t> next_state) {
  const auto pis = graph_.pi_nets();
  const auto qs = graph_.dff_q_nets();
  if (inputs.size() != pis.size() || state.size() != qs.size())
    throw Error("simulator: input or state vector has the wrong width");
  for (std::size_t i = 0; i < pis.size(); ++i) values_[pis[i]] = inputs[i];
  for (std::size_t i = 0; i < qs.size(); ++i) values_[qs[i]] = state[i];

  for (auto g : graph_.topo_order()) {
    const auto in = graph_.gate_inputs(g);
    const std::uint64_t a = values_[in[0]];
    const std::uint64_t b = in.size() > 1 ? values_[in[1]] : 0;
    std::uint64_t y = 0;
    switch (types_[g]) {
      case CellType::INV: y = ~a; break;
      case CellType::BUF: y = a; break;
      case CellType::AND2: y = a & b; break;
      case CellType::OR2: y = a | b; break;
      case CellType::NAND2: y = ~(a & b); break;
      case CellType::NOR2: y = ~(a | b); break;
      case CellType::XOR2: y = a ^ b; break;
      case CellType::XNOR2: y = ~(a ^ b); break;
      case CellType::DFF: break;
    }
    values_[graph_.gate_output(g)] = y;
  }

  const auto pos = graph_.po_nets();
  for (std::size_t i = 0; i < pos.size() && i < outputs.size(); ++i) outputs[i] = values_[pos[i]];
  const auto ds = graph_.dff_d_nets();
  for (std::size_t i = 0; i < ds.size() && i < next_state.size(); ++i)
    next_state[i] = values_[ds[i]];
}

}  // namespace scp
