#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scp/fsm.hpp"
#include "scp/locking.hpp"
#include "scp/netlist.hpp"
#include "scp/system.hpp"
#include "scp/technology.hpp"
#include "scp/timing.hpp"

namespace scp {

struct LockParams {
  /// Key gates for UNTRUSTED_KEY_LOCKED; ceil(key_gate_fraction * gates),
  /// at least one, when unset.
  std::optional<std::size_t> key_gates;
  double key_gate_fraction = 0.05;
  std::size_t chain_len = 4;
  std::size_t traps = 4;
  std::uint64_t seed = 1;
};

LockParams lock_params_from_json(const nlohmann::json& j);
nlohmann::json lock_params_to_json(const LockParams& p);

/// Connects a datapath to its controller by net name. Controller outputs
/// that are datapath inputs become internal nets; datapath nets that are
/// controller inputs feed the controller. Any other net driven on both
/// sides, or a shared gate id, is a name collision (NetlistError).
Netlist compose(const Netlist& datapath, const Netlist& controller, std::string name = {});

struct CharacterizationResult {
  ModuleCharacterization table;
  std::array<Netlist, kConfigurationCount> netlists;
  std::array<int, kConfigurationCount> fmax_iterations{};
  LockResult key_lock;
  std::optional<FsmObfResult> fsm_lock;
  std::vector<std::string> warnings;
};

/// Builds the netlist of each configuration and measures fmax, area and
/// power at fmax. Modules without an FSM reuse the UNTRUSTED numbers for
/// UNTRUSTED_FSM_OBF and report a warning.
CharacterizationResult characterize_module(const Netlist& datapath, const std::optional<FsmTable>& fsm,
                                           const Technology& trusted, const Technology& untrusted,
                                           const LockParams& params = {});

/// A module directory: datapath.json, optional fsm.json, optional lock.json.
struct ModuleSource {
  std::string name;
  Netlist datapath;
  std::optional<FsmTable> fsm;
  LockParams lock;
};

ModuleSource load_module_dir(const std::filesystem::path& dir);

}  // namespace scp
