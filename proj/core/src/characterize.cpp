#include "scp/characterize.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

#include "json_util.hpp"
#include "scp/error.hpp"
#include "scp/system_io.hpp"

namespace scp {

using namespace detail;

LockParams lock_params_from_json(const json& j) {
  LockParams p;
  if (!j.is_object()) throw SchemaError("", "lock parameters must be an object");
  if (auto it = j.find("key_gates"); it != j.end() && !it->is_null()) {
    const auto k = as_integer(*it, "key_gates");
    if (k < 0) throw SchemaError("key_gates", "must be >= 0");
    p.key_gates = static_cast<std::size_t>(k);
  }
  p.key_gate_fraction = get_number_or(j, "key_gate_fraction", "", p.key_gate_fraction);
  if (auto it = j.find("chain_len"); it != j.end())
    p.chain_len = static_cast<std::size_t>(as_integer(*it, "chain_len"));
  if (auto it = j.find("traps"); it != j.end())
    p.traps = static_cast<std::size_t>(as_integer(*it, "traps"));
  if (auto it = j.find("seed"); it != j.end())
    p.seed = static_cast<std::uint64_t>(as_integer(*it, "seed"));
  return p;
}

json lock_params_to_json(const LockParams& p) {
  json j = {{"key_gate_fraction", p.key_gate_fraction}, {"chain_len", p.chain_len},
            {"traps", p.traps}, {"seed", p.seed}};
  if (p.key_gates) j["key_gates"] = *p.key_gates;
  return j;
}

Netlist compose(const Netlist& datapath, const Netlist& controller, std::string name) {
  auto internal_nets = [](const Netlist& nl) {
    std::unordered_set<std::string> s;
    for (const auto& g : nl.gates) s.insert(g.output);
    for (const auto& d : nl.dffs) s.insert(d.q);
    return s;
  };
  const auto dp_internal = internal_nets(datapath);
  const auto ct_internal = internal_nets(controller);
  const std::unordered_set<std::string> dp_inputs(datapath.primary_inputs.begin(),
                                                  datapath.primary_inputs.end());
  const std::unordered_set<std::string> ct_inputs(controller.primary_inputs.begin(),
                                                  controller.primary_inputs.end());

  for (const auto& net : ct_internal)
    if (dp_internal.count(net))
      throw NetlistError("compose: net '" + net + "' is driven in both netlists");
  std::set<std::string> ids;
  for (const auto& g : datapath.gates) ids.insert(g.id);
  for (const auto& g : controller.gates)
    if (ids.count(g.id)) throw NetlistError("compose: gate id '" + g.id + "' used in both netlists");

  Netlist out;
  out.name = name.empty() ? datapath.name : std::move(name);
  std::unordered_set<std::string> seen;
  for (const auto& pi : datapath.primary_inputs)
    if (!ct_internal.count(pi) && seen.insert(pi).second) out.primary_inputs.push_back(pi);
  for (const auto& pi : controller.primary_inputs)
    if (!dp_internal.count(pi) && seen.insert(pi).second) out.primary_inputs.push_back(pi);

  seen.clear();
  for (const auto& po : datapath.primary_outputs)
    if (seen.insert(po).second) out.primary_outputs.push_back(po);
  for (const auto& po : controller.primary_outputs)
    if (!dp_inputs.count(po) && seen.insert(po).second) out.primary_outputs.push_back(po);

  out.gates = datapath.gates;
  out.gates.insert(out.gates.end(), controller.gates.begin(), controller.gates.end());
  out.dffs = datapath.dffs;
  out.dffs.insert(out.dffs.end(), controller.dffs.begin(), controller.dffs.end());
  check_netlist(out);
  return out;
}

namespace {

struct Measured {
  ConfigMetrics metrics;
  int iterations = 0;
};

Measured measure(const Netlist& nl, const Technology& tech) {
  const FrequencySearch f = find_max_frequency(nl, tech);
  const PowerEstimate p = estimate_power(nl, tech, f.fmax);
  return {{f.fmax, estimate_area(nl, tech), p.p_dyn, p.p_static}, f.iterations};
}

}  // namespace

CharacterizationResult characterize_module(const Netlist& datapath, const std::optional<FsmTable>& fsm,
                                           const Technology& trusted, const Technology& untrusted,
                                           const LockParams& params) {
  check_netlist(datapath);
  CharacterizationResult r;
  const Netlist base = fsm ? compose(datapath, synthesize_fsm(*fsm)) : datapath;

  std::size_t k = params.key_gates.value_or(std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(params.key_gate_fraction *
                                            static_cast<double>(base.gates.size())))));
  if (!params.key_gates) k = std::min(k, lockable_nets(base).size());
  r.key_lock = insert_key_xor(base, k, params.seed);

  Netlist obf = base;
  if (fsm) {
    r.fsm_lock = obfuscate_fsm(*fsm, params.chain_len, params.traps, params.seed);
    obf = compose(datapath, synthesize_fsm(r.fsm_lock->obfuscated));
  } else {
    r.warnings.push_back("module '" + datapath.name +
                         "' has no FSM; UNTRUSTED_FSM_OBF reuses UNTRUSTED values");
  }

  r.netlists[index_of(Configuration::Trusted)] = base;
  r.netlists[index_of(Configuration::Untrusted)] = base;
  r.netlists[index_of(Configuration::UntrustedKeyLocked)] = r.key_lock.locked;
  r.netlists[index_of(Configuration::UntrustedFsmObf)] = std::move(obf);

  for (auto c : kAllConfigurations) {
    const Technology& tech = c == Configuration::Trusted ? trusted : untrusted;
    const Measured m = measure(r.netlists[index_of(c)], tech);
    r.table[c] = m.metrics;
    r.fmax_iterations[index_of(c)] = m.iterations;
  }
  return r;
}

ModuleSource load_module_dir(const std::filesystem::path& dir) {
  ModuleSource src;
  src.name = dir.filename().string();
  if (src.name.empty()) src.name = dir.parent_path().filename().string();
  src.datapath = parse_netlist(read_text_file(dir / "datapath.json"));
  if (std::filesystem::exists(dir / "fsm.json")) src.fsm = parse_fsm(read_text_file(dir / "fsm.json"));
  if (std::filesystem::exists(dir / "lock.json"))
    src.lock = lock_params_from_json(parse_json(read_text_file(dir / "lock.json")));
  return src;
}

}  // namespace scp
