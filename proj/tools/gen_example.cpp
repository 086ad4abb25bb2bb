// Regenerates the shipped example under data/: technologies, module
// sources, the characterized 16-module SoC, its baseline constraints and
// the four-run sweep.
#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scp/characterize.hpp"
#include "scp/fsm.hpp"
#include "scp/metrics.hpp"
#include "scp/netlist.hpp"
#include "scp/rng.hpp"
#include "scp/system_io.hpp"
#include "scp/technology.hpp"
#include "scp/workbench.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scp;

namespace {

struct ModuleRecipe {
  std::string id;
  std::string domain;
  double criticality;
  int data_in;
  int ctrl;
  int regs;
  int levels;
  int width;
  int outs;
  int states;
  int fsm_in;
};

// clang-format off
const std::vector<ModuleRecipe> kRecipes = {
  {"gps_acq",   "gps",   7, 8, 3, 8, 14, 10, 6, 6, 2},
  {"gps_corr",  "gps",   9, 12, 3, 12, 15, 14, 8, 5, 3},
  {"gps_track", "gps",   8, 10, 2, 10, 14, 12, 6, 7, 2},
  {"gps_nav",   "gps",  10, 8, 3, 10, 15, 10, 8, 8, 3},
  {"gps_fft",   "gps",   6, 16, 2, 16, 13, 16, 12, 4, 2},
  {"gps_ctrl",  "gps",   5, 6, 4, 6, 12, 8, 4, 8, 3},
  {"aes",       "accel", 9, 16, 3, 16, 20, 16, 12, 6, 3},
  {"sha",       "accel", 7, 16, 2, 12, 19, 14, 10, 5, 2},
  {"rsa",       "accel", 8, 12, 3, 12, 21, 12, 8, 7, 3},
  {"des",       "accel", 4, 12, 2, 10, 18, 12, 8, 4, 2},
  {"cpu",       "cpu",   6, 16, 4, 20, 17, 20, 16, 8, 3},
  {"mem",       "cpu",   5, 12, 3, 16, 16, 14, 12, 5, 2},
  {"uart",      "io",    2, 4, 2, 6, 8,  6, 4, 4, 2},
  {"spi",       "io",    2, 4, 2, 6, 9,  6, 4, 4, 2},
  {"jtag",      "io",    3, 4, 3, 8, 8,  6, 4, 6, 2},
  {"gpio",      "io",    1, 8, 2, 8, 7,  8, 8, 3, 2},
};
// clang-format on

struct ChannelRecipe {
  std::string src, dst;
  double bandwidth;
  double latency;
};

const std::vector<ChannelRecipe> kChannels = {
    {"gps_fft", "gps_acq", 4.0e9, 1.0e-9},   {"gps_acq", "gps_corr", 4.0e9, 1.0e-9},
    {"gps_corr", "gps_track", 2.0e9, 1.0e-9}, {"gps_ctrl", "gps_track", 0.5e9, 1.5e-9},
    {"gps_track", "gps_nav", 1.0e9, 1.0e-9},  {"gps_nav", "cpu", 0.5e9, 2.0e-9},
    {"cpu", "gps_ctrl", 0.2e9, 2.0e-9},       {"cpu", "mem", 8.0e9, 0.5e-9},
    {"mem", "cpu", 8.0e9, 0.5e-9},            {"cpu", "aes", 1.0e9, 1.0e-9},
    {"aes", "mem", 1.0e9, 1.0e-9},            {"cpu", "sha", 0.8e9, 1.0e-9},
    {"sha", "mem", 0.2e9, 1.0e-9},            {"cpu", "rsa", 0.4e9, 1.0e-9},
    {"rsa", "cpu", 0.4e9, 1.0e-9},            {"cpu", "des", 0.6e9, 1.0e-9},
    {"des", "mem", 0.6e9, 1.0e-9},            {"cpu", "uart", 0.01e9, 3.0e-9},
    {"cpu", "spi", 0.05e9, 3.0e-9},           {"jtag", "cpu", 0.01e9, 3.0e-9},
    {"gpio", "cpu", 0.01e9, 3.0e-9},
};

Technology untrusted_technology() {
  Technology t;
  t.name = "untrusted_advanced";
  auto set = [&](CellType c, double delay_ps, double area_um2, double leak_nw, double energy_fj) {
    t[c] = {delay_ps * 1e-12, area_um2, leak_nw * 1e-9, energy_fj * 1e-15};
  };
  set(CellType::INV, 6, 0.15, 2, 0.3);
  set(CellType::BUF, 9, 0.2, 2.5, 0.4);
  set(CellType::NAND2, 8, 0.2, 3, 0.45);
  set(CellType::NOR2, 10, 0.2, 3, 0.45);
  set(CellType::AND2, 12, 0.25, 3.5, 0.55);
  set(CellType::OR2, 13, 0.25, 3.5, 0.55);
  set(CellType::XOR2, 16, 0.4, 5, 0.9);
  set(CellType::XNOR2, 16, 0.4, 5, 0.9);
  set(CellType::DFF, 20, 1.0, 10, 2.0);
  t.seq_overhead = 30e-12;
  t.activity_factor = 0.1;
  return t;
}

CellType random_gate(Rng& rng) {
  static const CellType kinds[] = {CellType::NAND2, CellType::NAND2, CellType::NOR2, CellType::AND2,
                                   CellType::OR2,   CellType::XOR2,  CellType::XNOR2, CellType::INV,
                                   CellType::BUF};
  return kinds[rng.below(std::size(kinds))];
}

// Layered random datapath: every gate at level l reads one net of level
// l - 1, so the logic depth equals `levels`.
Netlist make_datapath(const ModuleRecipe& r, Rng& rng) {
  Netlist nl;
  nl.name = r.id;
  std::vector<std::vector<std::string>> level(1);
  for (int i = 0; i < r.data_in; ++i) nl.primary_inputs.push_back("d[" + std::to_string(i) + "]");
  for (int i = 0; i < r.ctrl; ++i) nl.primary_inputs.push_back("ctrl[" + std::to_string(i) + "]");
  level[0] = nl.primary_inputs;
  for (int i = 0; i < r.regs; ++i) level[0].push_back("r" + std::to_string(i));

  int gate_no = 0;
  for (int l = 1; l <= r.levels; ++l) {
    level.emplace_back();
    for (int w = 0; w < r.width; ++w) {
      Gate g;
      g.id = "g" + std::to_string(gate_no);
      g.type = random_gate(rng);
      g.output = "n" + std::to_string(gate_no);
      ++gate_no;
      const auto& prev = level[l - 1];
      // Level 1 consumes every ctrl input first so the controller matters.
      if (l == 1 && w < r.ctrl) g.inputs.push_back("ctrl[" + std::to_string(w) + "]");
      else g.inputs.push_back(prev[rng.below(prev.size())]);
      if (arity(g.type) == 2) {
        const auto& src = level[rng.below(static_cast<std::uint64_t>(l))];
        g.inputs.push_back(src[rng.below(src.size())]);
      }
      level[l].push_back(g.output);
      nl.gates.push_back(std::move(g));
    }
  }
  const auto& last = level.back();
  for (int i = 0; i < r.outs; ++i) nl.primary_outputs.push_back(last[static_cast<std::size_t>(i) % last.size()]);
  for (int i = 0; i < r.regs; ++i) {
    const auto& src = level[r.levels - static_cast<int>(rng.below(2))];
    nl.dffs.push_back({src[rng.below(src.size())], "r" + std::to_string(i)});
  }
  return nl;
}

std::string bits(Rng& rng, int width) {
  std::string s;
  for (int i = 0; i < width; ++i) s += rng.bit() ? '1' : '0';
  return s;
}

// Three disjoint cubes per state covering the whole input space.
FsmTable make_fsm(const ModuleRecipe& r, Rng& rng) {
  FsmTable f;
  for (int s = 0; s < r.states; ++s) f.states.push_back("s" + std::to_string(s));
  f.reset_state = "s0";
  f.input_width = r.fsm_in;
  f.output_width = r.ctrl;
  const std::string rest(static_cast<std::size_t>(r.fsm_in - 1), '-');
  const std::string rest2(static_cast<std::size_t>(r.fsm_in - 2), '-');
  for (int s = 0; s < r.states; ++s) {
    const std::string state = f.states[static_cast<std::size_t>(s)];
    auto next = [&] { return f.states[rng.below(f.states.size())]; };
    f.transitions.push_back({state, "1" + rest, next(), bits(rng, r.ctrl)});
    f.transitions.push_back({state, "01" + rest2, next(), bits(rng, r.ctrl)});
    f.transitions.push_back({state, "00" + rest2, next(), bits(rng, r.ctrl)});
  }
  for (int i = 0; i < r.fsm_in; ++i) f.input_nets.push_back("r" + std::to_string(i));
  for (int i = 0; i < r.ctrl; ++i) f.output_nets.push_back("ctrl[" + std::to_string(i) + "]");
  return f;
}

void write_json(const fs::path& p, const json& j) {
  fs::create_directories(p.parent_path());
  write_text_file(p, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_example <data-dir>\n";
    return 2;
  }
  const fs::path data = argv[1];
  try {
    const Technology untrusted = untrusted_technology();
    const Technology trusted = untrusted.scaled("trusted_legacy", 3.0, 8.0, 2.0, 4.0);
    write_json(data / "tech" / "untrusted.json", technology_to_json(untrusted));
    write_json(data / "tech" / "trusted.json", technology_to_json(trusted));

    SystemSpec spec;
    for (std::size_t i = 0; i < kRecipes.size(); ++i) {
      const auto& r = kRecipes[i];
      Rng rng(0x5c9000u + i);
      const fs::path dir = data / "modules" / r.id;
      fs::create_directories(dir);
      write_text_file(dir / "datapath.json", save_netlist(make_datapath(r, rng)) + "\n");
      write_json(dir / "fsm.json", fsm_to_json(make_fsm(r, rng)));
      LockParams lock;
      lock.seed = 101 + i;
      write_json(dir / "lock.json", lock_params_to_json(lock));

      const ModuleSource src = load_module_dir(dir);
      const auto c = characterize_module(src.datapath, src.fsm, trusted, untrusted, src.lock);
      ModuleSpec m;
      m.id = r.id;
      m.clock_domain = r.domain;
      m.criticality = r.criticality;
      m.characterization = c.table;
      spec.modules.push_back(m);
      auto d = spec.domain_index(r.domain);
      if (!d) {
        spec.domains.push_back({r.domain, {}});
        d = spec.domains.size() - 1;
      }
      spec.domains[*d].members.push_back(r.id);
      std::cerr << r.id << ": " << src.datapath.gates.size() << " datapath gates, fmax "
                << c.table[Configuration::Untrusted].fmax / 1e9 << " GHz, key " << c.key_lock.key.size()
                << " bits\n";
    }
    for (const auto& ch : kChannels)
      spec.channels.push_back({ch.src + "->" + ch.dst, ch.src, ch.dst, ch.bandwidth, ch.latency});

    const auto report = validate_system(spec);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& e : report.errors) std::cerr << "error: " << e << "\n";
    if (!report.ok()) return 1;
    fs::create_directories(data / "soc");
    write_text_file(data / "soc" / "example_soc.json", save_system(spec) + "\n");

    ConstraintSet shape;
    shape.external_io_baseline = 2.0e9;
    shape.inter_chip_delay = 2.0e-9;
    shape.latency_constraints.push_back({"gps_fix_path", {"gps_nav->cpu", "cpu->aes"}, kUnbounded});
    const ConstraintSet base = baseline_constraints(spec, shape);
    write_json(data / "soc" / "baseline_constraints.json", constraints_to_json(base));

    const double f_accel = base.domain_f_min.at("accel");
    const double f_cpu = base.domain_f_min.at("cpu");
    const double lat = base.latency_constraints.front().max_latency;
    const json two = config_set_to_json(ConfigSet::without_locking());
    const json all = config_set_to_json(ConfigSet::all());
    SweepSpec sweep;
    sweep.base = base;
    sweep.mode = SweepMode::Zip;
    sweep.axes = {
        {"domain_f_min.accel", {f_accel, f_accel / 3.2, f_accel / 3.2, f_accel / 3.2}},
        {"p_total_max", {base.p_total_max, base.p_total_max * 1.3, base.p_total_max * 1.3, base.p_total_max * 1.3}},
        {"latency.gps_fix_path", {lat, lat + shape.inter_chip_delay, lat + shape.inter_chip_delay,
                                  lat + shape.inter_chip_delay}},
        {"area_total_max", {base.area_total_max, base.area_total_max * 5.0, base.area_total_max * 5.0,
                            base.area_total_max * 5.0}},
        {"io_bandwidth_max", {base.io_bandwidth_max, base.io_bandwidth_max + 3.0e9, base.io_bandwidth_max + 3.0e9,
                              base.io_bandwidth_max + 3.0e9}},
        {"enabled_configs", {two, two, all, all}},
        {"domain_f_min.cpu", {f_cpu, f_cpu, f_cpu, f_cpu / 3.2}},
    };
    write_json(data / "soc" / "four_run_sweep.json", sweep_to_json(sweep));

    for (const auto& r : run_sweep(spec, sweep, 1)) {
      std::cerr << "run " << r.run_id << ": ";
      if (!r.eval) {
        std::cerr << "infeasible\n";
        continue;
      }
      std::cerr << "vulnerability " << r.eval->vulnerability << ", nodes " << r.result.nodes_visited << " |";
      for (std::size_t m = 0; m < spec.modules.size(); ++m)
        std::cerr << " " << spec.modules[m].id << "=" << to_string((*r.result.best)[m]);
      std::cerr << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
