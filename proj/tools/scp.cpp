#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scp/characterize.hpp"
#include "scp/error.hpp"
#include "scp/locking.hpp"
#include "scp/metrics.hpp"
#include "scp/service.hpp"
#include "scp/system_io.hpp"
#include "scp/technology.hpp"
#include "scp/workbench.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& p) {
  const std::string text = scp::read_text_file(p);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw scp::ParseError(p.string() + ": " + e.what(), 0);
  }
}

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty() || out == "-") std::cout << text;
  else scp::write_text_file(out, text);
}

void print_report(const scp::ValidationReport& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& e : r.errors) std::cerr << "error: " << e << "\n";
}

scp::SystemDocument load_doc(const std::string& path) {
  return scp::load_system_document(scp::read_text_file(path));
}

scp::ConstraintSet constraints_for(const scp::SystemDocument& doc, const std::string& path) {
  if (!path.empty()) return scp::load_constraints(scp::read_text_file(path));
  return doc.constraints.value_or(scp::ConstraintSet{});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-chip partitioning workbench"};
  app.require_subcommand(1);

  std::string system_path, constraints_path, out_path;

  auto* validate = app.add_subcommand("validate", "Check a system file");
  validate->add_option("system", system_path)->required()->check(CLI::ExistingFile);
  validate->add_option("--constraints", constraints_path)->check(CLI::ExistingFile);

  std::string module_dir, trusted_path, untrusted_path, netlist_dir;
  auto* characterize = app.add_subcommand("characterize", "Characterize a module directory");
  characterize->add_option("module-dir", module_dir)->required()->check(CLI::ExistingDirectory);
  characterize->add_option("--trusted", trusted_path, "Trusted-node technology")->required()->check(CLI::ExistingFile);
  characterize->add_option("--untrusted", untrusted_path, "Untrusted-node technology")->required()->check(CLI::ExistingFile);
  characterize->add_option("-o,--output", out_path);
  characterize->add_option("--netlists", netlist_dir, "Write per-configuration netlists here");

  std::string assignment_path;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one assignment");
  evaluate->add_option("system", system_path)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--assignment", assignment_path)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--constraints", constraints_path)->check(CLI::ExistingFile);
  evaluate->add_option("-o,--output", out_path);

  bool disable_locking = false;
  auto* optimize = app.add_subcommand("optimize", "Find the minimum-vulnerability feasible partition");
  optimize->add_option("system", system_path)->required()->check(CLI::ExistingFile);
  optimize->add_option("--constraints", constraints_path)->check(CLI::ExistingFile);
  optimize->add_flag("--disable-locking", disable_locking, "Only TRUSTED and UNTRUSTED");
  optimize->add_option("-o,--output", out_path);

  std::string sweep_path;
  std::size_t workers = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a constraint sweep");
  sweep->add_option("system", system_path)->required()->check(CLI::ExistingFile);
  sweep->add_option("sweep", sweep_path)->required()->check(CLI::ExistingFile);
  sweep->add_option("--workers", workers)->check(CLI::PositiveNumber);
  sweep->add_option("-o,--output", out_path);

  int port = 8080;
  std::string host = "127.0.0.1", persist_path;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
  serve->add_option("system", system_path)->required()->check(CLI::ExistingFile);
  serve->add_option("--port", port);
  serve->add_option("--host", host);
  serve->add_option("--persist", persist_path, "Run history file");

  std::string input_path, key_out;
  std::size_t k = 8, chain = 4, traps = 4;
  std::uint64_t seed = 1;
  auto* lock_xor = app.add_subcommand("lock-xor", "Insert XOR/XNOR key gates");
  lock_xor->add_option("netlist", input_path)->required()->check(CLI::ExistingFile);
  lock_xor->add_option("--k", k);
  lock_xor->add_option("--seed", seed);
  lock_xor->add_option("-o,--output", out_path);
  lock_xor->add_option("--key-out", key_out, "Write the key as hex");

  auto* lock_fsm = app.add_subcommand("lock-fsm", "Obfuscate an FSM with a key sequence");
  lock_fsm->add_option("fsm", input_path)->required()->check(CLI::ExistingFile);
  lock_fsm->add_option("--chain", chain);
  lock_fsm->add_option("--traps", traps);
  lock_fsm->add_option("--seed", seed);
  lock_fsm->add_option("-o,--output", out_path);
  lock_fsm->add_option("--key-out", key_out, "Write the key sequence as a JSON list");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      const auto doc = load_doc(system_path);
      scp::ValidationReport r = scp::validate_system(doc.system);
      if (!constraints_path.empty() || doc.constraints)
        r.merge(scp::validate_constraints(doc.system, constraints_for(doc, constraints_path)));
      print_report(r);
      if (r.ok()) std::cout << "ok: " << doc.system.modules.size() << " modules, " << doc.system.domains.size()
                            << " domains, " << doc.system.channels.size() << " channels\n";
      return r.ok() ? 0 : 1;
    }
    if (*characterize) {
      const auto src = scp::load_module_dir(module_dir);
      const auto trusted = scp::parse_technology(scp::read_text_file(trusted_path));
      const auto untrusted = scp::parse_technology(scp::read_text_file(untrusted_path));
      const auto r = scp::characterize_module(src.datapath, src.fsm, trusted, untrusted, src.lock);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      json out = {{"module", src.name},
                  {"characterization", scp::characterization_to_json(r.table)},
                  {"key", scp::key_to_hex(r.key_lock.key)},
                  {"key_bits", r.key_lock.key.size()}};
      if (r.fsm_lock) out["key_sequence"] = r.fsm_lock->key_sequence;
      if (!netlist_dir.empty()) {
        fs::create_directories(netlist_dir);
        for (auto c : scp::kAllConfigurations)
          scp::write_text_file(fs::path(netlist_dir) / (std::string(scp::to_string(c)) + ".json"),
                               scp::save_netlist(r.netlists[scp::index_of(c)]));
      }
      emit(out, out_path);
      return 0;
    }
    if (*evaluate) {
      const auto doc = load_doc(system_path);
      const auto cfg = scp::configuration_from_json(doc.system, read_json(assignment_path));
      emit(scp::evaluation_to_json(scp::evaluate(doc.system, cfg, constraints_for(doc, constraints_path))), out_path);
      return 0;
    }
    if (*optimize) {
      const auto doc = load_doc(system_path);
      const auto enabled = disable_locking ? scp::ConfigSet::without_locking() : scp::ConfigSet::all();
      const auto r = scp::run_once(doc.system, constraints_for(doc, constraints_path), enabled);
      emit(scp::run_record_to_json(doc.system, r), out_path);
      if (!r.result.best) std::cerr << "no feasible configuration\n";
      return 0;
    }
    if (*sweep) {
      const auto doc = load_doc(system_path);
      const auto spec = scp::sweep_from_json(read_json(sweep_path));
      const auto records = scp::run_sweep(doc.system, spec, workers);
      for (const auto& r : records) {
        std::cerr << "run " << r.run_id << ": ";
        if (r.eval) std::cerr << "vulnerability " << r.eval->vulnerability << "\n";
        else std::cerr << "infeasible\n";
      }
      emit(scp::report_to_json(doc.system, records), out_path);
      return 0;
    }
    if (*serve) {
      auto doc = load_doc(system_path);
      const auto r = scp::validate_system(doc.system);
      print_report(r);
      if (!r.ok()) return 1;
      std::optional<fs::path> persist;
      if (!persist_path.empty()) persist = persist_path;
      scp::serve(std::move(doc), host, port, persist);
      return 0;
    }
    if (*lock_xor) {
      const auto nl = scp::parse_netlist(scp::read_text_file(input_path));
      const auto r = scp::insert_key_xor(nl, k, seed);
      if (!key_out.empty()) scp::write_text_file(key_out, scp::key_to_hex(r.key) + "\n");
      else std::cerr << "key: " << scp::key_to_hex(r.key) << "\n";
      emit(scp::netlist_to_json(r.locked), out_path);
      return 0;
    }
    if (*lock_fsm) {
      const auto fsm = scp::parse_fsm(scp::read_text_file(input_path));
      const auto r = scp::obfuscate_fsm(fsm, chain, traps, seed);
      const json key = r.key_sequence;
      if (!key_out.empty()) scp::write_text_file(key_out, key.dump() + "\n");
      else std::cerr << "key sequence: " << key.dump() << "\n";
      emit(scp::fsm_to_json(r.obfuscated), out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
