// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 when
// any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "instances.hpp"
#include "scp/characterize.hpp"
#include "scp/locking.hpp"
#include "scp/metrics.hpp"
#include "scp/optimizer.hpp"
#include "scp/system_io.hpp"
#include "scp/timing.hpp"
#include "scp/workbench.hpp"

using namespace scp;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Soc {
  SystemSpec spec;
  ConstraintSet baseline;
  SweepSpec sweep;
};

const Soc& soc() {
  static const Soc s = [] {
    const auto dir = fx::data_dir() / "soc";
    Soc r;
    r.spec = load_system(read_text_file(dir / "example_soc.json"));
    r.baseline = load_constraints(read_text_file(dir / "baseline_constraints.json"));
    r.sweep = sweep_from_json(nlohmann::json::parse(read_text_file(dir / "four_run_sweep.json")));
    return r;
  }();
  return s;
}

bool precedes(const SystemSpec& spec, const SystemConfiguration& a, const SystemConfiguration& b) {
  const double va = vulnerability(spec, a), vb = vulnerability(spec, b);
  if (va != vb) return va < vb;
  return tie_break(a, b, spec) < 0;
}

Outcome oracle_equivalence() {
  Rng rng(0xacc1);
  const auto t0 = Clock::now();
  int match = 0;
  const int total = 200;
  for (int i = 0; i < total; ++i) {
    const bool coarse = i % 4 == 0;
    const SystemSpec spec = fx::random_system(rng, 1 + rng.below(10), coarse);
    const ConstraintSet cs =
        coarse ? fx::random_constraints_coarse(rng, spec) : fx::random_constraints(rng, spec);
    const auto bf = brute_force(spec, cs);
    const auto bb = branch_and_bound(spec, cs);
    const bool same_vuln = bf.best_eval.has_value() == bb.best_eval.has_value() &&
                           (!bf.best_eval || bf.best_eval->vulnerability == bb.best_eval->vulnerability);
    if (bf.best == bb.best && same_vuln) ++match;
  }
  const double secs = seconds_since(t0);
  return {match == total && secs < 60, fmt("%d/%d identical, %.2f s", match, total, secs)};
}

Outcome pruning_soundness() {
  Rng rng(0xacc2);
  std::uint64_t events = 0, checked = 0, violations = 0;
  for (int i = 0; i < 50; ++i) {
    const SystemSpec spec = fx::random_system(rng, 2 + rng.below(7), i % 3 == 0);
    const ConstraintSet cs = fx::random_constraints(rng, spec);
    OptimizerOptions opt;
    opt.on_prune = [&](const PruneEvent& e) {
      ++events;
      fx::for_each_completion(spec, e.node.partial, opt.enabled, [&](const SystemConfiguration& c) {
        ++checked;
        if (!evaluate(spec, c, cs).feasible) return;
        if (!e.incumbent || precedes(spec, c, *e.incumbent)) ++violations;
      });
    };
    branch_and_bound(spec, cs, opt);
  }
  return {violations == 0 && events > 0,
          fmt("%llu pruned subtrees, %llu leaves expanded, %llu violations", (unsigned long long)events,
              (unsigned long long)checked, (unsigned long long)violations)};
}

Outcome run0_reproduction() {
  const auto& s = soc();
  const auto all_u = SystemConfiguration::uniform(s.spec, Configuration::Untrusted);
  // Precondition: each single-module move off UNTRUSTED breaks a bound.
  for (std::size_t m = 0; m < s.spec.modules.size(); ++m)
    for (auto c : {Configuration::Trusted, Configuration::UntrustedKeyLocked, Configuration::UntrustedFsmObf}) {
      auto cfg = all_u;
      cfg.assignment[m] = c;
      if (evaluate(s.spec, cfg, s.baseline).feasible)
        return {false, "precondition: " + s.spec.modules[m].id + " " + std::string(to_string(c)) + " feasible"};
    }
  const auto r = run_once(s.spec, s.baseline);
  const bool ok = r.result.best && *r.result.best == all_u && r.result.proven_optimal;
  return {ok, fmt("all UNTRUSTED: %s, vulnerability %.4g", ok ? "yes" : "no", r.eval ? r.eval->vulnerability : -1.0)};
}

Outcome sweep_narrative() {
  const auto t0 = Clock::now();
  const auto records = run_sweep(soc().spec, soc().sweep, 1);
  const double secs = seconds_since(t0);
  std::vector<double> v;
  for (const auto& r : records) v.push_back(r.eval ? r.eval->vulnerability : NAN);
  const bool ok = v.size() == 4 && v[0] > v[1] && v[1] >= v[2] && v[2] >= v[3] && secs < 5;
  std::ostringstream d;
  for (double x : v) d << x << " ";
  d << fmt("in %.3g s", secs);
  return {ok, d.str()};
}

Outcome monotonicity() {
  Rng rng(0xacc5);
  int pairs = 0, violations = 0;
  while (pairs < 100) {
    const SystemSpec spec = fx::random_system(rng, 2 + rng.below(9));
    const ConstraintSet tight = fx::random_constraints(rng, spec);
    ConstraintSet loose = tight;
    const double f = rng.uniform(1.05, 2.0);
    switch (rng.below(7)) {
      case 0: loose.p_total_max *= f; break;
      case 1: loose.area_total_max *= f; break;
      case 2: loose.io_bandwidth_max *= f; break;
      case 3: loose.p_trusted_max = tight.p_trusted_max == kUnbounded ? kUnbounded : tight.p_trusted_max * f; break;
      case 4: loose.p_untrusted_max = tight.p_untrusted_max == kUnbounded ? kUnbounded : tight.p_untrusted_max * f; break;
      case 5:
        if (loose.domain_f_min.empty()) continue;
        loose.domain_f_min.begin()->second /= f;
        break;
      default:
        if (loose.latency_constraints.empty()) continue;
        loose.latency_constraints[0].max_latency *= f;
        break;
    }
    ++pairs;
    const auto a = branch_and_bound(spec, tight), b = branch_and_bound(spec, loose);
    if (a.best && (!b.best || b.best_eval->vulnerability > a.best_eval->vulnerability)) ++violations;
  }
  return {violations == 0, fmt("%d pairs, %d violations", pairs, violations)};
}

Outcome locking_transparency() {
  Rng rng(0xacc6);
  int pass = 0;
  const int total = 100;
  for (int i = 0; i < total; ++i) {
    const Netlist nl = fx::random_netlist(rng, 1 + rng.below(12), 1 + rng.below(60));
    const std::size_t k = std::min<std::size_t>(1 + rng.below(10), lockable_nets(nl).size());
    const auto lock = insert_key_xor(nl, k, rng.next());
    EquivalenceOptions opt;
    opt.mode = EquivalenceMode::Exhaustive;
    const auto eq = check_lock_equivalence(nl, lock, opt);
    if (eq.equivalent && eq.exhaustive) ++pass;
  }
  return {pass == total, fmt("%d/%d exhaustively equivalent", pass, total)};
}

std::set<std::size_t> reachable(const FsmInterpreter& it, int width, std::size_t from) {
  std::set<std::size_t> seen = {from};
  std::deque<std::size_t> work = {from};
  while (!work.empty()) {
    const std::size_t s = work.front();
    work.pop_front();
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) {
      const std::size_t n = it.step(s, v).next;
      if (seen.insert(n).second) work.push_back(n);
    }
  }
  return seen;
}

Outcome fsm_safety_liveness() {
  Rng rng(0xacc7);
  int pass = 0;
  const int total = 100;
  for (int i = 0; i < total; ++i) {
    const FsmTable f = fx::random_fsm(rng, 1 + rng.below(16), 1 + static_cast<int>(rng.below(4)),
                                      1 + static_cast<int>(rng.below(3)));
    const std::size_t len = 1 + rng.below(6);
    const auto r = obfuscate_fsm(f, len, 1 + rng.below(4), rng.next());
    const FsmInterpreter it(r.obfuscated);
    const std::set<std::string> original(f.states.begin(), f.states.end());
    bool ok = true;
    const std::uint64_t first = pack_bits(r.key_sequence.at(0));
    for (std::uint64_t v = 0; ok && v < (std::uint64_t{1} << f.input_width); ++v) {
      if (v == first) continue;
      for (auto s : reachable(it, f.input_width, it.step(it.reset(), v).next))
        if (original.count(it.state_name(s))) ok = false;
    }
    std::size_t s = it.reset();
    for (std::size_t j = 0; j < len; ++j) {
      if (original.count(it.state_name(s))) ok = false;
      s = it.step(s, pack_bits(r.key_sequence[j])).next;
    }
    if (r.key_sequence.size() != len || it.state_name(s) != f.reset_state) ok = false;
    if (ok) ++pass;
  }
  return {pass == total, fmt("%d/%d", pass, total)};
}

Outcome fmax_loop() {
  const Technology trusted = parse_technology(read_text_file(fx::data_dir() / "tech" / "trusted.json"));
  const Technology untrusted = parse_technology(read_text_file(fx::data_dir() / "tech" / "untrusted.json"));
  std::vector<Netlist> netlists;
  Rng rng(0xacc8);
  for (int i = 0; i < 100; ++i) netlists.push_back(fx::random_netlist(rng, 1 + rng.below(12), 1 + rng.below(60)));
  for (int i = 0; i < 50; ++i)
    netlists.push_back(fx::random_netlist(rng, 2 + rng.below(8), 1 + rng.below(60), 1 + rng.below(6)));
  for (int i = 0; i < 30; ++i)
    netlists.push_back(synthesize_fsm(fx::random_fsm(rng, 1 + rng.below(16), 1 + static_cast<int>(rng.below(4)), 2)));
  for (const auto& e : std::filesystem::directory_iterator(fx::data_dir() / "modules")) {
    const auto src = load_module_dir(e.path());
    const auto r = characterize_module(src.datapath, src.fsm, trusted, untrusted, src.lock);
    for (const auto& nl : r.netlists) netlists.push_back(nl);
  }
  std::size_t pass = 0, runs = 0;
  int worst_iter = 0;
  double worst_gap = 0;
  for (const auto& nl : netlists)
    for (const Technology* t : {&trusted, &untrusted}) {
      ++runs;
      const auto f = find_max_frequency(nl, *t);
      const double gap = std::abs(f.period - sta(nl, *t, 0).critical_delay);
      worst_iter = std::max(worst_iter, f.iterations);
      worst_gap = std::max(worst_gap, gap);
      if (sta(nl, *t, f.period).slack >= 0 && gap <= 1e-15 && f.iterations <= 2) ++pass;
    }
  return {pass == runs, fmt("%zu/%zu netlist-technology pairs, max iterations %d, max |period-critical| %.3g s",
                            pass, runs, worst_iter, worst_gap)};
}

Outcome metric_fixture() {
  const auto fxt = fx::metric_fixture();
  const EvaluationResult r = evaluate(fxt.spec, fxt.assignment, fxt.constraints);
  double worst = 0;
  auto check = [&](double got, double want) { worst = std::max(worst, std::abs(got - want) / std::abs(want)); };
  check(r.domain_freq.at("d1"), 0.5e9);
  check(r.domain_freq.at("d2"), 2e9);
  check(r.io_bandwidth, 1.75e9);
  check(r.latencies.at("loop"), 10e-9);
  check(r.power.trusted, 2.2e-3);
  check(r.power.untrusted, 4.22e-3);
  check(r.power.total, 6.42e-3);
  check(r.area.trusted, 80);
  check(r.area.untrusted, 49);
  check(r.area.total, 129);
  check(r.vulnerability, 5.85);
  return {worst <= 1e-12, fmt("max relative error %.3g", worst)};
}

Outcome scale() {
  const auto& s = soc();
  double worst = 0;
  std::uint64_t max_nodes = 0;
  bool optimal = true;
  const auto points = expand_sweep(s.sweep);
  for (const auto& p : points) {
    const auto t0 = Clock::now();
    const auto r = branch_and_bound(s.spec, p.constraints, {ConfigSet::all(), {}});
    worst = std::max(worst, seconds_since(t0));
    max_nodes = std::max(max_nodes, r.nodes_visited);
    optimal = optimal && r.proven_optimal;
  }
  return {optimal && worst < 1.0 && max_nodes < 1000000,
          fmt("%zu modules, all configurations, slowest %.3g s, max nodes %llu", s.spec.modules.size(), worst,
              (unsigned long long)max_nodes)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle-equivalence", oracle_equivalence},
      {"pruning-soundness", pruning_soundness},
      {"run0-reproduction", run0_reproduction},
      {"sweep-narrative", sweep_narrative},
      {"monotonicity", monotonicity},
      {"locking-transparency", locking_transparency},
      {"fsm-safety-liveness", fsm_safety_liveness},
      {"fmax-loop", fmax_loop},
      {"metric-fixture", metric_fixture},
      {"scale", scale},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
