#include <benchmark/benchmark.h>

#include <nlohmann/json.hpp>

#include "instances.hpp"
#include "scp/metrics.hpp"
#include "scp/optimizer.hpp"
#include "scp/system_io.hpp"
#include "scp/timing.hpp"
#include "scp/workbench.hpp"

using namespace scp;

namespace {

const SystemSpec& soc_spec() {
  static const SystemSpec s = load_system(read_text_file(fx::data_dir() / "soc" / "example_soc.json"));
  return s;
}

const std::vector<SweepPoint>& soc_points() {
  static const std::vector<SweepPoint> p = expand_sweep(
      sweep_from_json(nlohmann::json::parse(read_text_file(fx::data_dir() / "soc" / "four_run_sweep.json"))));
  return p;
}

void BM_BranchAndBoundSoc(benchmark::State& state) {
  const auto& pt = soc_points()[static_cast<std::size_t>(state.range(0))];
  std::uint64_t nodes = 0;
  for (auto _ : state) {
    auto r = branch_and_bound(soc_spec(), pt.constraints, {pt.enabled_configs, {}});
    nodes = r.nodes_visited;
    benchmark::DoNotOptimize(r);
  }
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_BranchAndBoundSoc)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_BranchAndBoundRandom(benchmark::State& state) {
  Rng rng(42);
  const SystemSpec spec = fx::random_system(rng, static_cast<std::size_t>(state.range(0)));
  const ConstraintSet cs = fx::random_constraints(rng, spec);
  for (auto _ : state) benchmark::DoNotOptimize(branch_and_bound(spec, cs));
}
BENCHMARK(BM_BranchAndBoundRandom)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMicrosecond);

void BM_BruteForce(benchmark::State& state) {
  Rng rng(42);
  const SystemSpec spec = fx::random_system(rng, static_cast<std::size_t>(state.range(0)));
  const ConstraintSet cs = fx::random_constraints(rng, spec);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force(spec, cs));
}
BENCHMARK(BM_BruteForce)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const auto& spec = soc_spec();
  const auto cfg = SystemConfiguration::uniform(spec, Configuration::Untrusted);
  const auto& cs = soc_points()[0].constraints;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(spec, cfg, cs));
}
BENCHMARK(BM_Evaluate);

void BM_Sta(benchmark::State& state) {
  const Technology tech = parse_technology(read_text_file(fx::data_dir() / "tech" / "untrusted.json"));
  Rng rng(7);
  const Netlist nl = fx::random_netlist(rng, 32, static_cast<std::size_t>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(find_max_frequency(nl, tech));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Sta)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

}  // namespace

BENCHMARK_MAIN();
