#include <gtest/gtest.h>

#include <cmath>

#include "instances.hpp"
#include "scp/error.hpp"
#include "scp/metrics.hpp"

using namespace scp;

namespace {

void expect_rel(double actual, double expected, double tol = 1e-12) {
  EXPECT_LE(std::abs(actual - expected), tol * std::abs(expected)) << actual << " vs " << expected;
}

}  // namespace

// Hand computation for A=TRUSTED, B=UNTRUSTED, C=KEY_LOCKED, D=FSM_OBF:
//   f(d1) = min(0.5, 1.0) GHz = 0.5 GHz, f(d2) = min(2.5, 2.0) GHz = 2 GHz
//   P(A) = 2e-4 + 2e-3 * 0.5/0.5  = 2.2e-3   (trusted)
//   P(B) = 5e-5 + 5e-4 * 0.5/1.0  = 3.0e-4
//   P(C) = 2.4e-4 + 2.4e-3 * 2/2.5 = 2.16e-3
//   P(D) = 1.6e-4 + 1.6e-3 * 2/2   = 1.76e-3
//   area: trusted 80, untrusted 5 + 24 + 20 = 49
//   cut: A->B and C->A cross, bandwidth = 0.25e9 + 1e9 + 0.5e9
//   loop latency = (1 + 1 + 2) ns + 2 crossings * 3 ns = 10 ns
//   vulnerability = 4*0.05 + 3*1 + 2*0.9 + 1*0.85 = 5.85
TEST(Metrics, HandComputedFixture) {
  const auto f = fx::metric_fixture();
  const auto e = evaluate(f.spec, f.assignment, f.constraints);
  expect_rel(e.domain_freq.at("d1"), 0.5e9);
  expect_rel(e.domain_freq.at("d2"), 2e9);
  expect_rel(e.power.trusted, 2.2e-3);
  expect_rel(e.power.untrusted, 4.22e-3);
  expect_rel(e.power.total, 6.42e-3);
  expect_rel(e.area.trusted, 80);
  expect_rel(e.area.untrusted, 49);
  expect_rel(e.area.total, 129);
  expect_rel(e.io_bandwidth, 1.75e9);
  expect_rel(e.latencies.at("loop"), 10e-9);
  expect_rel(e.vulnerability, 5.85);
  EXPECT_TRUE(e.feasible);
  EXPECT_TRUE(e.violations.empty());
}

TEST(Metrics, FreeFunctionsAgreeWithEvaluate) {
  const auto f = fx::metric_fixture();
  const auto e = evaluate(f.spec, f.assignment, f.constraints);
  EXPECT_EQ(system_power(f.spec, f.assignment), e.power);
  EXPECT_EQ(total_area(f.spec, f.assignment), e.area);
  EXPECT_EQ(io_bandwidth(f.spec, f.assignment, 0.25e9), e.io_bandwidth);
  EXPECT_EQ(io_latency(f.spec, f.assignment, f.constraints.latency_constraints[0], 3e-9), e.latencies.at("loop"));
  EXPECT_EQ(vulnerability(f.spec, f.assignment), e.vulnerability);
  EXPECT_EQ(domain_frequency(f.spec, f.assignment, "d2"), e.domain_freq.at("d2"));
  EXPECT_THROW(domain_frequency(f.spec, f.assignment, "d9"), Error);
  EXPECT_TRUE(crosses_cut(f.spec, f.assignment, f.spec.channels[0]));
  EXPECT_FALSE(crosses_cut(f.spec, f.assignment, f.spec.channels[1]));
}

TEST(Metrics, ViolationsAreNamed) {
  auto f = fx::metric_fixture();
  f.constraints.domain_f_min["d1"] = 1e9;
  f.constraints.p_total_max = 6e-3;
  f.constraints.p_trusted_max = 1e-3;
  f.constraints.io_bandwidth_max = 1e9;
  f.constraints.area_total_max = 128;
  f.constraints.latency_constraints[0].max_latency = 9e-9;
  f.spec.modules[3].placement = Configuration::Untrusted;
  const auto e = evaluate(f.spec, f.assignment, f.constraints);
  EXPECT_FALSE(e.feasible);
  std::vector<std::string> names;
  for (const auto& v : e.violations) names.push_back(v.constraint);
  EXPECT_EQ(names, (std::vector<std::string>{"domain_f_min[d1]", "p_total_max", "p_trusted_max", "io_bandwidth_max",
                                             "latency[loop]", "area_total_max", "placement[D]"}));
  EXPECT_EQ(e.violations[0].required, 1e9);
  EXPECT_EQ(e.violations[0].actual, 0.5e9);
}

TEST(Metrics, BoundsAreInclusive) {
  auto f = fx::metric_fixture();
  const auto e0 = evaluate(f.spec, f.assignment, f.constraints);
  f.constraints.p_total_max = e0.power.total;
  f.constraints.area_total_max = e0.area.total;
  f.constraints.io_bandwidth_max = e0.io_bandwidth;
  f.constraints.domain_f_min = e0.domain_freq;
  f.constraints.latency_constraints[0].max_latency = e0.latencies.at("loop");
  EXPECT_TRUE(evaluate(f.spec, f.assignment, f.constraints).feasible);
}

TEST(Metrics, CutSumOracle) {
  // Bandwidth equals the sum over channels of bandwidth * [endpoints differ].
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const SystemSpec spec = fx::random_system(rng, 1 + rng.below(10));
    SystemConfiguration cfg{std::vector<Configuration>(spec.modules.size())};
    for (auto& c : cfg.assignment) c = kAllConfigurations[rng.below(4)];
    double expected = 0;
    for (const auto& ch : spec.channels) {
      const bool ts = cfg[*spec.module_index(ch.src)] == Configuration::Trusted;
      const bool td = cfg[*spec.module_index(ch.dst)] == Configuration::Trusted;
      if (ts != td) expected += ch.bandwidth;
    }
    EXPECT_DOUBLE_EQ(io_bandwidth(spec, cfg), expected);
  }
}

TEST(Metrics, RandomSystemsAgainstDirectFormulas) {
  Rng rng(43);
  for (int i = 0; i < 100; ++i) {
    const SystemSpec spec = fx::random_system(rng, 1 + rng.below(10));
    const ConstraintSet cs = fx::random_constraints(rng, spec);
    SystemConfiguration cfg{std::vector<Configuration>(spec.modules.size())};
    for (auto& c : cfg.assignment) c = kAllConfigurations[rng.below(4)];
    const auto e = evaluate(spec, cfg, cs);

    double vuln = 0, area = 0, power = 0;
    for (std::size_t m = 0; m < spec.modules.size(); ++m) {
      const auto& mod = spec.modules[m];
      const auto& cm = mod.characterization[cfg[m]];
      double f = 1e300;
      for (std::size_t k = 0; k < spec.modules.size(); ++k)
        if (spec.modules[k].clock_domain == mod.clock_domain)
          f = std::min(f, spec.modules[k].characterization[cfg[k]].fmax);
      vuln += mod.criticality * spec.exposure[cfg[m]];
      area += cm.area;
      power += cm.p_static + cm.p_dyn_at_fmax * f / cm.fmax;
    }
    expect_rel(e.vulnerability, vuln, 1e-12);
    expect_rel(e.area.total, area, 1e-12);
    expect_rel(e.power.total, power, 1e-12);

    // The index-resolved path is bit-identical.
    const Evaluator ev(spec, cs);
    EXPECT_EQ(ev.evaluate(cfg.assignment), e);
    Evaluator::Scratch scratch;
    const auto s = ev.summarize(cfg.assignment, scratch);
    EXPECT_EQ(s.vulnerability, e.vulnerability);
    EXPECT_EQ(s.power_total, e.power.total);
    EXPECT_EQ(s.area_total, e.area.total);
    EXPECT_EQ(s.feasible, e.feasible);
  }
}

TEST(Metrics, BaselineConstraintsAreTight) {
  Rng rng(47);
  for (int i = 0; i < 30; ++i) {
    const SystemSpec spec = fx::random_system(rng, 1 + rng.below(8));
    ConstraintSet shape;
    shape.external_io_baseline = 1e8;
    const auto cs = baseline_constraints(spec, shape);
    const auto uni = SystemConfiguration::uniform(spec, Configuration::Untrusted);
    const auto e = evaluate(spec, uni, cs);
    EXPECT_EQ(e.feasible, std::all_of(spec.modules.begin(), spec.modules.end(), [](const ModuleSpec& m) {
                return !m.placement || *m.placement == Configuration::Untrusted;
              }));
    EXPECT_EQ(cs.p_total_max, e.power.total);
    EXPECT_EQ(cs.io_bandwidth_max, 1e8);
  }
}

TEST(Metrics, JsonRoundTrip) {
  const auto f = fx::metric_fixture();
  auto cs = f.constraints;
  cs.area_total_max = 1;
  const auto e = evaluate(f.spec, f.assignment, cs);
  EXPECT_EQ(evaluation_from_json(nlohmann::json::parse(evaluation_to_json(e).dump())), e);
}

TEST(Metrics, SizeMismatchThrows) {
  const auto f = fx::metric_fixture();
  EXPECT_THROW(evaluate(f.spec, {{Configuration::Trusted}}, f.constraints), Error);
}
