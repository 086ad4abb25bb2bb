#include <gtest/gtest.h>

#include "instances.hpp"
#include "scp/error.hpp"
#include "scp/optimizer.hpp"
#include "scp/system_io.hpp"

using namespace scp;

namespace {

SystemSpec one_module() {
  SystemSpec spec;
  ModuleSpec m;
  m.id = "m";
  m.clock_domain = "d";
  m.criticality = 1;
  m.characterization[Configuration::Trusted] = {1e9, 80, 1e-3, 1e-4};
  m.characterization[Configuration::Untrusted] = {3e9, 10, 1e-3, 1e-4};
  m.characterization[Configuration::UntrustedKeyLocked] = {2.8e9, 11, 1e-3, 1e-4};
  m.characterization[Configuration::UntrustedFsmObf] = {2.9e9, 12, 1e-3, 1e-4};
  spec.modules.push_back(m);
  spec.domains = {{"d", {"m"}}};
  return spec;
}

// Full candidate order used by both optimizers.
bool precedes(const SystemSpec& spec, const SystemConfiguration& a, const SystemConfiguration& b) {
  const double va = vulnerability(spec, a), vb = vulnerability(spec, b);
  if (va != vb) return va < vb;
  return tie_break(a, b, spec) < 0;
}

}  // namespace

TEST(BruteForce, SingleModuleExamples) {
  const SystemSpec spec = one_module();
  auto r = brute_force(spec, {});
  ASSERT_TRUE(r.best);
  EXPECT_EQ((*r.best)[0], Configuration::Trusted);
  EXPECT_EQ(r.nodes_visited, 5u);

  ConstraintSet cs;
  cs.domain_f_min["d"] = 2e9;
  r = brute_force(spec, cs);
  ASSERT_TRUE(r.best);
  EXPECT_EQ((*r.best)[0], Configuration::UntrustedFsmObf);
  EXPECT_EQ(branch_and_bound(spec, cs).best, r.best);
}

TEST(BruteForce, SizeCap) {
  Rng rng(1);
  const SystemSpec spec = fx::random_system(rng, kBruteForceModuleCap + 1);
  EXPECT_THROW(brute_force(spec, {}), Error);
  EXPECT_NO_THROW(branch_and_bound(spec, {}));
}

TEST(BranchAndBound, InfeasibleEverything) {
  Rng rng(2);
  const SystemSpec spec = fx::random_system(rng, 6);
  ConstraintSet cs;
  cs.p_total_max = 0;
  cs.area_total_max = 0;
  cs.io_bandwidth_max = 0;
  const auto r = branch_and_bound(spec, cs);
  EXPECT_FALSE(r.best);
  EXPECT_FALSE(r.best_eval);
  EXPECT_TRUE(r.proven_optimal);
  EXPECT_EQ(r.nodes_visited, 1u);
  EXPECT_FALSE(brute_force(spec, cs).best);
}

TEST(BranchAndBound, MatchesBruteForce) {
  Rng rng(101);
  for (int i = 0; i < 60; ++i) {
    const bool coarse = i % 3 == 0;
    const SystemSpec spec = fx::random_system(rng, 1 + rng.below(7), coarse);
    const ConstraintSet cs =
        coarse ? fx::random_constraints_coarse(rng, spec) : fx::random_constraints(rng, spec);
    OptimizerOptions opt;
    if (rng.below(4) == 0) opt.enabled = ConfigSet::without_locking();
    const auto bf = brute_force(spec, cs, opt);
    const auto bb = branch_and_bound(spec, cs, opt);
    EXPECT_EQ(bf.best, bb.best) << "instance " << i;
    EXPECT_EQ(bf.best_eval, bb.best_eval);
    EXPECT_LE(bb.nodes_visited, bf.nodes_visited);
    EXPECT_TRUE(bb.proven_optimal);
    if (bf.best) {
      EXPECT_TRUE(bf.best_eval->feasible);
      EXPECT_TRUE(validate_configuration(spec, *bf.best).ok());
    }
  }
}

TEST(BranchAndBound, PruneEventsAreSound) {
  Rng rng(103);
  for (int i = 0; i < 15; ++i) {
    const SystemSpec spec = fx::random_system(rng, 2 + rng.below(5), i % 2 == 0);
    const ConstraintSet cs = fx::random_constraints(rng, spec);
    std::vector<PruneEvent> events;
    OptimizerOptions opt;
    opt.on_prune = [&](const PruneEvent& e) { events.push_back(e); };
    const auto r = branch_and_bound(spec, cs, opt);
    EXPECT_EQ(events.size(), r.nodes_pruned);
    for (const auto& e : events) {
      fx::for_each_completion(spec, e.node.partial, opt.enabled, [&](const SystemConfiguration& c) {
        if (!evaluate(spec, c, cs).feasible) return;
        EXPECT_GE(vulnerability(spec, c), e.node.lb_vulnerability - 1e-9);
        ASSERT_TRUE(e.incumbent) << to_string(e.reason);
        EXPECT_FALSE(precedes(spec, c, *e.incumbent)) << to_string(e.reason);
      });
    }
  }
}

TEST(BranchAndBound, Deterministic) {
  Rng rng(107);
  const SystemSpec spec = fx::random_system(rng, 9);
  const ConstraintSet cs = fx::random_constraints(rng, spec);
  EXPECT_EQ(branch_and_bound(spec, cs), branch_and_bound(spec, cs));
}

TEST(BranchAndBound, RelaxingNeverHurts) {
  Rng rng(109);
  for (int i = 0; i < 30; ++i) {
    const SystemSpec spec = fx::random_system(rng, 1 + rng.below(8));
    const ConstraintSet cs = fx::random_constraints(rng, spec);
    ConstraintSet relaxed = cs;
    relaxed.p_total_max *= 1.5;
    relaxed.area_total_max = kUnbounded;
    const auto a = branch_and_bound(spec, cs), b = branch_and_bound(spec, relaxed);
    if (a.best) {
      ASSERT_TRUE(b.best);
      EXPECT_LE(b.best_eval->vulnerability, a.best_eval->vulnerability);
    }
  }
}

TEST(SearchOrder, WidthThenCriticalityThenId) {
  Rng rng(3);
  SystemSpec spec = fx::random_system(rng, 4);
  for (auto& m : spec.modules) m.placement.reset();
  spec.modules[0].criticality = 1;
  spec.modules[1].criticality = 5;
  spec.modules[2].criticality = 5;
  spec.modules[3].criticality = 2;
  spec.modules[3].placement = Configuration::Untrusted;
  EXPECT_EQ(search_order(spec), (std::vector<std::size_t>{3, 1, 2, 0}));
}

TEST(TieBreak, Rules) {
  const SystemSpec two = [] {
    SystemSpec s = one_module();
    ModuleSpec m = s.modules[0];
    m.id = "n";
    s.modules.push_back(m);
    s.domains[0].members.push_back("n");
    return s;
  }();
  // Identical metrics except assignment order: TRUSTED at module 0 wins.
  const SystemConfiguration a{{Configuration::Trusted, Configuration::Untrusted}};
  const SystemConfiguration b{{Configuration::Untrusted, Configuration::Trusted}};
  EXPECT_EQ(vulnerability(two, a), vulnerability(two, b));
  EXPECT_TRUE(tie_break(a, b, two) < 0);
  EXPECT_TRUE(tie_break(b, a, two) > 0);
  EXPECT_TRUE(tie_break(a, a, two) == 0);

  // Power decides before area.
  SystemSpec spec = two;
  spec.modules[1].characterization[Configuration::Trusted].p_static = 0;
  EXPECT_TRUE(tie_break(b, a, spec) < 0);
}

TEST(TieBreak, TotalOrderOnRandomTriples) {
  Rng rng(5);
  const SystemSpec spec = fx::random_system(rng, 5, true);
  auto random_cfg = [&] {
    SystemConfiguration c{std::vector<Configuration>(5)};
    for (auto& x : c.assignment) x = kAllConfigurations[rng.below(4)];
    return c;
  };
  for (int i = 0; i < 300; ++i) {
    const auto a = random_cfg(), b = random_cfg(), c = random_cfg();
    const auto ab = tie_break(a, b, spec), bc = tie_break(b, c, spec), ac = tie_break(a, c, spec);
    EXPECT_EQ(ab < 0, tie_break(b, a, spec) > 0);
    if (ab < 0 && bc < 0) EXPECT_TRUE(ac < 0);
    if (ab == 0) EXPECT_EQ(a, b);
  }
}

TEST(OptimizerResult, JsonRoundTrip) {
  Rng rng(7);
  const SystemSpec spec = fx::random_system(rng, 5);
  const auto r = branch_and_bound(spec, {});
  EXPECT_EQ(optimizer_result_from_json(spec, optimizer_result_to_json(spec, r)), r);
  OptimizerResult empty;
  empty.proven_optimal = true;
  EXPECT_EQ(optimizer_result_from_json(spec, optimizer_result_to_json(spec, empty)), empty);
}

TEST(ExampleSoc, BaselineYieldsAllUntrusted) {
  const SystemSpec spec = load_system(read_text_file(fx::data_dir() / "soc" / "example_soc.json"));
  const ConstraintSet cs = load_constraints(read_text_file(fx::data_dir() / "soc" / "baseline_constraints.json"));
  const auto r = branch_and_bound(spec, cs);
  ASSERT_TRUE(r.best);
  EXPECT_EQ(*r.best, SystemConfiguration::uniform(spec, Configuration::Untrusted));
  // Every single-module move away from UNTRUSTED is infeasible.
  for (std::size_t m = 0; m < spec.modules.size(); ++m)
    for (auto c : {Configuration::Trusted, Configuration::UntrustedKeyLocked, Configuration::UntrustedFsmObf}) {
      auto cfg = SystemConfiguration::uniform(spec, Configuration::Untrusted);
      cfg.assignment[m] = c;
      EXPECT_FALSE(evaluate(spec, cfg, cs).feasible) << spec.modules[m].id << " " << to_string(c);
    }
}
