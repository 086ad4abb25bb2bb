#include <gtest/gtest.h>

#include "instances.hpp"
#include "scp/system_io.hpp"
#include "scp/workbench.hpp"

using namespace scp;
using nlohmann::json;

namespace {

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
    r.sweep = sweep_from_json(json::parse(read_text_file(dir / "four_run_sweep.json")));
    return r;
  }();
  return s;
}

}  // namespace

TEST(RunOnce, BaselineIsAllUntrusted) {
  const auto r = run_once(soc().spec, soc().baseline);
  ASSERT_TRUE(r.result.best);
  EXPECT_EQ(*r.result.best, SystemConfiguration::uniform(soc().spec, Configuration::Untrusted));
  ASSERT_TRUE(r.eval);
  EXPECT_TRUE(r.eval->feasible);
  EXPECT_FALSE(r.timestamp.empty());
  EXPECT_EQ(r.timestamp.back(), 'Z');
}

TEST(RunOnce, RejectsBadInputs) {
  EXPECT_THROW(run_once(soc().spec, soc().baseline, {Configuration::Trusted}), Error);
  ConstraintSet cs = soc().baseline;
  cs.p_total_max = -1;
  EXPECT_THROW(run_once(soc().spec, cs), Error);
  SystemSpec placed = soc().spec;
  placed.modules[0].placement = Configuration::UntrustedKeyLocked;
  EXPECT_THROW(run_once(placed, soc().baseline, ConfigSet::without_locking()), Error);
  EXPECT_NO_THROW(run_once(placed, soc().baseline));
}

TEST(Sweep, ShippedNarrative) {
  const auto records = run_sweep(soc().spec, soc().sweep, 4);
  ASSERT_EQ(records.size(), 4u);
  std::vector<double> v;
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(records[i].run_id, i);
    ASSERT_TRUE(records[i].eval) << i;
    v.push_back(records[i].eval->vulnerability);
  }
  EXPECT_GT(v[0], v[1]);
  EXPECT_GE(v[1], v[2]);
  EXPECT_GE(v[2], v[3]);
  EXPECT_EQ(*records[0].result.best, SystemConfiguration::uniform(soc().spec, Configuration::Untrusted));
  // Run 1 only uses the first two configurations.
  for (auto c : records[1].result.best->assignment)
    EXPECT_TRUE(c == Configuration::Trusted || c == Configuration::Untrusted);
}

TEST(Sweep, SinglePointEqualsRunOnce) {
  SweepSpec s;
  s.base = soc().baseline;
  const auto recs = run_sweep(soc().spec, s);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_TRUE(recs[0].same_outcome(run_once(soc().spec, soc().baseline)));
}

TEST(Sweep, WorkerCountDoesNotMatter) {
  const auto a = run_sweep(soc().spec, soc().sweep, 1);
  const auto b = run_sweep(soc().spec, soc().sweep, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(a[i].same_outcome(b[i]));
    EXPECT_EQ(a[i].run_id, b[i].run_id);
  }
}

TEST(Sweep, ProductAndZipExpansion) {
  SweepSpec s;
  s.axes = {{"p_total_max", {1.0, 2.0}}, {"area_total_max", {10.0, 20.0, nullptr}}};
  auto pts = expand_sweep(s);
  ASSERT_EQ(pts.size(), 6u);
  EXPECT_EQ(pts[0].constraints.p_total_max, 1.0);
  EXPECT_EQ(pts[2].constraints.area_total_max, kUnbounded);
  EXPECT_EQ(pts[3].constraints.p_total_max, 2.0);
  EXPECT_EQ(pts[4].constraints.area_total_max, 20.0);

  s.mode = SweepMode::Zip;
  EXPECT_THROW(expand_sweep(s), Error);
  s.axes[1].values.pop_back();
  pts = expand_sweep(s);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[1].constraints.p_total_max, 2.0);
  EXPECT_EQ(pts[1].constraints.area_total_max, 20.0);
}

TEST(Sweep, AxisPaths) {
  SweepSpec s;
  s.base.domain_f_min["a"] = 1e9;
  s.base.latency_constraints.push_back({"l", {"x->y"}, 1e-9});
  s.axes = {{"domain_f_min.a", {nullptr}},
            {"domain_f_min.b", {2e9}},
            {"latency.l", {5e-9}},
            {"enabled_configs", {json::array({"TRUSTED", "UNTRUSTED"})}},
            {"inter_chip_delay", {1e-9}},
            {"external_io_baseline", {3.0}}};
  const auto pts = expand_sweep(s);
  ASSERT_EQ(pts.size(), 1u);
  const auto& c = pts[0].constraints;
  EXPECT_EQ(c.domain_f_min.count("a"), 0u);
  EXPECT_EQ(c.domain_f_min.at("b"), 2e9);
  EXPECT_EQ(c.latency_constraints[0].max_latency, 5e-9);
  EXPECT_EQ(pts[0].enabled_configs, ConfigSet::without_locking());
  EXPECT_EQ(c.inter_chip_delay, 1e-9);
  EXPECT_EQ(c.external_io_baseline, 3.0);

  for (const char* bad : {"nope", "latency.missing", "domain_f_min."}) {
    SweepSpec t = s;
    t.axes = {{bad, {1.0}}};
    EXPECT_THROW(expand_sweep(t), Error) << bad;
  }
  SweepSpec t;
  t.axes = {{"p_total_max", {"text"}}};
  EXPECT_THROW(expand_sweep(t), Error);
}

TEST(Sweep, ErrorNamesLowestFailingPoint) {
  SweepSpec s;
  s.base = soc().baseline;
  s.axes = {{"p_total_max", {1.0, -1.0, 2.0, -2.0}}};
  try {
    run_sweep(soc().spec, s, 4);
    FAIL() << "expected SweepError";
  } catch (const SweepError& e) {
    EXPECT_EQ(e.point(), 1u);
  }
}

TEST(Sweep, JsonRoundTrip) {
  const json j = sweep_to_json(soc().sweep);
  const SweepSpec back = sweep_from_json(j);
  EXPECT_EQ(sweep_to_json(back), j);
  EXPECT_EQ(back.mode, SweepMode::Zip);
  EXPECT_THROW(sweep_from_json(json{{"base", json::object()}, {"extra", 1}}), SchemaError);
  EXPECT_THROW(sweep_from_json(json{{"mode", "diagonal"}}), SchemaError);
}

TEST(RunRecord, JsonRoundTrip) {
  const auto r = run_once(soc().spec, soc().baseline);
  const json j = run_record_to_json(soc().spec, r);
  const RunRecord back = run_record_from_json(soc().spec, j);
  EXPECT_TRUE(back.same_outcome(r));
  EXPECT_EQ(back.timestamp, r.timestamp);
  EXPECT_EQ(run_record_to_json(soc().spec, back), j);
  EXPECT_EQ(j.at("assignment").at("gps_corr"), "UNTRUSTED");
  const json rep = report_to_json(soc().spec, {r, r});
  EXPECT_EQ(rep.size(), 2u);
}

TEST(RunStore, IdsAndPersistence) {
  RunStore store;
  RunRecord r = run_once(soc().spec, soc().baseline);
  EXPECT_EQ(store.add(r).run_id, 0u);
  EXPECT_EQ(store.add(r).run_id, 1u);
  EXPECT_EQ(store.add(r).run_id, 2u);
  EXPECT_TRUE(store.erase(1));
  EXPECT_FALSE(store.erase(1));
  EXPECT_FALSE(store.get(1));
  ASSERT_TRUE(store.get(2));
  EXPECT_EQ(store.size(), 2u);
  // Ids stay monotone after deletion.
  EXPECT_EQ(store.add(r).run_id, 3u);

  RunStore copy;
  copy.load_json(soc().spec, store.to_json(soc().spec));
  EXPECT_EQ(copy.size(), 3u);
  EXPECT_EQ(copy.add(r).run_id, 4u);
  const auto l = copy.list();
  EXPECT_EQ(l[0].run_id, 0u);
  EXPECT_EQ(l[1].run_id, 2u);
}

TEST(RunOnce, BaselineWithoutLocking) {
  const auto r = run_once(soc().spec, soc().baseline, ConfigSet::without_locking());
  ASSERT_TRUE(r.result.best);
  EXPECT_EQ(*r.result.best, SystemConfiguration::uniform(soc().spec, Configuration::Untrusted));
  EXPECT_EQ(r.enabled_configs, ConfigSet::without_locking());
}

TEST(Sweep, RelaxationMovesCriticalModulesToTrusted) {
  const auto records = run_sweep(soc().spec, soc().sweep);
  std::size_t trusted = 0, high = 0;
  for (std::size_t m = 0; m < soc().spec.modules.size(); ++m)
    if ((*records[1].result.best)[m] == Configuration::Trusted) {
      ++trusted;
      if (soc().spec.modules[m].criticality >= 7) ++high;
    }
  EXPECT_GE(trusted, 2u);
  EXPECT_GE(high, 2u);
  EXPECT_LT(records[1].eval->vulnerability, records[0].eval->vulnerability);
}

TEST(Sweep, PointsMatchIndependentRuns) {
  const auto points = expand_sweep(soc().sweep);
  const auto records = run_sweep(soc().spec, soc().sweep, 3);
  ASSERT_EQ(points.size(), records.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    EXPECT_TRUE(records[i].same_outcome(run_once(soc().spec, points[i].constraints, points[i].enabled_configs)));
}

TEST(Sweep, SixteenPointsAcrossWorkerCounts) {
  SweepSpec s;
  s.base = soc().baseline;
  const double p = s.base.p_total_max, a = s.base.area_total_max, bw = s.base.io_bandwidth_max;
  s.axes = {{"p_total_max", {p, 1.5 * p}},
            {"area_total_max", {a, 4 * a}},
            {"io_bandwidth_max", {bw, bw + 4e9}},
            {"enabled_configs", {json::array({"TRUSTED", "UNTRUSTED"}), nullptr}}};
  s.axes[3].values[1] = json::array({"TRUSTED", "UNTRUSTED", "UNTRUSTED_KEY_LOCKED", "UNTRUSTED_FSM_OBF"});
  const auto a1 = run_sweep(soc().spec, s, 1);
  const auto a8 = run_sweep(soc().spec, s, 8);
  ASSERT_EQ(a1.size(), 16u);
  ASSERT_EQ(a8.size(), 16u);
  for (std::size_t i = 0; i < 16; ++i) {
    EXPECT_TRUE(a1[i].same_outcome(a8[i])) << i;
    EXPECT_EQ(a8[i].run_id, i);
  }
}
