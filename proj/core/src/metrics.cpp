#include "scp/metrics.hpp"

#include <algorithm>
#include <limits>

#include "json_util.hpp"
#include "scp/error.hpp"

namespace scp {

using namespace detail;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t require_module(const SystemSpec& spec, const std::string& id) {
  auto idx = spec.module_index(id);
  if (!idx) throw Error("unknown module '" + id + "'");
  return *idx;
}

std::size_t require_domain(const SystemSpec& spec, const std::string& id) {
  auto idx = spec.domain_index(id);
  if (!idx) throw Error("unknown clock domain '" + id + "'");
  return *idx;
}

void check_size(const SystemSpec& spec, std::size_t n) {
  if (n != spec.modules.size())
    throw Error("configuration assigns " + std::to_string(n) + " modules, system has " +
                std::to_string(spec.modules.size()));
}

}  // namespace

bool crosses_cut(const SystemSpec& spec, const SystemConfiguration& cfg, const Channel& ch) {
  return on_trusted_ic(cfg[require_module(spec, ch.src)]) !=
         on_trusted_ic(cfg[require_module(spec, ch.dst)]);
}

double domain_frequency(const SystemSpec& spec, const SystemConfiguration& cfg, std::string_view domain) {
  check_size(spec, cfg.size());
  const std::string id(domain);
  require_domain(spec, id);
  double f = kInf;
  bool any = false;
  for (std::size_t m = 0; m < spec.modules.size(); ++m) {
    if (spec.modules[m].clock_domain != id) continue;
    f = std::min(f, spec.modules[m].characterization[cfg[m]].fmax);
    any = true;
  }
  if (!any) throw Error("clock domain '" + id + "' has no modules");
  return f;
}

PowerBreakdown system_power(const SystemSpec& spec, const SystemConfiguration& cfg) {
  check_size(spec, cfg.size());
  std::map<std::string, double> f_dom;
  for (const auto& d : spec.domains) {
    bool any = false;
    for (const auto& m : spec.modules) any = any || m.clock_domain == d.id;
    if (any) f_dom[d.id] = domain_frequency(spec, cfg, d.id);
  }
  PowerBreakdown p;
  for (std::size_t m = 0; m < spec.modules.size(); ++m) {
    const auto& cm = spec.modules[m].characterization[cfg[m]];
    const double watts = cm.p_static + cm.p_dyn_at_fmax * (f_dom.at(spec.modules[m].clock_domain) / cm.fmax);
    (on_trusted_ic(cfg[m]) ? p.trusted : p.untrusted) += watts;
  }
  p.total = p.trusted + p.untrusted;
  return p;
}

double io_bandwidth(const SystemSpec& spec, const SystemConfiguration& cfg, double external_io_baseline) {
  check_size(spec, cfg.size());
  double bw = external_io_baseline;
  for (const auto& ch : spec.channels)
    if (crosses_cut(spec, cfg, ch)) bw += ch.bandwidth;
  return bw;
}

double io_latency(const SystemSpec& spec, const SystemConfiguration& cfg, const LatencyConstraint& c,
                  double inter_chip_delay) {
  check_size(spec, cfg.size());
  double latency = 0.0;
  for (const auto& id : c.path) {
    auto idx = spec.channel_index(id);
    if (!idx) throw Error("latency constraint '" + c.id + "': unknown channel '" + id + "'");
    const Channel& ch = spec.channels[*idx];
    latency += ch.latency_on_chip + (crosses_cut(spec, cfg, ch) ? inter_chip_delay : 0.0);
  }
  return latency;
}

AreaBreakdown total_area(const SystemSpec& spec, const SystemConfiguration& cfg) {
  check_size(spec, cfg.size());
  AreaBreakdown a;
  for (std::size_t m = 0; m < spec.modules.size(); ++m)
    (on_trusted_ic(cfg[m]) ? a.trusted : a.untrusted) += spec.modules[m].characterization[cfg[m]].area;
  a.total = a.trusted + a.untrusted;
  return a;
}

double vulnerability(const SystemSpec& spec, const SystemConfiguration& cfg) {
  check_size(spec, cfg.size());
  double v = 0.0;
  for (std::size_t m = 0; m < spec.modules.size(); ++m)
    v += spec.modules[m].criticality * spec.exposure[cfg[m]];
  return v;
}

Evaluator::Evaluator(const SystemSpec& spec, const ConstraintSet& constraints)
    : spec_(&spec), constraints_(&constraints) {
  const std::size_t nd = spec.domains.size();
  domain_members_.assign(nd, 0);
  for (const auto& m : spec.modules) {
    const std::size_t d = require_domain(spec, m.clock_domain);
    module_domain_.push_back(d);
    ++domain_members_[d];
  }
  f_min_.assign(nd, 0.0);
  f_min_set_.assign(nd, false);
  for (const auto& [id, f] : constraints.domain_f_min) {
    const std::size_t d = require_domain(spec, id);
    f_min_[d] = f;
    f_min_set_[d] = true;
  }
  for (const auto& ch : spec.channels) {
    channel_src_.push_back(require_module(spec, ch.src));
    channel_dst_.push_back(require_module(spec, ch.dst));
  }
  for (const auto& lc : constraints.latency_constraints) {
    std::vector<std::size_t> path;
    for (const auto& id : lc.path) {
      auto idx = spec.channel_index(id);
      if (!idx) throw Error("latency constraint '" + lc.id + "': unknown channel '" + id + "'");
      path.push_back(*idx);
    }
    latency_paths_.push_back(std::move(path));
  }
}

template <bool Collect>
Evaluator::Summary Evaluator::compute(std::span<const Configuration> cfg, Scratch& s,
                                      EvaluationResult* out) const {
  const SystemSpec& spec = *spec_;
  const ConstraintSet& cs = *constraints_;
  check_size(spec, cfg.size());
  const std::size_t n = spec.modules.size();
  Summary sum;
  bool feasible = true;
  auto violate = [&](const auto& name, double required, double actual) {
    feasible = false;
    if constexpr (Collect) out->violations.push_back({std::string(name), required, actual});
  };

  s.domain_freq.assign(spec.domains.size(), kInf);
  for (std::size_t m = 0; m < n; ++m) {
    double& f = s.domain_freq[module_domain_[m]];
    f = std::min(f, spec.modules[m].characterization[cfg[m]].fmax);
  }

  double p_trusted = 0.0, p_untrusted = 0.0, a_trusted = 0.0, a_untrusted = 0.0, vuln = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const auto& cm = spec.modules[m].characterization[cfg[m]];
    const double watts = cm.p_static + cm.p_dyn_at_fmax * (s.domain_freq[module_domain_[m]] / cm.fmax);
    (on_trusted_ic(cfg[m]) ? p_trusted : p_untrusted) += watts;
  }
  for (std::size_t m = 0; m < n; ++m)
    (on_trusted_ic(cfg[m]) ? a_trusted : a_untrusted) += spec.modules[m].characterization[cfg[m]].area;
  for (std::size_t m = 0; m < n; ++m) vuln += spec.modules[m].criticality * spec.exposure[cfg[m]];
  const double p_total = p_trusted + p_untrusted;
  const double a_total = a_trusted + a_untrusted;

  double bw = cs.external_io_baseline;
  for (std::size_t c = 0; c < channel_src_.size(); ++c)
    if (on_trusted_ic(cfg[channel_src_[c]]) != on_trusted_ic(cfg[channel_dst_[c]]))
      bw += spec.channels[c].bandwidth;

  s.latency.assign(latency_paths_.size(), 0.0);
  for (std::size_t i = 0; i < latency_paths_.size(); ++i) {
    double latency = 0.0;
    for (auto c : latency_paths_[i]) {
      const bool cross = on_trusted_ic(cfg[channel_src_[c]]) != on_trusted_ic(cfg[channel_dst_[c]]);
      latency += spec.channels[c].latency_on_chip + (cross ? cs.inter_chip_delay : 0.0);
    }
    s.latency[i] = latency;
  }

  for (std::size_t d = 0; d < spec.domains.size(); ++d) {
    if (!f_min_set_[d] || domain_members_[d] == 0) continue;
    if (s.domain_freq[d] < f_min_[d]) {
      if constexpr (Collect) violate("domain_f_min[" + spec.domains[d].id + "]", f_min_[d], s.domain_freq[d]);
      else violate("", 0, 0);
    }
  }
  if (p_total > cs.p_total_max) violate("p_total_max", cs.p_total_max, p_total);
  if (p_trusted > cs.p_trusted_max) violate("p_trusted_max", cs.p_trusted_max, p_trusted);
  if (p_untrusted > cs.p_untrusted_max) violate("p_untrusted_max", cs.p_untrusted_max, p_untrusted);
  if (bw > cs.io_bandwidth_max) violate("io_bandwidth_max", cs.io_bandwidth_max, bw);
  for (std::size_t i = 0; i < latency_paths_.size(); ++i) {
    const auto& lc = cs.latency_constraints[i];
    if (s.latency[i] > lc.max_latency) {
      if constexpr (Collect) violate("latency[" + lc.id + "]", lc.max_latency, s.latency[i]);
      else violate("", 0, 0);
    }
  }
  if (a_total > cs.area_total_max) violate("area_total_max", cs.area_total_max, a_total);
  for (std::size_t m = 0; m < n; ++m) {
    const auto& placement = spec.modules[m].placement;
    if (placement && *placement != cfg[m]) {
      if constexpr (Collect)
        violate("placement[" + spec.modules[m].id + "]", static_cast<double>(index_of(*placement)),
                static_cast<double>(index_of(cfg[m])));
      else violate("", 0, 0);
    }
  }

  if constexpr (Collect) {
    for (std::size_t d = 0; d < spec.domains.size(); ++d)
      if (domain_members_[d] > 0) out->domain_freq[spec.domains[d].id] = s.domain_freq[d];
    out->power = {p_trusted, p_untrusted, p_total};
    out->io_bandwidth = bw;
    for (std::size_t i = 0; i < latency_paths_.size(); ++i)
      out->latencies[cs.latency_constraints[i].id] = s.latency[i];
    out->area = {a_trusted, a_untrusted, a_total};
    out->vulnerability = vuln;
    out->feasible = feasible;
  }
  sum.vulnerability = vuln;
  sum.power_total = p_total;
  sum.area_total = a_total;
  sum.feasible = feasible;
  return sum;
}

Evaluator::Summary Evaluator::summarize(std::span<const Configuration> cfg, Scratch& scratch) const {
  return compute<false>(cfg, scratch, nullptr);
}

EvaluationResult Evaluator::evaluate(std::span<const Configuration> cfg) const {
  EvaluationResult r;
  Scratch scratch;
  compute<true>(cfg, scratch, &r);
  return r;
}

EvaluationResult evaluate(const SystemSpec& spec, const SystemConfiguration& cfg,
                          const ConstraintSet& constraints) {
  return Evaluator(spec, constraints).evaluate(cfg.assignment);
}

ConstraintSet baseline_constraints(const SystemSpec& spec, const ConstraintSet& shape) {
  const auto all_untrusted = SystemConfiguration::uniform(spec, Configuration::Untrusted);
  ConstraintSet cs = shape;
  cs.domain_f_min.clear();
  cs.p_trusted_max = kUnbounded;
  cs.p_untrusted_max = kUnbounded;
  const EvaluationResult e = evaluate(spec, all_untrusted, cs);
  cs.domain_f_min = e.domain_freq;
  cs.p_total_max = e.power.total;
  cs.io_bandwidth_max = e.io_bandwidth;
  for (auto& lc : cs.latency_constraints) lc.max_latency = e.latencies.at(lc.id);
  cs.area_total_max = e.area.total;
  return cs;
}

json evaluation_to_json(const EvaluationResult& r) {
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"constraint", v.constraint}, {"required", v.required}, {"actual", v.actual}});
  return {{"domain_freq", r.domain_freq},
          {"power", {{"trusted", r.power.trusted}, {"untrusted", r.power.untrusted}, {"total", r.power.total}}},
          {"io_bandwidth", r.io_bandwidth},
          {"latencies", r.latencies},
          {"area", {{"trusted", r.area.trusted}, {"untrusted", r.area.untrusted}, {"total", r.area.total}}},
          {"vulnerability", r.vulnerability},
          {"feasible", r.feasible},
          {"violations", violations}};
}

EvaluationResult evaluation_from_json(const json& j) {
  EvaluationResult r;
  const json& freq = require(j, "domain_freq", "");
  for (auto it = freq.begin(); it != freq.end(); ++it) r.domain_freq[it.key()] = as_number(*it, "domain_freq");
  const json& p = require(j, "power", "");
  r.power = {get_number(p, "trusted", "power"), get_number(p, "untrusted", "power"), get_number(p, "total", "power")};
  r.io_bandwidth = get_number(j, "io_bandwidth", "");
  const json& lat = require(j, "latencies", "");
  for (auto it = lat.begin(); it != lat.end(); ++it) r.latencies[it.key()] = as_number(*it, "latencies");
  const json& a = require(j, "area", "");
  r.area = {get_number(a, "trusted", "area"), get_number(a, "untrusted", "area"), get_number(a, "total", "area")};
  r.vulnerability = get_number(j, "vulnerability", "");
  r.feasible = require(j, "feasible", "").get<bool>();
  for (const auto& v : require_array(j, "violations", ""))
    r.violations.push_back({get_string(v, "constraint", "violations"), get_number(v, "required", "violations"),
                            get_number(v, "actual", "violations")});
  return r;
}

}  // namespace scp
