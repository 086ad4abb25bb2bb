#include "scp/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json_util.hpp"
#include "scp/error.hpp"
#include "scp/system_io.hpp"

namespace scp {

using namespace detail;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-10;

// Bounds are computed in a different summation order than the exact
// evaluation, so a bound only counts as broken past a relative margin.
bool exceeds(double value, double bound) {
  return value > bound && value - bound > kRelTol * std::abs(bound);
}

bool precedes(const Evaluator::Summary& a, std::span<const Configuration> ca, const Evaluator::Summary& b,
              std::span<const Configuration> cb) {
  if (a.vulnerability != b.vulnerability) return a.vulnerability < b.vulnerability;
  if (a.power_total != b.power_total) return a.power_total < b.power_total;
  if (a.area_total != b.area_total) return a.area_total < b.area_total;
  return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end());
}

struct Best {
  std::vector<Configuration> cfg;
  Evaluator::Summary summary;
  bool present = false;

  void offer(std::span<const Configuration> c, const Evaluator::Summary& s) {
    if (!s.feasible) return;
    if (present && !precedes(s, c, summary, cfg)) return;
    cfg.assign(c.begin(), c.end());
    summary = s;
    present = true;
  }
};

OptimizerResult finish(const Evaluator& ev, const Best& best, std::uint64_t visited, std::uint64_t pruned) {
  OptimizerResult r;
  if (best.present) {
    r.best = SystemConfiguration{best.cfg};
    r.best_eval = ev.evaluate(best.cfg);
  }
  r.nodes_visited = visited;
  r.nodes_pruned = pruned;
  r.proven_optimal = true;
  return r;
}

class BruteForce {
 public:
  BruteForce(const SystemSpec& spec, const ConstraintSet& cs, const OptimizerOptions& opt)
      : spec_(spec), ev_(spec, cs), cfg_(spec.modules.size(), Configuration::Untrusted) {
    for (std::size_t m = 0; m < spec.modules.size(); ++m) {
      auto allowed = allowed_configurations(spec, m, opt.enabled);
      std::sort(allowed.begin(), allowed.end());
      allowed_.push_back(std::move(allowed));
    }
  }

  OptimizerResult run() {
    visit(0);
    return finish(ev_, best_, visited_, 0);
  }

 private:
  void visit(std::size_t m) {
    ++visited_;
    if (m == cfg_.size()) {
      best_.offer(cfg_, ev_.summarize(cfg_, scratch_));
      return;
    }
    for (auto c : allowed_[m]) {
      cfg_[m] = c;
      visit(m + 1);
    }
  }

  const SystemSpec& spec_;
  Evaluator ev_;
  std::vector<std::vector<Configuration>> allowed_;
  std::vector<Configuration> cfg_;
  Evaluator::Scratch scratch_;
  Best best_;
  std::uint64_t visited_ = 0;
};

class BranchAndBound {
 public:
  BranchAndBound(const SystemSpec& spec, const ConstraintSet& cs, const OptimizerOptions& opt)
      : spec_(spec), cs_(cs), opt_(opt), ev_(spec, cs), n_(spec.modules.size()),
        cfg_(spec.modules.size(), Configuration::Untrusted) {
    order_ = search_order(spec, opt.enabled);
    pos_of_.assign(n_, 0);
    for (std::size_t p = 0; p < n_; ++p) pos_of_[order_[p]] = p;

    for (std::size_t p = 0; p < n_; ++p) {
      const std::size_t m = order_[p];
      auto allowed = allowed_configurations(spec, m, opt.enabled);
      std::stable_sort(allowed.begin(), allowed.end(), [&](Configuration a, Configuration b) {
        if (spec.exposure[a] != spec.exposure[b]) return spec.exposure[a] < spec.exposure[b];
        return a < b;
      });
      children_.push_back(std::move(allowed));
    }

    suffix_vuln_.assign(n_ + 1, 0.0);
    suffix_area_.assign(n_ + 1, 0.0);
    suffix_power_.assign(n_ + 1, 0.0);
    for (std::size_t p = n_; p-- > 0;) {
      const std::size_t m = order_[p];
      const double f_min = ev_.domain_f_min(ev_.module_domain(m));
      double v = kInf, a = kInf, pw = kInf;
      for (int pass = 0; pass < 2 && v == kInf; ++pass) {
        for (auto c : children_[p]) {
          if (pass == 0 && spec.modules[m].characterization[c].fmax < f_min) continue;
          v = std::min(v, vuln_term(m, c));
          a = std::min(a, spec.modules[m].characterization[c].area);
          pw = std::min(pw, power_term(m, c));
        }
      }
      suffix_vuln_[p] = suffix_vuln_[p + 1] + v;
      suffix_area_[p] = suffix_area_[p + 1] + a;
      suffix_power_[p] = suffix_power_[p + 1] + pw;
    }
  }

  OptimizerResult run() {
    greedy();
    visit(0, {});
    return finish(ev_, best_, visited_, pruned_);
  }

 private:
  struct Acc {
    double vuln = 0.0, area = 0.0, power = 0.0, p_trusted = 0.0, p_untrusted = 0.0;
  };

  double vuln_term(std::size_t m, Configuration c) const {
    return spec_.modules[m].criticality * spec_.exposure[c];
  }

  double power_term(std::size_t m, Configuration c) const {
    const auto& cm = spec_.modules[m].characterization[c];
    const double f_min = ev_.domain_f_min(ev_.module_domain(m));
    return cm.p_static + std::max(0.0, cm.p_dyn_at_fmax * (f_min / cm.fmax));
  }

  Acc extend(Acc acc, std::size_t m, Configuration c) const {
    acc.vuln += vuln_term(m, c);
    acc.area += spec_.modules[m].characterization[c].area;
    const double pw = power_term(m, c);
    acc.power += pw;
    (on_trusted_ic(c) ? acc.p_trusted : acc.p_untrusted) += pw;
    return acc;
  }

  bool assigned(std::size_t m, std::size_t pos) const { return pos_of_[m] < pos; }

  bool crossing(std::size_t ch, std::size_t pos) const {
    const std::size_t s = ev_.channel_src(ch), d = ev_.channel_dst(ch);
    return assigned(s, pos) && assigned(d, pos) && on_trusted_ic(cfg_[s]) != on_trusted_ic(cfg_[d]);
  }

  std::optional<PruneReason> check(std::size_t pos, const Acc& acc, bool with_incumbent) const {
    if (pos > 0) {
      const std::size_t m = order_[pos - 1];
      if (spec_.modules[m].characterization[cfg_[m]].fmax < ev_.domain_f_min(ev_.module_domain(m)))
        return PruneReason::DomainFrequency;
    }
    double bw = cs_.external_io_baseline;
    for (std::size_t ch = 0; ch < spec_.channels.size(); ++ch)
      if (crossing(ch, pos)) bw += spec_.channels[ch].bandwidth;
    if (exceeds(bw, cs_.io_bandwidth_max)) return PruneReason::Bandwidth;
    for (std::size_t i = 0; i < cs_.latency_constraints.size(); ++i) {
      double latency = 0.0;
      for (auto ch : ev_.latency_path(i))
        latency += spec_.channels[ch].latency_on_chip + (crossing(ch, pos) ? cs_.inter_chip_delay : 0.0);
      if (exceeds(latency, cs_.latency_constraints[i].max_latency)) return PruneReason::Latency;
    }
    if (exceeds(acc.area + suffix_area_[pos], cs_.area_total_max)) return PruneReason::Area;
    if (exceeds(acc.power + suffix_power_[pos], cs_.p_total_max)) return PruneReason::PowerTotal;
    if (exceeds(acc.p_trusted, cs_.p_trusted_max)) return PruneReason::PowerTrusted;
    if (exceeds(acc.p_untrusted, cs_.p_untrusted_max)) return PruneReason::PowerUntrusted;
    if (with_incumbent && best_.present && exceeds(acc.vuln + suffix_vuln_[pos], best_.summary.vulnerability))
      return PruneReason::Vulnerability;
    return std::nullopt;
  }

  // Most-secure feasible child at every level; seeds the incumbent.
  void greedy() {
    Acc acc;
    if (check(0, acc, false)) return;
    for (std::size_t p = 0; p < n_; ++p) {
      const std::size_t m = order_[p];
      bool placed = false;
      for (auto c : children_[p]) {
        cfg_[m] = c;
        const Acc next = extend(acc, m, c);
        if (!check(p + 1, next, false)) {
          acc = next;
          placed = true;
          break;
        }
      }
      if (!placed) return;
    }
    best_.offer(cfg_, ev_.summarize(cfg_, scratch_));
  }

  void visit(std::size_t pos, const Acc& acc) {
    ++visited_;
    if (auto reason = check(pos, acc, true)) {
      ++pruned_;
      if (opt_.on_prune) report(pos, acc, *reason);
      return;
    }
    if (pos == n_) {
      best_.offer(cfg_, ev_.summarize(cfg_, scratch_));
      return;
    }
    const std::size_t m = order_[pos];
    for (auto c : children_[pos]) {
      cfg_[m] = c;
      visit(pos + 1, extend(acc, m, c));
    }
  }

  void report(std::size_t pos, const Acc& acc, PruneReason reason) const {
    PruneEvent e;
    for (std::size_t p = 0; p < pos; ++p) e.node.partial[spec_.modules[order_[p]].id] = cfg_[order_[p]];
    e.node.lb_vulnerability = acc.vuln + suffix_vuln_[pos];
    e.node.depth = pos;
    e.reason = reason;
    if (best_.present) {
      e.incumbent = SystemConfiguration{best_.cfg};
      e.incumbent_vulnerability = best_.summary.vulnerability;
    }
    opt_.on_prune(e);
  }

  const SystemSpec& spec_;
  const ConstraintSet& cs_;
  const OptimizerOptions& opt_;
  Evaluator ev_;
  std::size_t n_;
  std::vector<std::size_t> order_, pos_of_;
  std::vector<std::vector<Configuration>> children_;
  std::vector<double> suffix_vuln_, suffix_area_, suffix_power_;
  std::vector<Configuration> cfg_;
  Evaluator::Scratch scratch_;
  Best best_;
  std::uint64_t visited_ = 0, pruned_ = 0;
};

}  // namespace

std::string_view to_string(PruneReason r) noexcept {
  switch (r) {
    case PruneReason::DomainFrequency: return "domain_frequency";
    case PruneReason::Bandwidth: return "bandwidth";
    case PruneReason::Latency: return "latency";
    case PruneReason::Area: return "area";
    case PruneReason::PowerTotal: return "power_total";
    case PruneReason::PowerTrusted: return "power_trusted";
    case PruneReason::PowerUntrusted: return "power_untrusted";
    case PruneReason::Vulnerability: return "vulnerability";
  }
  return "unknown";
}

std::vector<Configuration> allowed_configurations(const SystemSpec& spec, std::size_t module, ConfigSet enabled) {
  std::vector<Configuration> out;
  const auto& placement = spec.modules.at(module).placement;
  for (auto c : kAllConfigurations)
    if (enabled.contains(c) && (!placement || *placement == c)) out.push_back(c);
  return out;
}

std::vector<std::size_t> search_order(const SystemSpec& spec, ConfigSet enabled) {
  std::vector<std::size_t> order(spec.modules.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> width(order.size());
  for (auto m : order) width[m] = allowed_configurations(spec, m, enabled).size();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (width[a] != width[b]) return width[a] < width[b];
    const double ca = spec.modules[a].criticality, cb = spec.modules[b].criticality;
    if (ca != cb) return ca > cb;
    return spec.modules[a].id < spec.modules[b].id;
  });
  return order;
}

std::strong_ordering tie_break(const SystemConfiguration& a, const SystemConfiguration& b, const SystemSpec& spec) {
  const double pa = system_power(spec, a).total, pb = system_power(spec, b).total;
  if (pa != pb) return pa < pb ? std::strong_ordering::less : std::strong_ordering::greater;
  const double aa = total_area(spec, a).total, ab = total_area(spec, b).total;
  if (aa != ab) return aa < ab ? std::strong_ordering::less : std::strong_ordering::greater;
  for (std::size_t m = 0; m < a.size(); ++m)
    if (a[m] != b[m]) return a[m] < b[m] ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

OptimizerResult brute_force(const SystemSpec& spec, const ConstraintSet& constraints,
                            const OptimizerOptions& options) {
  if (spec.modules.size() > kBruteForceModuleCap)
    throw Error("brute force is limited to " + std::to_string(kBruteForceModuleCap) + " modules, system has " +
                std::to_string(spec.modules.size()));
  return BruteForce(spec, constraints, options).run();
}

OptimizerResult branch_and_bound(const SystemSpec& spec, const ConstraintSet& constraints,
                                 const OptimizerOptions& options) {
  return BranchAndBound(spec, constraints, options).run();
}

json optimizer_result_to_json(const SystemSpec& spec, const OptimizerResult& r) {
  return {{"best", r.best ? configuration_to_json(spec, *r.best) : json(nullptr)},
          {"best_eval", r.best_eval ? evaluation_to_json(*r.best_eval) : json(nullptr)},
          {"nodes_visited", r.nodes_visited},
          {"nodes_pruned", r.nodes_pruned},
          {"proven_optimal", r.proven_optimal}};
}

OptimizerResult optimizer_result_from_json(const SystemSpec& spec, const json& j) {
  OptimizerResult r;
  const json& best = require(j, "best", "");
  if (!best.is_null()) r.best = configuration_from_json(spec, best);
  const json& eval = require(j, "best_eval", "");
  if (!eval.is_null()) r.best_eval = evaluation_from_json(eval);
  r.nodes_visited = static_cast<std::uint64_t>(as_integer(require(j, "nodes_visited", ""), "nodes_visited"));
  r.nodes_pruned = static_cast<std::uint64_t>(as_integer(require(j, "nodes_pruned", ""), "nodes_pruned"));
  r.proven_optimal = require(j, "proven_optimal", "").get<bool>();
  return r;
}

}  // namespace scp
