#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scp/system.hpp"

namespace scp {

struct PowerBreakdown {
  double trusted = 0.0;
  double untrusted = 0.0;
  double total = 0.0;

  bool operator==(const PowerBreakdown&) const = default;
};

struct AreaBreakdown {
  double trusted = 0.0;
  double untrusted = 0.0;
  double total = 0.0;

  bool operator==(const AreaBreakdown&) const = default;
};

struct Violation {
  std::string constraint;  // e.g. "p_total_max", "domain_f_min[gps]", "latency[fix_path]"
  double required = 0.0;
  double actual = 0.0;

  bool operator==(const Violation&) const = default;
};

struct EvaluationResult {
  std::map<std::string, double> domain_freq;  // Hz
  PowerBreakdown power;                       // W
  double io_bandwidth = 0.0;                  // bits/s
  std::map<std::string, double> latencies;    // s, per latency constraint
  AreaBreakdown area;                         // um^2
  double vulnerability = 0.0;
  bool feasible = false;
  std::vector<Violation> violations;

  bool operator==(const EvaluationResult&) const = default;
};

/// True when the two endpoints of `ch` land on different ICs.
bool crosses_cut(const SystemSpec& spec, const SystemConfiguration& cfg, const Channel& ch);

/// Minimum fmax over the domain's members; every member runs at it.
/// Throws Error for an unknown or empty domain.
double domain_frequency(const SystemSpec& spec, const SystemConfiguration& cfg, std::string_view domain);

/// Dynamic power is scaled by f_domain / f_max and added to static power.
PowerBreakdown system_power(const SystemSpec& spec, const SystemConfiguration& cfg);

double io_bandwidth(const SystemSpec& spec, const SystemConfiguration& cfg,
                    double external_io_baseline = 0.0);

double io_latency(const SystemSpec& spec, const SystemConfiguration& cfg,
                  const LatencyConstraint& constraint, double inter_chip_delay);

AreaBreakdown total_area(const SystemSpec& spec, const SystemConfiguration& cfg);

/// Sum over modules of criticality times exposure of the chosen configuration.
double vulnerability(const SystemSpec& spec, const SystemConfiguration& cfg);

EvaluationResult evaluate(const SystemSpec& spec, const SystemConfiguration& cfg,
                          const ConstraintSet& constraints);

/// Constraint set whose bounds equal the all-UNTRUSTED metrics: domain
/// frequencies, total power, I/O bandwidth, area, and the latency of every
/// path in `shape` (which also supplies baseline traffic and inter-chip
/// delay). Per-IC power bounds stay unbounded.
ConstraintSet baseline_constraints(const SystemSpec& spec, const ConstraintSet& shape = {});

nlohmann::json evaluation_to_json(const EvaluationResult& r);
EvaluationResult evaluation_from_json(const nlohmann::json& j);

/// Index-resolved evaluator used on hot paths. Results are bit-identical
/// to evaluate(): same formulas, same summation order. `spec` and
/// `constraints` must outlive the evaluator.
class Evaluator {
 public:
  Evaluator(const SystemSpec& spec, const ConstraintSet& constraints);

  struct Summary {
    double vulnerability = 0.0;
    double power_total = 0.0;
    double area_total = 0.0;
    bool feasible = false;
  };

  /// Reusable buffers; one per thread.
  struct Scratch {
    std::vector<double> domain_freq;
    std::vector<double> latency;
  };

  Summary summarize(std::span<const Configuration> cfg, Scratch& scratch) const;
  EvaluationResult evaluate(std::span<const Configuration> cfg) const;

  const SystemSpec& spec() const { return *spec_; }
  const ConstraintSet& constraints() const { return *constraints_; }
  std::size_t module_domain(std::size_t m) const { return module_domain_[m]; }
  /// Required minimum frequency of a domain, 0 when unconstrained.
  double domain_f_min(std::size_t d) const { return f_min_[d]; }
  std::span<const std::size_t> latency_path(std::size_t c) const { return latency_paths_[c]; }
  std::size_t channel_src(std::size_t ch) const { return channel_src_[ch]; }
  std::size_t channel_dst(std::size_t ch) const { return channel_dst_[ch]; }

 private:
  template <bool Collect>
  Summary compute(std::span<const Configuration> cfg, Scratch& scratch, EvaluationResult* out) const;

  const SystemSpec* spec_;
  const ConstraintSet* constraints_;
  std::vector<std::size_t> module_domain_;
  std::vector<std::size_t> domain_members_;  // count per domain
  std::vector<double> f_min_;
  std::vector<bool> f_min_set_;
  std::vector<std::size_t> channel_src_, channel_dst_;
  std::vector<std::vector<std::size_t>> latency_paths_;
};

}  // namespace scp
