#pragma once

#include <array>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "scp/configuration.hpp"

namespace scp {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Characterized metrics of one module in one configuration (SI units).
struct ConfigMetrics {
  double fmax = 0.0;           // Hz
  double area = 0.0;           // um^2
  double p_dyn_at_fmax = 0.0;  // W
  double p_static = 0.0;       // W

  bool operator==(const ConfigMetrics&) const = default;
};

struct ModuleCharacterization {
  std::array<ConfigMetrics, kConfigurationCount> by_config{};

  const ConfigMetrics& operator[](Configuration c) const { return by_config[index_of(c)]; }
  ConfigMetrics& operator[](Configuration c) { return by_config[index_of(c)]; }
  bool operator==(const ModuleCharacterization&) const = default;
};

struct ModuleSpec {
  std::string id;
  std::string clock_domain;
  double criticality = 0.0;
  std::optional<Configuration> placement;
  ModuleCharacterization characterization;

  bool operator==(const ModuleSpec&) const = default;
};

struct ClockDomain {
  std::string id;
  std::vector<std::string> members;

  bool operator==(const ClockDomain&) const = default;
};

/// Directed inter-module link. A bidirectional link is two channels.
struct Channel {
  std::string id;
  std::string src;
  std::string dst;
  double bandwidth = 0.0;        // bits/s
  double latency_on_chip = 0.0;  // s

  bool operator==(const Channel&) const = default;
};

struct ExposureTable {
  std::array<double, kConfigurationCount> values{0.05, 1.0, 0.9, 0.85};

  static ExposureTable defaults() { return {}; }
  double operator[](Configuration c) const { return values[index_of(c)]; }
  double& operator[](Configuration c) { return values[index_of(c)]; }
  bool operator==(const ExposureTable&) const = default;
};

/// Maximum end-to-end latency over a connected chain of channels.
struct LatencyConstraint {
  std::string id;
  std::vector<std::string> path;  // channel ids
  double max_latency = kUnbounded;

  bool operator==(const LatencyConstraint&) const = default;
};

/// User bounds on every system metric. Unset bounds are +infinity.
struct ConstraintSet {
  std::map<std::string, double> domain_f_min;  // Hz, per clock domain
  double p_total_max = kUnbounded;
  double p_trusted_max = kUnbounded;
  double p_untrusted_max = kUnbounded;
  double io_bandwidth_max = kUnbounded;
  double external_io_baseline = 0.0;
  std::vector<LatencyConstraint> latency_constraints;
  double area_total_max = kUnbounded;
  double inter_chip_delay = 0.0;

  static ConstraintSet unbounded() { return {}; }
  bool operator==(const ConstraintSet&) const = default;
};

struct SystemSpec {
  std::vector<ModuleSpec> modules;
  std::vector<ClockDomain> domains;
  std::vector<Channel> channels;
  ExposureTable exposure;

  std::optional<std::size_t> module_index(std::string_view id) const;
  std::optional<std::size_t> domain_index(std::string_view id) const;
  std::optional<std::size_t> channel_index(std::string_view id) const;

  bool operator==(const SystemSpec&) const = default;
};

/// One configuration per module, aligned with `SystemSpec::modules`.
struct SystemConfiguration {
  std::vector<Configuration> assignment;

  static SystemConfiguration uniform(const SystemSpec& spec, Configuration c) {
    return {std::vector<Configuration>(spec.modules.size(), c)};
  }
  Configuration operator[](std::size_t i) const { return assignment[i]; }
  std::size_t size() const { return assignment.size(); }
  bool operator==(const SystemConfiguration&) const = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
  void merge(const ValidationReport& other);
};

ValidationReport validate_system(const SystemSpec& spec);

/// Checks constraint bounds and that latency paths reference existing,
/// connected channels of `spec`.
ValidationReport validate_constraints(const SystemSpec& spec, const ConstraintSet& constraints);

/// Errors when `cfg` is not total over the modules or breaks a placement.
ValidationReport validate_configuration(const SystemSpec& spec, const SystemConfiguration& cfg);

}  // namespace scp
