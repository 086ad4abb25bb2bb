#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scp/error.hpp"
#include "scp/optimizer.hpp"

namespace scp {

struct RunRecord {
  std::uint64_t run_id = 0;
  ConstraintSet constraints;
  ConfigSet enabled_configs = ConfigSet::all();
  OptimizerResult result;
  std::optional<EvaluationResult> eval;  // of the best configuration
  std::string timestamp;                 // ISO-8601 UTC

  /// Equality ignoring run_id and timestamp.
  bool same_outcome(const RunRecord& other) const;
};

/// Checks inputs, then runs branch_and_bound restricted to `enabled`.
/// Throws Error if `enabled` lacks TRUSTED or UNTRUSTED, or a module is
/// placed in a disabled configuration.
RunRecord run_once(const SystemSpec& spec, const ConstraintSet& constraints, ConfigSet enabled = ConfigSet::all());

enum class SweepMode { Product, Zip };

/// Axis paths: p_total_max, p_trusted_max, p_untrusted_max,
/// io_bandwidth_max, external_io_baseline, area_total_max,
/// inter_chip_delay, domain_f_min.<domain>, latency.<constraint>,
/// enabled_configs. A null value removes the bound.
struct SweepAxis {
  std::string path;
  std::vector<nlohmann::json> values;
};

struct SweepSpec {
  ConstraintSet base;
  ConfigSet enabled_configs = ConfigSet::all();
  SweepMode mode = SweepMode::Product;
  std::vector<SweepAxis> axes;
};

struct SweepPoint {
  ConstraintSet constraints;
  ConfigSet enabled_configs;
};

/// Product mode varies the first axis slowest. Zip mode requires equal
/// axis lengths. No axes yields the single base point.
std::vector<SweepPoint> expand_sweep(const SweepSpec& sweep);

class SweepError : public Error {
 public:
  SweepError(std::size_t point, const std::string& what)
      : Error("sweep point " + std::to_string(point) + ": " + what), point_(point) {}
  std::size_t point() const noexcept { return point_; }

 private:
  std::size_t point_;
};

/// Runs every point on up to `workers` threads. Record i belongs to point i
/// and carries run_id i. On failure throws SweepError for the lowest
/// failing point.
std::vector<RunRecord> run_sweep(const SystemSpec& spec, const SweepSpec& sweep, std::size_t workers = 1);

SweepSpec sweep_from_json(const nlohmann::json& j);
nlohmann::json sweep_to_json(const SweepSpec& sweep);

nlohmann::json run_record_to_json(const SystemSpec& spec, const RunRecord& r);
RunRecord run_record_from_json(const SystemSpec& spec, const nlohmann::json& j);
nlohmann::json report_to_json(const SystemSpec& spec, const std::vector<RunRecord>& records);

/// Append-only run history with monotone ids. Thread safe.
class RunStore {
 public:
  /// Assigns the next id and returns the stored record.
  RunRecord add(RunRecord r);
  std::optional<RunRecord> get(std::uint64_t id) const;
  bool erase(std::uint64_t id);
  std::vector<RunRecord> list() const;
  std::size_t size() const;

  nlohmann::json to_json(const SystemSpec& spec) const;
  void load_json(const SystemSpec& spec, const nlohmann::json& j);

 private:
  mutable std::mutex mu_;
  std::vector<RunRecord> runs_;
  std::uint64_t next_id_ = 0;
};

}  // namespace scp
