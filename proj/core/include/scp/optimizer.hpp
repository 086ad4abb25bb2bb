#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scp/configuration.hpp"
#include "scp/metrics.hpp"
#include "scp/system.hpp"

namespace scp {

inline constexpr std::size_t kBruteForceModuleCap = 14;

struct SearchNode {
  std::map<std::string, Configuration> partial;
  double lb_vulnerability = 0.0;
  std::size_t depth = 0;
};

enum class PruneReason {
  DomainFrequency,
  Bandwidth,
  Latency,
  Area,
  PowerTotal,
  PowerTrusted,
  PowerUntrusted,
  Vulnerability,
};

std::string_view to_string(PruneReason r) noexcept;

struct PruneEvent {
  SearchNode node;
  PruneReason reason;
  std::optional<SystemConfiguration> incumbent;
  std::optional<double> incumbent_vulnerability;
};

struct OptimizerOptions {
  ConfigSet enabled = ConfigSet::all();
  /// Called for every pruned node. Slows the search; meant for tests.
  std::function<void(const PruneEvent&)> on_prune;
};

struct OptimizerResult {
  std::optional<SystemConfiguration> best;
  std::optional<EvaluationResult> best_eval;
  std::uint64_t nodes_visited = 0;
  std::uint64_t nodes_pruned = 0;
  bool proven_optimal = false;

  bool operator==(const OptimizerResult&) const = default;
};

/// Configurations a module may take: its placement if fixed, else `enabled`.
std::vector<Configuration> allowed_configurations(const SystemSpec& spec, std::size_t module, ConfigSet enabled);

/// Branching order: fewest allowed configurations first, then descending
/// criticality, then id.
std::vector<std::size_t> search_order(const SystemSpec& spec, ConfigSet enabled = ConfigSet::all());

/// For equal-vulnerability configurations: lower total power, then lower
/// total area, then lexicographic over modules in declaration order.
std::strong_ordering tie_break(const SystemConfiguration& a, const SystemConfiguration& b, const SystemSpec& spec);

/// Exhaustive search. Throws Error above kBruteForceModuleCap modules.
OptimizerResult brute_force(const SystemSpec& spec, const ConstraintSet& constraints,
                            const OptimizerOptions& options = {});

OptimizerResult branch_and_bound(const SystemSpec& spec, const ConstraintSet& constraints,
                                 const OptimizerOptions& options = {});

nlohmann::json optimizer_result_to_json(const SystemSpec& spec, const OptimizerResult& r);
OptimizerResult optimizer_result_from_json(const SystemSpec& spec, const nlohmann::json& j);

}  // namespace scp
