#pragma once

#include <array>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "scp/netlist.hpp"

namespace scp {

struct CellCost {
  double delay = 0.0;          // s
  double area = 0.0;           // um^2
  double leakage = 0.0;        // W
  double switch_energy = 0.0;  // J per transition

  bool operator==(const CellCost&) const = default;
};

/// Cost model standing in for a standard-cell library.
struct Technology {
  std::string name;
  std::array<CellCost, kCellTypeCount> cells{};
  double seq_overhead = 0.0;  // clock-to-q plus setup, once per register-bounded path
  double activity_factor = 0.1;

  const CellCost& operator[](CellType t) const { return cells[static_cast<std::size_t>(t)]; }
  CellCost& operator[](CellType t) { return cells[static_cast<std::size_t>(t)]; }

  /// Uniformly scaled copy; `delay` also scales seq_overhead.
  Technology scaled(std::string new_name, double delay, double area, double leakage,
                    double switch_energy) const;

  bool operator==(const Technology&) const = default;
};

/// Throws SchemaError unless every cost is positive and finite and
/// activity_factor lies in (0, 1].
void check_technology(const Technology& tech);

Technology technology_from_json(const nlohmann::json& j);
Technology parse_technology(std::string_view text);
nlohmann::json technology_to_json(const Technology& tech);

}  // namespace scp
