#include "scp/technology.hpp"

#include <cmath>

#include "json_util.hpp"

namespace scp {

using namespace detail;

Technology Technology::scaled(std::string new_name, double delay, double area, double leakage,
                              double switch_energy) const {
  Technology out = *this;
  out.name = std::move(new_name);
  for (auto& c : out.cells) {
    c.delay *= delay;
    c.area *= area;
    c.leakage *= leakage;
    c.switch_energy *= switch_energy;
  }
  out.seq_overhead *= delay;
  return out;
}

void check_technology(const Technology& tech) {
  auto positive = [&](double v, const std::string& path) {
    if (!(v > 0.0) || !std::isfinite(v)) throw SchemaError(path, "must be a positive number");
  };
  for (std::size_t i = 0; i < kCellTypeCount; ++i) {
    const std::string at = "cells." + std::string(to_string(static_cast<CellType>(i)));
    positive(tech.cells[i].delay, at + ".delay");
    positive(tech.cells[i].area, at + ".area");
    positive(tech.cells[i].leakage, at + ".leakage");
    positive(tech.cells[i].switch_energy, at + ".switch_energy");
  }
  positive(tech.seq_overhead, "seq_overhead");
  if (!(tech.activity_factor > 0.0 && tech.activity_factor <= 1.0))
    throw SchemaError("activity_factor", "must lie in (0, 1]");
}

Technology technology_from_json(const json& j) {
  Technology tech;
  tech.name = get_string(j, "name", "");
  const json& cells = require(j, "cells", "");
  if (!cells.is_object()) throw SchemaError("cells", "expected an object");
  for (auto it = cells.begin(); it != cells.end(); ++it)
    if (!cell_type_from_string(it.key()))
      throw SchemaError(field("cells", it.key()), "unknown cell type");
  for (std::size_t i = 0; i < kCellTypeCount; ++i) {
    const std::string name(to_string(static_cast<CellType>(i)));
    const json& c = require(cells, name, "cells");
    const std::string at = field("cells", name);
    tech.cells[i] = {get_number(c, "delay", at), get_number(c, "area", at),
                     get_number(c, "leakage", at), get_number(c, "switch_energy", at)};
  }
  tech.seq_overhead = get_number(j, "seq_overhead", "");
  tech.activity_factor = get_number_or(j, "activity_factor", "", 0.1);
  check_technology(tech);
  return tech;
}

Technology parse_technology(std::string_view text) { return technology_from_json(parse_json(text)); }

json technology_to_json(const Technology& tech) {
  json cells = json::object();
  for (std::size_t i = 0; i < kCellTypeCount; ++i) {
    const auto& c = tech.cells[i];
    cells[std::string(to_string(static_cast<CellType>(i)))] = {
        {"delay", c.delay}, {"area", c.area}, {"leakage", c.leakage},
        {"switch_energy", c.switch_energy}};
  }
  return {{"name", tech.name}, {"cells", cells}, {"seq_overhead", tech.seq_overhead},
          {"activity_factor", tech.activity_factor}};
}

}  // namespace scp
