#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "scp/system.hpp"

namespace scp {

/// A system file: the problem instance plus, optionally, a constraint set
/// stored under the "constraints" key.
struct SystemDocument {
  SystemSpec system;
  std::optional<ConstraintSet> constraints;
};

/// Parses the system JSON schema. Throws ParseError on malformed JSON and
/// SchemaError on missing/mistyped fields, an empty module list, or
/// duplicate ids. Semantic invariants are left to validate_system().
SystemDocument load_system_document(std::string_view text);
SystemSpec load_system(std::string_view text);
std::string save_system(const SystemSpec& spec, const ConstraintSet* constraints = nullptr);

nlohmann::json system_to_json(const SystemSpec& spec);
SystemSpec system_from_json(const nlohmann::json& j);

/// Unbounded fields are omitted on output and read back as +infinity.
nlohmann::json constraints_to_json(const ConstraintSet& cs);
ConstraintSet constraints_from_json(const nlohmann::json& j, const std::string& path = "constraints");
ConstraintSet load_constraints(std::string_view text);

nlohmann::json characterization_to_json(const ModuleCharacterization& mc);
ModuleCharacterization characterization_from_json(const nlohmann::json& j, const std::string& path);

/// Assignment files map module id to configuration name; every module must
/// appear exactly once.
nlohmann::json configuration_to_json(const SystemSpec& spec, const SystemConfiguration& cfg);
SystemConfiguration configuration_from_json(const SystemSpec& spec, const nlohmann::json& j);

nlohmann::json config_set_to_json(ConfigSet set);
ConfigSet config_set_from_json(const nlohmann::json& j, const std::string& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace scp
