#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "nv0/model.hpp"

namespace nv0 {

inline constexpr const char* kConfigEnvVar = "NV0_CONFIG";

// key = value lines, optional [constants] table, '#' comments.
PhysicalConstants parse_constants(const std::string& text, PhysicalConstants base = {});
PhysicalConstants load_constants(const std::filesystem::path& path, PhysicalConstants base = {});
std::string constants_to_config(const PhysicalConstants& c);

nlohmann::json constants_to_json(const PhysicalConstants& c);
PhysicalConstants constants_from_json(const nlohmann::json& j);

// explicit path wins, then NV0_CONFIG, then defaults
PhysicalConstants resolve_constants(const std::string& explicit_path);

}  // namespace nv0
