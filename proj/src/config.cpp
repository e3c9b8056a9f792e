#include "nv0/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "nv0/csv.hpp"
#include "nv0/errors.hpp"

namespace nv0 {

namespace {

using Field = double PhysicalConstants::*;

const std::pair<const char*, Field> kFields[] = {
    {"lambda_par", &PhysicalConstants::lambda_par},
    {"d_perp", &PhysicalConstants::d_perp},
    {"d_par", &PhysicalConstants::d_par},
    {"d_ge", &PhysicalConstants::d_ge},
    {"eps_es", &PhysicalConstants::eps_es},
    {"eps_A1", &PhysicalConstants::eps_A1},
    {"eps_A1_prime", &PhysicalConstants::eps_A1_prime},
    {"eps_E", &PhysicalConstants::eps_E},
    {"eps_E_prime", &PhysicalConstants::eps_E_prime},
};

std::string trim(std::string s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

void assign(PhysicalConstants& c, const std::string& key, double v, const std::string& where) {
  if (key == "kB") throw ConfigError(where + "kB is fixed and cannot be overridden");
  for (const auto& [name, ptr] : kFields) {
    if (key == name) {
      if (!std::isfinite(v)) throw ConfigError(where + "non-finite value for " + key);
      c.*ptr = v;
      return;
    }
  }
  throw ConfigError(where + "unknown key '" + key + "'");
}

}  // namespace

PhysicalConstants parse_constants(const std::string& text, PhysicalConstants base) {
  std::istringstream in(text);
  std::string line;
  std::string table;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = "config line " + std::to_string(lineno) + ": ";
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed table header");
      table = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!table.empty() && table != "constants") {
      throw ConfigError(where + "unknown table [" + table + "]");
    }
    double v;
    try {
      v = parse_double(val);
    } catch (const InvalidArgument&) {
      throw ConfigError(where + "value for '" + key + "' is not a number");
    }
    assign(base, key, v, where);
  }
  return base;
}

PhysicalConstants load_constants(const std::filesystem::path& path, PhysicalConstants base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_constants(ss.str(), base);
}

std::string constants_to_config(const PhysicalConstants& c) {
  std::string out = "[constants]\n";
  for (const auto& [name, ptr] : kFields) out += std::string(name) + " = " + format_double(c.*ptr) + "\n";
  return out;
}

nlohmann::json constants_to_json(const PhysicalConstants& c) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, ptr] : kFields) j[name] = c.*ptr;
  j["kB"] = PhysicalConstants::kB;
  return j;
}

PhysicalConstants constants_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("constants JSON must be an object");
  PhysicalConstants c;
  for (const auto& [key, val] : j.items()) {
    if (key == "kB") {
      if (!val.is_number() || val.get<double>() != PhysicalConstants::kB)
        throw ConfigError("kB is fixed and cannot be overridden");
      continue;
    }
    if (!val.is_number()) throw ConfigError("constant '" + key + "' must be a number");
    assign(c, key, val.get<double>(), "");
  }
  return c;
}

PhysicalConstants resolve_constants(const std::string& explicit_path) {
  if (!explicit_path.empty()) return load_constants(explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env && *env) return load_constants(env);
  return {};
}

}  // namespace nv0
