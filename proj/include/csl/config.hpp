// Run configuration: JSON loading with strict key checking, canonical
// serialization, and the config hash embedded in every output file so that
// reruns are byte-identical and traceable.
#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "csl/constants.hpp"

namespace csl {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  PhononGeometry geometry = default_geometry();
  CollapseParams collapse{1e-8, 1e-7};
  std::string output_format = "csv";  // csv | json
  std::uint64_t seed = 20261;
  double threshold = 1.0;
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j,
                                std::initializer_list<const char*> known,
                                const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (const char* k : known)
      if (key == k) { found = true; break; }
    if (!found)
      throw std::invalid_argument("config: unknown key \"" + key + "\" in " + context);
  }
}

inline double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key))
    throw std::invalid_argument(std::string("config: missing key \"") + key + "\"");
  if (!j.at(key).is_number())
    throw std::invalid_argument(std::string("config: key \"") + key + "\" must be a number");
  return j.at(key).get<double>();
}

}  // namespace detail

inline PhononGeometry geometry_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(j,
                              {"radius", "thickness", "atom_density", "diamonds_count",
                               "mass_number", "m_star", "omega", "delta_z", "probe_delay"},
                              "geometry");
  PhononGeometry g;
  g.radius = detail::require_number(j, "radius");
  g.thickness = detail::require_number(j, "thickness");
  g.atom_density = detail::require_number(j, "atom_density");
  g.diamonds_count = j.value("diamonds_count", 2);
  g.mass_number = j.value("mass_number", 12);
  g.m_star = j.contains("m_star") ? detail::require_number(j, "m_star")
                                  : 6.0 * constants.m0;
  g.omega = detail::require_number(j, "omega");
  g.delta_z = detail::require_number(j, "delta_z");
  g.probe_delay = detail::require_number(j, "probe_delay");
  g.atoms = PhononGeometry::derived_atoms(g.atom_density, g.diamonds_count,
                                          g.radius, g.thickness);
  g.validate();
  return g;
}

inline nlohmann::json geometry_to_json(const PhononGeometry& g) {
  return {{"radius", g.radius},
          {"thickness", g.thickness},
          {"atom_density", g.atom_density},
          {"diamonds_count", g.diamonds_count},
          {"mass_number", g.mass_number},
          {"m_star", g.m_star},
          {"omega", g.omega},
          {"delta_z", g.delta_z},
          {"probe_delay", g.probe_delay}};
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  detail::reject_unknown_keys(
      j, {"geometry", "collapse", "output_format", "seed", "threshold"}, "config");
  RunConfig cfg;
  if (j.contains("geometry")) {
    if (j.at("geometry").is_string()) {
      if (j.at("geometry").get<std::string>() != "default")
        throw std::invalid_argument("config: geometry string must be \"default\"");
    } else {
      cfg.geometry = geometry_from_json(j.at("geometry"));
    }
  }
  if (j.contains("collapse")) {
    detail::reject_unknown_keys(j.at("collapse"), {"lambda", "r_c"}, "collapse");
    cfg.collapse.lambda = detail::require_number(j.at("collapse"), "lambda");
    cfg.collapse.r_c = detail::require_number(j.at("collapse"), "r_c");
    cfg.collapse.validate();
  }
  if (j.contains("output_format")) {
    cfg.output_format = j.at("output_format").get<std::string>();
    if (cfg.output_format != "csv" && cfg.output_format != "json")
      throw std::invalid_argument("config: output_format must be csv or json");
  }
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("threshold")) {
    cfg.threshold = detail::require_number(j, "threshold");
    if (!(cfg.threshold > 0.0))
      throw std::invalid_argument("config: threshold must be > 0");
  }
  return cfg;
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
  return {{"geometry", geometry_to_json(cfg.geometry)},
          {"collapse", {{"lambda", cfg.collapse.lambda}, {"r_c", cfg.collapse.r_c}}},
          {"output_format", cfg.output_format},
          {"seed", cfg.seed},
          {"threshold", cfg.threshold}};
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

// FNV-1a over the canonical JSON dump.
inline std::string config_hash(const RunConfig& cfg) {
  const std::string dump = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace csl
