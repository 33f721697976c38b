#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "aerosim/airflow.hpp"
#include "aerosim/errors.hpp"
#include "aerosim/particle.hpp"
#include "aerosim/person.hpp"

namespace aerosim {

struct DensityGrid {
  double x_min = -1.0;
  double x_max = 4.0;
  double y_min = -2.0;
  double y_max = 2.0;
  std::int32_t cells_x = 125;
  std::int32_t cells_y = 100;
};

/// Fully validated simulation input. Everything a run produces is a pure
/// function of this plus the seed.
struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  double horizon = 0.0;
  double dt = 1e-3;
  Vec3 domain_min{-10, -10, -1};
  Vec3 domain_max{10, 10, 5};
  AirProperties air;
  Vec3 background_uniform{0, 0, 0};
  std::vector<CylinderJet> background_jets;
  double density_plane_height = 0.65;
  DensityGrid grid;
  std::vector<Person> persons;

  std::vector<std::string> warnings;  // load-time diagnostics, not part of the document

  void validate() const;  // throws ValidationError with a field path
};

/// Parses and validates a scenario document. Unknown fields are rejected;
/// every failure names the offending field path. base_dir resolves relative
/// angle-CDF CSV paths.
Scenario scenario_from_json(const nlohmann::json& doc, const std::string& base_dir = ".");

Scenario load_scenario_file(const std::string& path);

/// Canonical document with all defaults materialized; input to the config
/// hash and the summary echo.
nlohmann::json scenario_to_json(const Scenario& s);

/// Built-in three-person cough demonstration: A coughs at t=0 toward B two
/// meters away; C, offset 0.75 m from B, is activated as a second emitter at
/// t=3 s despite receiving nothing.
nlohmann::json paper_demo_document();
Scenario paper_demo_scenario();

std::uint64_t fnv1a64(std::string_view data);
std::string config_hash_hex(const Scenario& s);

/// Two-column CSV (angle_rad, cum_prob); a non-numeric first line is treated
/// as a header and skipped.
AngleCdf load_angle_cdf_csv(const std::string& path);

}  // namespace aerosim
