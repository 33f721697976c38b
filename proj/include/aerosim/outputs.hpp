#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerosim/simulation.hpp"

namespace aerosim {

/// Plane-crossing counts binned onto the scenario's (x, y) grid.
struct DensityMap {
  std::int32_t cells_x = 0;
  std::int32_t cells_y = 0;
  std::vector<std::int64_t> counts;  // row-major, row = y index from y_min
  std::int64_t dropped = 0;          // crossings outside the grid

  std::int64_t at(std::int32_t ix, std::int32_t iy) const {
    return counts[static_cast<std::size_t>(iy) * static_cast<std::size_t>(cells_x) +
                  static_cast<std::size_t>(ix)];
  }
  std::int64_t total() const;
};

DensityMap density_map(const SimulationReport& report, const Scenario& scenario);

/// Writes absorptions.csv, infections.csv, density.csv, density.pgm and
/// summary.json into out_dir. Files are staged as *.tmp and renamed once all
/// writes succeeded, so a failed run leaves no partial outputs behind.
void write_outputs(const SimulationReport& report, const Scenario& scenario,
                   const std::string& out_dir);

/// Round-trip helpers for the CSV formats (used by tests and `mi`).
std::vector<CollisionRecord> read_absorptions_csv(const std::string& path,
                                                  const std::vector<std::string>& person_ids);

nlohmann::json channel_to_json(const DiscreteChannel& ch);
DiscreteChannel channel_from_json(const nlohmann::json& doc);
DiscreteChannel load_channel_file(const std::string& path);

/// Formats a double so that parsing it back restores the exact bits.
std::string format_double(double v);

}  // namespace aerosim
