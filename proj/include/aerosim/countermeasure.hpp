#pragma once

#include <map>
#include <string>
#include <variant>

#include "aerosim/geom.hpp"
#include "aerosim/scenario.hpp"

namespace aerosim {

/// Face mask: thins every emission to keep_prob of its particles (coupled
/// per-particle uniforms) and scales the expelled speed distribution.
struct MaskAction {
  double keep_prob = 1.0;
  double speed_factor = 1.0;
};

/// Social distancing: rigid translation per person id.
struct DistanceAction {
  std::map<std::string, Vec3> translations;
};

/// Time slots: per-person delay of all event processes.
struct TimeShiftAction {
  std::map<std::string, double> delays;
};

using CountermeasureAction = std::variant<MaskAction, DistanceAction, TimeShiftAction>;

/// Scenario transform realizing the preventive action. Throws
/// ValidationError on out-of-range factors or unknown person ids.
Scenario apply_countermeasure(Scenario scenario, const CountermeasureAction& action);

}  // namespace aerosim
