#pragma once

#include <cstdint>
#include <numbers>

#include "aerosim/geom.hpp"

namespace aerosim {

/// Ambient air constants used by the force models. Gravity acts along -z.
struct AirProperties {
  double density = 1.204;              // kg/m^3
  double dynamic_viscosity = 1.81e-5;  // Pa s
  double gravity = 9.81;               // m/s^2

  bool valid() const {
    return density > 0.0 && dynamic_viscosity > 0.0 && gravity > 0.0 &&
           std::isfinite(density) && std::isfinite(dynamic_viscosity) && std::isfinite(gravity);
  }
};

struct Particle {
  std::int64_t id = 0;
  Vec3 position;            // m
  Vec3 velocity;            // m/s
  double diameter = 0.0;    // m, > 0
  double density = 1000.0;  // kg/m^3, > 0
  double viral_load = 0.0;  // dose units, >= 0
  std::int32_t emitter_id = -1;
  std::int64_t event_id = 0;
  double birth_time = 0.0;   // s
  double temperature = 310.0;  // K, carried as metadata only

  double mass() const { return density * (std::numbers::pi / 6.0) * diameter * diameter * diameter; }
};

inline double sphere_volume(double diameter) {
  return (std::numbers::pi / 6.0) * diameter * diameter * diameter;
}

}  // namespace aerosim
