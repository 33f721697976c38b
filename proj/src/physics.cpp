#include "aerosim/physics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aerosim {

namespace {
constexpr double kReynoldsCap = 1000.0;
}

double drag_correction(double reynolds) {
  const double re = std::min(reynolds, kReynoldsCap);
  return 1.0 + 0.15 * std::pow(re, 0.687);
}

double particle_reynolds(double rel_speed, double diameter, const AirProperties& air) {
  return air.density * rel_speed * diameter / air.dynamic_viscosity;
}

static void check_inputs(const Particle& p, const AirProperties& air) {
  if (!(p.diameter > 0.0) || !(p.density > 0.0) || !std::isfinite(p.diameter) ||
      !std::isfinite(p.density) || !is_finite(p.position) || !is_finite(p.velocity)) {
    throw std::invalid_argument("particle has non-finite or non-positive fields");
  }
  if (!air.valid()) throw std::invalid_argument("invalid air properties");
}

Vec3 drag_force(const Particle& p, const Vec3& air_velocity, const AirProperties& air) {
  check_inputs(p, air);
  if (!is_finite(air_velocity)) throw std::invalid_argument("non-finite air velocity");
  const Vec3 v_rel = p.velocity - air_velocity;
  const double speed = norm(v_rel);
  if (speed == 0.0) return {0, 0, 0};
  const double re = particle_reynolds(speed, p.diameter, air);
  const double coeff = 3.0 * std::numbers::pi * air.dynamic_viscosity * p.diameter * drag_correction(re);
  return v_rel * -coeff;
}

Vec3 body_force(const Particle& p, const AirProperties& air) {
  check_inputs(p, air);
  const double magnitude =
      (p.density - air.density) * (std::numbers::pi / 6.0) * p.diameter * p.diameter * p.diameter * air.gravity;
  return {0, 0, -magnitude};
}

void integrate_step(Vec3& position, Vec3& velocity, const Vec3& air_velocity, double beta,
                    const Vec3& g_eff, double dt) {
  velocity = (velocity + (air_velocity * beta + g_eff) * dt) / (1.0 + beta * dt);
  position += velocity * dt;
}

Particle step(const Particle& p, const AirflowField& field, const AirProperties& air, double t,
              double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  check_inputs(p, air);

  const Vec3 u = field.sample(p.position, t);
  const double rel_speed = norm(p.velocity - u);
  const double re = particle_reynolds(rel_speed, p.diameter, air);
  const double beta =
      3.0 * std::numbers::pi * air.dynamic_viscosity * p.diameter * drag_correction(re) / p.mass();
  const Vec3 g_eff{0, 0, -(1.0 - air.density / p.density) * air.gravity};

  Particle out = p;
  integrate_step(out.position, out.velocity, u, beta, g_eff, dt);
  return out;
}

}  // namespace aerosim
