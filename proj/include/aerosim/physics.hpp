#pragma once

#include "aerosim/airflow.hpp"
#include "aerosim/particle.hpp"

namespace aerosim {

/// Schiller-Naumann correction factor on Stokes drag. Re is clamped at 1000;
/// above that the factor stays at its Re=1000 value.
double drag_correction(double reynolds);

/// Particle Reynolds number for a given relative speed.
double particle_reynolds(double rel_speed, double diameter, const AirProperties& air);

/// Stokes drag with Schiller-Naumann correction. Opposes the relative
/// velocity p.velocity - air_velocity; zero when there is no relative motion.
Vec3 drag_force(const Particle& p, const Vec3& air_velocity, const AirProperties& air);

/// Gravity minus buoyancy: (rho_p - rho_air) * (pi/6) d^3 * g, pointing -z.
Vec3 body_force(const Particle& p, const AirProperties& air);

/// Velocity/position update used by `step`. Drag is handled implicitly
/// (beta multiplies the end-of-step velocity) so the update stays stable for
/// small particles whose momentum response time is far below dt. beta is the
/// drag rate 3 pi mu d f(Re) / m in 1/s, g_eff the body acceleration.
void integrate_step(Vec3& position, Vec3& velocity, const Vec3& air_velocity, double beta,
                    const Vec3& g_eff, double dt);

/// Advances a particle one step of length dt through the given airflow field.
/// Air velocity and f(Re) are sampled at the current position/velocity; the
/// drag term itself acts on the end-of-step velocity.
Particle step(const Particle& p, const AirflowField& field, const AirProperties& air, double t,
              double dt);

}  // namespace aerosim
