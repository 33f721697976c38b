#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "aerosim/physics.hpp"
#include "aerosim/rng.hpp"

using namespace aerosim;

namespace {

Particle water_droplet(double diameter) {
  Particle p;
  p.diameter = diameter;
  p.density = 1000.0;
  return p;
}

// Independent drag-magnitude oracle: Stokes with Schiller-Naumann factor,
// written out from the formula rather than calling the implementation.
double drag_oracle(double diameter, double speed, const AirProperties& air) {
  const double re = air.density * speed * diameter / air.dynamic_viscosity;
  const double f = 1.0 + 0.15 * std::pow(std::min(re, 1000.0), 0.687);
  return 3.0 * std::numbers::pi * air.dynamic_viscosity * diameter * f * speed;
}

double body_oracle(double diameter, double rho_p, const AirProperties& air) {
  return (rho_p - air.density) * (std::numbers::pi / 6.0) * diameter * diameter * diameter *
         air.gravity;
}

// Drag-balance settling speed by bisection on the oracle formulas.
double terminal_speed_oracle(double diameter, const AirProperties& air) {
  double lo = 1e-9, hi = 10.0;
  const double weight = body_oracle(diameter, 1000.0, air);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (drag_oracle(diameter, mid, air) > weight ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("drag force vanishes without relative motion") {
  Particle p = water_droplet(10e-6);
  p.velocity = {1.5, -0.5, 2.0};
  const Vec3 f = drag_force(p, p.velocity, AirProperties{});
  CHECK(f == Vec3{0, 0, 0});
}

TEST_CASE("drag force matches the Stokes hand calculation at 10 um") {
  AirProperties air;
  Particle p = water_droplet(10e-6);
  p.velocity = {0.003, 0, 0};
  const Vec3 f = drag_force(p, {0, 0, 0}, air);
  const double expected = drag_oracle(10e-6, 0.003, air);
  // Hand-calculator value of the pure Stokes part; the correction at
  // Re ~ 2e-3 is within 0.3%.
  CHECK(expected == doctest::Approx(5.1176544326977732e-12).epsilon(3e-3));
  CHECK(f.x == doctest::Approx(-expected).epsilon(1e-12));
  CHECK(f.y == 0.0);
  CHECK(f.z == 0.0);
}

TEST_CASE("drag opposes relative velocity") {
  RandomStream rng(7, 1);
  AirProperties air;
  for (int i = 0; i < 200; ++i) {
    Particle p = water_droplet(rng.uniform(1e-6, 500e-6));
    p.velocity = {rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    const Vec3 u{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Vec3 v_rel = p.velocity - u;
    if (norm(v_rel) == 0.0) continue;
    CHECK(dot(drag_force(p, u, air), v_rel) < 0.0);
  }
}

TEST_CASE("drag correction caps at Re = 1000") {
  CHECK(drag_correction(1000.0) == drag_correction(5000.0));
  CHECK(drag_correction(10.0) > 1.0);
}

TEST_CASE("neutral buoyancy gives zero body force") {
  AirProperties air;
  Particle p = water_droplet(50e-6);
  p.density = air.density;
  CHECK(body_force(p, air) == Vec3{0, 0, 0});
}

TEST_CASE("body force on a 100 um water droplet") {
  AirProperties air;
  const Vec3 f = body_force(water_droplet(100e-6), air);
  CHECK(f.x == 0.0);
  CHECK(f.y == 0.0);
  CHECK(f.z == doctest::Approx(-5.1303196378170143e-9).epsilon(1e-12));
}

TEST_CASE("body force scales with diameter cubed") {
  AirProperties air;
  const Vec3 big = body_force(water_droplet(100e-6), air);
  const Vec3 small = body_force(water_droplet(1e-6), air);
  CHECK(small.z / big.z == doctest::Approx(1e-6).epsilon(1e-12));
}

TEST_CASE("integrator core: inertial motion under zero acceleration") {
  Vec3 x{0, 0, 0}, v{1, 0, 0};
  integrate_step(x, v, {0, 0, 0}, 0.0, {0, 0, 0}, 0.1);
  CHECK(x == Vec3{0.1, 0, 0});
  CHECK(v == Vec3{1, 0, 0});
}

TEST_CASE("invalid step inputs are rejected") {
  AirflowField field;
  AirProperties air;
  Particle p = water_droplet(10e-6);
  CHECK_THROWS_AS(step(p, field, air, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(step(p, field, air, 0.0, -1e-3), std::invalid_argument);
  p.diameter = 0.0;
  CHECK_THROWS_AS(step(p, field, air, 0.0, 1e-3), std::invalid_argument);
  p = water_droplet(10e-6);
  p.velocity.x = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(drag_force(p, {0, 0, 0}, air), std::invalid_argument);
}

TEST_CASE("settling speed converges to the drag-balance root") {
  AirProperties air;
  AirflowField still;
  const double dt = 1e-4;

  SUBCASE("10 um droplet") {
    const double root = terminal_speed_oracle(10e-6, air);
    CHECK(root == doctest::Approx(3.0011346e-3).epsilon(1e-5));
    // Stokes closed form (no correction, no buoyancy) confirms the scale.
    const double stokes = 1000.0 * air.gravity * 10e-6 * 10e-6 / (18.0 * air.dynamic_viscosity);
    CHECK(root == doctest::Approx(stokes).epsilon(0.005));

    Particle p = water_droplet(10e-6);
    p.position = {0, 0, 100.0};
    for (int i = 0; i < 10000; ++i) p = step(p, still, air, i * dt, dt);
    CHECK(norm(p.velocity) == doctest::Approx(root).epsilon(0.01));
    CHECK(p.velocity.z < 0.0);
  }

  SUBCASE("100 um droplet") {
    const double root = terminal_speed_oracle(100e-6, air);
    CHECK(root == doctest::Approx(0.248202066).epsilon(1e-5));
    Particle p = water_droplet(100e-6);
    p.position = {0, 0, 100.0};
    for (int i = 0; i < 30000; ++i) p = step(p, still, air, i * dt, dt);
    CHECK(norm(p.velocity) == doctest::Approx(root).epsilon(0.01));
  }
}

TEST_CASE("particle at rest approaches a uniform field") {
  AirProperties air;
  AirflowField field;
  field.add_uniform({5, 0, 0});

  // Independent fine-step explicit-Euler oracle of the 1D momentum ODE,
  // gravity off to isolate the drag relaxation.
  const double d = 50e-6;
  const double mass = 1000.0 * (std::numbers::pi / 6.0) * d * d * d;
  double v_oracle = 0.0;
  const double fine = 1e-7;
  for (double t = 0.0; t < 0.02; t += fine) {
    const double speed = std::fabs(5.0 - v_oracle);
    v_oracle += drag_oracle(d, speed, air) / mass * fine;
  }

  Particle p = water_droplet(d);
  AirProperties no_gravity = air;
  no_gravity.gravity = 1e-30;  // isolate drag
  const double dt = 1e-4;
  for (int i = 0; i < 200; ++i) p = step(p, field, no_gravity, i * dt, dt);
  CHECK(p.velocity.x == doctest::Approx(v_oracle).epsilon(0.02));

  for (int i = 200; i < 20000; ++i) p = step(p, field, no_gravity, i * dt, dt);
  CHECK(p.velocity.x == doctest::Approx(5.0).epsilon(1e-4));
}

TEST_CASE("speed is non-increasing in still air with negligible body force") {
  AirProperties air;
  air.gravity = 1e-30;
  AirflowField still;
  RandomStream rng(11, 2);
  for (int trial = 0; trial < 20; ++trial) {
    Particle p = water_droplet(rng.uniform(5e-6, 300e-6));
    p.velocity = {rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-10, 10)};
    double prev = norm(p.velocity);
    for (int i = 0; i < 100; ++i) {
      p = step(p, still, air, i * 1e-3, 1e-3);
      const double s = norm(p.velocity);
      CHECK(s <= prev);
      prev = s;
    }
  }
}

TEST_CASE("step is bit-deterministic") {
  AirProperties air;
  AirflowField field;
  field.add_uniform({1.0, -2.0, 0.5});
  Particle p = water_droplet(80e-6);
  p.position = {0.1, 0.2, 1.5};
  p.velocity = {3.0, -1.0, 0.2};
  const Particle a = step(p, field, air, 0.25, 1e-3);
  const Particle b = step(p, field, air, 0.25, 1e-3);
  CHECK(std::memcmp(&a, &b, sizeof(Particle)) == 0);
}
