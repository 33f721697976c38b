#include <doctest.h>

#include <cmath>

#include "aerosim/absorber.hpp"
#include "aerosim/rng.hpp"

using namespace aerosim;

namespace {

SphereAbsorber unit_sphere() { return {{0, 0, 0}, 1.0, 0, ApertureKind::Face, 1.0}; }

// Dense-sampling reference: hit iff any of n points along the segment lies
// inside the sphere; first inside sample approximates the entry parameter.
std::optional<double> brute_force_hit(const Vec3& x0, const Vec3& x1, const SphereAbsorber& s,
                                      int n) {
  const double r2 = s.radius * s.radius;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    if (norm_sq(x0 + (x1 - x0) * t - s.center) <= r2) return t;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("chord through the center") {
  const auto hit = sweep_collide({-2, 0, 0}, {2, 0, 0}, unit_sphere());
  REQUIRE(hit.has_value());
  CHECK(hit->fraction == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(hit->point.x == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(hit->point.y == 0.0);
  CHECK(hit->point.z == 0.0);
}

TEST_CASE("segment passing above misses") {
  CHECK_FALSE(sweep_collide({-2, 0, 2}, {2, 0, 2}, unit_sphere()).has_value());
}

TEST_CASE("tangent segment touches at the midpoint") {
  const auto hit = sweep_collide({-2, 0, 1}, {2, 0, 1}, unit_sphere());
  REQUIRE(hit.has_value());
  CHECK(hit->fraction == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(hit->point.x == doctest::Approx(0.0));
  CHECK(hit->point.z == doctest::Approx(1.0));
}

TEST_CASE("segment starting inside reports fraction zero") {
  const auto hit = sweep_collide({0.5, 0, 0}, {5, 0, 0}, unit_sphere());
  REQUIRE(hit.has_value());
  CHECK(hit->fraction == 0.0);
  CHECK(hit->point == Vec3{0.5, 0, 0});
}

TEST_CASE("zero-length segments") {
  CHECK_FALSE(sweep_collide({3, 0, 0}, {3, 0, 0}, unit_sphere()).has_value());
  const auto inside = sweep_collide({0.2, 0, 0}, {0.2, 0, 0}, unit_sphere());
  REQUIRE(inside.has_value());
  CHECK(inside->fraction == 0.0);
}

TEST_CASE("segment leaving the sphere from inside still reports zero") {
  // Entering happened before this segment started.
  const auto hit = sweep_collide({0.9, 0, 0}, {1.5, 0, 0}, unit_sphere());
  REQUIRE(hit.has_value());
  CHECK(hit->fraction == 0.0);
}

TEST_CASE("ground crossing examples") {
  const auto mid = ground_collide({0, 0, 1}, {0, 0, -1});
  REQUIRE(mid.has_value());
  CHECK(mid->fraction == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(mid->point == Vec3{0, 0, 0});

  CHECK_FALSE(ground_collide({0, 0, 1}, {1, 0, 0.5}).has_value());

  const auto slanted = ground_collide({0, 0, 0.2}, {2, 0, -0.2});
  REQUIRE(slanted.has_value());
  CHECK(slanted->fraction == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(slanted->point.x == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(slanted->point.z == 0.0);
}

TEST_CASE("ground test ignores upward and underground segments") {
  CHECK_FALSE(ground_collide({0, 0, -1}, {0, 0, 1}).has_value());
  CHECK_FALSE(ground_collide({0, 0, -1}, {0, 0, -2}).has_value());
}

TEST_CASE("plane crossing matches the shifted ground predicate") {
  const auto hit = plane_crossing({0, 0, 1.0}, {1, 0, 0.3}, 0.65);
  REQUIRE(hit.has_value());
  CHECK(hit->fraction == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(hit->point.z == 0.65);
}

TEST_CASE("sweep agrees with dense segment sampling") {
  RandomStream rng(2024, 99);
  const int samples = 10000;
  int hits = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec3 x0{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec3 x1{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    SphereAbsorber s{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)},
                     rng.uniform(0.1, 1.5),
                     0,
                     ApertureKind::Face,
                     1.0};
    const auto swept = sweep_collide(x0, x1, s);
    const auto brute = brute_force_hit(x0, x1, s, samples);
    REQUIRE(swept.has_value() == brute.has_value());
    if (swept) {
      ++hits;
      CHECK(std::fabs(swept->fraction - *brute) <= 1.0 / samples);
    }
  }
  CHECK(hits > 200);  // the generator actually exercises hits
}
