#include "aerosim/absorber.hpp"

#include <cmath>

namespace aerosim {

const char* to_string(ApertureKind kind) {
  switch (kind) {
    case ApertureKind::Face: return "face";
    case ApertureKind::HandLeft: return "hand_left";
    case ApertureKind::HandRight: return "hand_right";
    case ApertureKind::Feet: return "feet";
  }
  return "?";
}

std::optional<SweepHit> sweep_collide(const Vec3& x0, const Vec3& x1, const SphereAbsorber& s) {
  const Vec3 m = x0 - s.center;
  const double r2 = s.radius * s.radius;
  if (norm_sq(m) <= r2) return SweepHit{0.0, x0};

  const Vec3 d = x1 - x0;
  const double a = norm_sq(d);
  if (a == 0.0) return std::nullopt;

  const double b = 2.0 * dot(m, d);
  const double c = norm_sq(m) - r2;
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return std::nullopt;

  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  if (t < 0.0 || t > 1.0) return std::nullopt;
  return SweepHit{t, x0 + d * t};
}

std::optional<SweepHit> ground_collide(const Vec3& x0, const Vec3& x1) {
  return plane_crossing(x0, x1, 0.0);
}

std::optional<SweepHit> plane_crossing(const Vec3& x0, const Vec3& x1, double height) {
  if (!(x0.z > height && x1.z <= height)) return std::nullopt;
  const double t = (x0.z - height) / (x0.z - x1.z);
  Vec3 p = x0 + (x1 - x0) * t;
  p.z = height;
  return SweepHit{t, p};
}

}  // namespace aerosim
