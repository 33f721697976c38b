#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "aerosim/geom.hpp"

namespace aerosim {

enum class ApertureKind : std::int8_t { Face, HandLeft, HandRight, Feet };

const char* to_string(ApertureKind kind);

/// Absorbing sphere attached to a person's body region.
struct SphereAbsorber {
  Vec3 center;
  double radius = 0.0;
  std::int32_t owner = -1;  // person index
  ApertureKind kind = ApertureKind::Face;
  double sensitivity_weight = 1.0;  // in [0,1]
};

/// Where a particle left the simulation.
enum class RemovalKind : std::int8_t { Aperture, Ground, Exit };

struct CollisionRecord {
  std::int64_t particle_id = 0;
  std::int32_t emitter_id = -1;
  std::int64_t event_id = 0;
  RemovalKind removal = RemovalKind::Ground;
  std::int32_t absorber_owner = -1;  // person index; -1 for ground/exit
  ApertureKind absorber_kind = ApertureKind::Face;
  Vec3 position;
  double speed = 0.0;
  double time = 0.0;
  double viral_load = 0.0;
};

struct SweepHit {
  double fraction = 0.0;  // in [0,1] along the segment
  Vec3 point;
};

/// Earliest intersection of the segment x0->x1 with the sphere, as the
/// parameter where the segment first enters it. Segments starting inside
/// report fraction 0. Solves |x0 + t (x1-x0) - c|^2 = r^2.
std::optional<SweepHit> sweep_collide(const Vec3& x0, const Vec3& x1, const SphereAbsorber& s);

/// Intersection with the absorbing ground plane z=0, for segments crossing
/// from above: x0.z > 0 >= x1.z.
std::optional<SweepHit> ground_collide(const Vec3& x0, const Vec3& x1);

/// Downward crossing of the horizontal plane z = height (same predicate as
/// the ground test, shifted). Used for the density map; the particle is not
/// removed.
std::optional<SweepHit> plane_crossing(const Vec3& x0, const Vec3& x1, double height);

}  // namespace aerosim
