#pragma once

#include <vector>

#include "aerosim/geom.hpp"

namespace aerosim {

/// Finite cylinder of constant air speed along its axis, active on a closed
/// time window. Used for the initial air ejection of a cough.
struct CylinderJet {
  Vec3 origin;
  Vec3 axis;  // unit vector
  double length = 0.0;    // m
  double diameter = 0.0;  // m
  double speed = 0.0;     // m/s
  double active_from = 0.0;   // s
  double active_until = 0.0;  // s

  bool contains(const Vec3& p, double t) const;
  Vec3 velocity() const { return axis * speed; }
};

/// Composable ambient air velocity field: a uniform background plus any
/// number of cylinder jets. Contributions of active primitives sum.
class AirflowField {
 public:
  AirflowField() = default;

  void add_uniform(const Vec3& velocity) { uniform_ += velocity; }
  void add_jet(const CylinderJet& jet) { jets_.push_back(jet); }

  const std::vector<CylinderJet>& jets() const { return jets_; }
  const Vec3& uniform() const { return uniform_; }

  Vec3 sample(const Vec3& position, double t) const;

 private:
  Vec3 uniform_{0, 0, 0};
  std::vector<CylinderJet> jets_;
};

}  // namespace aerosim
