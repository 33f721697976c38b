#include "aerosim/airflow.hpp"

namespace aerosim {

bool CylinderJet::contains(const Vec3& p, double t) const {
  if (t < active_from || t > active_until) return false;
  const Vec3 rel = p - origin;
  const double axial = dot(rel, axis);
  if (axial < 0.0 || axial > length) return false;
  const Vec3 radial = rel - axis * axial;
  // Closed boundary: points at exactly diameter/2 are inside.
  return norm_sq(radial) <= (diameter * 0.5) * (diameter * 0.5);
}

Vec3 AirflowField::sample(const Vec3& position, double t) const {
  Vec3 v = uniform_;
  for (const CylinderJet& jet : jets_) {
    if (jet.contains(position, t)) v += jet.velocity();
  }
  return v;
}

}  // namespace aerosim
