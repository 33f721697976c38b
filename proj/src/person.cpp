#include "aerosim/person.hpp"

#include <algorithm>
#include <stdexcept>

namespace aerosim {

const char* to_string(InfectionPhase phase) {
  switch (phase) {
    case InfectionPhase::Susceptible: return "susceptible";
    case InfectionPhase::Exposed: return "exposed";
    case InfectionPhase::Infectious: return "infectious";
  }
  return "?";
}

double Person::aperture_weight(ApertureKind kind) const {
  switch (kind) {
    case ApertureKind::Face: return apertures.face_weight;
    case ApertureKind::HandLeft:
    case ApertureKind::HandRight: return apertures.hand_weight;
    case ApertureKind::Feet: return apertures.feet_weight;
  }
  return 0.0;
}

Vec3 Person::position_at(double t) const {
  if (path.empty()) throw std::logic_error("person has an empty path");
  if (t <= path.front().time) return path.front().position;
  if (t >= path.back().time) return path.back().position;
  auto it = std::upper_bound(path.begin(), path.end(), t,
                             [](double v, const Waypoint& w) { return v < w.time; });
  const Waypoint& hi = *it;
  const Waypoint& lo = *(it - 1);
  const double frac = (t - lo.time) / (hi.time - lo.time);
  return lo.position + (hi.position - lo.position) * frac;
}

std::vector<SphereAbsorber> Person::apertures_at(double t) const {
  const Vec3 base = position_at(t);
  const Vec3 mouth = base + Vec3{0, 0, mouth_height};
  const Vec3 left = normalized(cross(Vec3{0, 0, 1}, facing));

  std::vector<SphereAbsorber> out;
  out.push_back({mouth - facing * apertures.face_setback, apertures.face_radius, index,
                 ApertureKind::Face, apertures.face_weight});
  if (apertures.hands) {
    const Vec3 hand_base = base + Vec3{0, 0, apertures.hand_height};
    out.push_back({hand_base + left * apertures.hand_lateral_offset, apertures.hand_radius, index,
                   ApertureKind::HandLeft, apertures.hand_weight});
    out.push_back({hand_base - left * apertures.hand_lateral_offset, apertures.hand_radius, index,
                   ApertureKind::HandRight, apertures.hand_weight});
  }
  if (apertures.feet) {
    out.push_back({base + Vec3{0, 0, apertures.feet_radius}, apertures.feet_radius, index,
                   ApertureKind::Feet, apertures.feet_weight});
  }
  return out;
}

void accumulate_dose(Person& person, const CollisionRecord& hit) {
  if (hit.removal != RemovalKind::Aperture || hit.absorber_owner != person.index)
    throw std::logic_error("collision record does not belong to this person");
  person.infection.dose_by_kind[static_cast<int>(hit.absorber_kind)] +=
      hit.viral_load * person.aperture_weight(hit.absorber_kind);
}

std::vector<InfectionEvent> update_infection(Person& person, double t) {
  std::vector<InfectionEvent> events;
  InfectionState& st = person.infection;
  if (st.phase == InfectionPhase::Susceptible && st.effective_dose() >= person.dose_threshold) {
    st.phase = InfectionPhase::Exposed;
    st.exposure_time = t;
    events.push_back({t, person.index, InfectionPhase::Susceptible, InfectionPhase::Exposed, "dose"});
  }
  if (st.phase == InfectionPhase::Exposed && t >= st.exposure_time + person.activation_delay) {
    st.phase = InfectionPhase::Infectious;
    st.infectious_since = t;
    events.push_back(
        {t, person.index, InfectionPhase::Exposed, InfectionPhase::Infectious, "incubation"});
  }
  return events;
}

std::optional<InfectionEvent> scheduled_activation(Person& person, double t_activate) {
  if (t_activate < 0.0) throw std::invalid_argument("activation time must be >= 0");
  InfectionState& st = person.infection;
  if (st.phase == InfectionPhase::Infectious) return std::nullopt;
  const InfectionPhase from = st.phase;
  st.phase = InfectionPhase::Infectious;
  st.infectious_since = t_activate;
  return InfectionEvent{t_activate, person.index, from, InfectionPhase::Infectious, "scheduled"};
}

}  // namespace aerosim
