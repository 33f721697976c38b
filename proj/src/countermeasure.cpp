#include "aerosim/countermeasure.hpp"

namespace aerosim {

namespace {

Person* find_person(Scenario& s, const std::string& id) {
  for (Person& p : s.persons)
    if (p.id == id) return &p;
  return nullptr;
}

}  // namespace

Scenario apply_countermeasure(Scenario scenario, const CountermeasureAction& action) {
  if (const auto* mask = std::get_if<MaskAction>(&action)) {
    if (mask->keep_prob < 0.0 || mask->keep_prob > 1.0)
      throw ValidationError("mask.keep_prob: must be in [0, 1]");
    if (mask->speed_factor < 0.0 || mask->speed_factor > 1.0)
      throw ValidationError("mask.speed_factor: must be in [0, 1]");
    for (Person& p : scenario.persons) {
      for (EmissionProfile& profile : p.profiles) {
        profile.keep_prob *= mask->keep_prob;
        profile.speed_dist.mean *= mask->speed_factor;
        profile.speed_dist.sd *= mask->speed_factor;
      }
    }
  } else if (const auto* dist = std::get_if<DistanceAction>(&action)) {
    for (const auto& [id, offset] : dist->translations) {
      Person* p = find_person(scenario, id);
      if (!p) throw ValidationError("distance: unknown person id '" + id + "'");
      if (!is_finite(offset)) throw ValidationError("distance: non-finite translation for '" + id + "'");
      for (Waypoint& w : p->path) w.position += offset;
    }
  } else if (const auto* shift = std::get_if<TimeShiftAction>(&action)) {
    for (const auto& [id, delay] : shift->delays) {
      Person* p = find_person(scenario, id);
      if (!p) throw ValidationError("timeshift: unknown person id '" + id + "'");
      if (!(delay >= 0.0)) throw ValidationError("timeshift: delay for '" + id + "' must be >= 0");
      p->event_delay += delay;
    }
  }
  scenario.validate();
  return scenario;
}

}  // namespace aerosim
