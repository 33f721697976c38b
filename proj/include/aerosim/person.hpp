#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aerosim/absorber.hpp"
#include "aerosim/emission.hpp"
#include "aerosim/geom.hpp"

namespace aerosim {

enum class InfectionPhase : std::int8_t { Susceptible = 0, Exposed = 1, Infectious = 2 };

const char* to_string(InfectionPhase phase);

/// Infection state machine plus per-aperture dose tallies. Aperture
/// sensitivity weights are applied when a dose is accumulated, so the
/// effective dose is the plain sum over kinds.
struct InfectionState {
  InfectionPhase phase = InfectionPhase::Susceptible;
  double exposure_time = 0.0;      // valid once Exposed
  double infectious_since = 0.0;   // valid once Infectious
  std::array<double, 4> dose_by_kind{};  // indexed by ApertureKind

  double effective_dose() const {
    return dose_by_kind[0] + dose_by_kind[1] + dose_by_kind[2] + dose_by_kind[3];
  }
};

struct Waypoint {
  double time = 0.0;
  Vec3 position;  // base (feet) position, ground level
};

struct ApertureLayout {
  double face_radius = 0.05;
  double hand_radius = 0.05;
  double feet_radius = 0.05;
  bool hands = true;
  bool feet = false;
  double face_weight = 1.0;
  double hand_weight = 0.2;
  double feet_weight = 0.05;
  double hand_height = 0.70;
  double hand_lateral_offset = 0.30;
  double face_setback = 0.05;  // behind the mouth, opposite facing
};

struct InfectionEvent {
  double time = 0.0;
  std::int32_t person = -1;
  InfectionPhase from = InfectionPhase::Susceptible;
  InfectionPhase to = InfectionPhase::Susceptible;
  std::string trigger;  // "dose", "incubation" or "scheduled"
};

/// Emitter/receiver node: emission processes, absorbing apertures, the
/// infection state machine and a waypoint mobility path.
struct Person {
  std::string id;
  std::int32_t index = -1;
  double mouth_height = 1.65;
  Vec3 facing{1, 0, 0};  // unit
  std::vector<Waypoint> path;
  ApertureLayout apertures;

  std::optional<BreathingParams> breathing;
  std::optional<SpeechMarkovParams> speech;
  CoughParams cough;
  EmissionProfile profiles[3];  // indexed by EventKind

  double dose_threshold = 1.0;
  double activation_delay = 3.0;
  std::optional<double> scheduled_activation_time;
  bool initially_infectious = false;
  double event_delay = 0.0;  // TIME_SHIFT countermeasure offset

  InfectionState infection;

  const EmissionProfile& profile(EventKind kind) const {
    return profiles[static_cast<int>(kind)];
  }
  EmissionProfile& profile(EventKind kind) { return profiles[static_cast<int>(kind)]; }

  double aperture_weight(ApertureKind kind) const;

  /// Piecewise-linear interpolation along the waypoint path, clamped to the
  /// first/last waypoint outside its time range.
  Vec3 position_at(double t) const;

  Vec3 mouth_at(double t) const { return position_at(t) + Vec3{0, 0, mouth_height}; }

  /// Point emission origin: 1 mm in front of the mouth, so emitted particles
  /// start outside the face sphere sitting behind it.
  Vec3 emission_origin_at(double t) const { return mouth_at(t) + facing * 1e-3; }

  /// Absorbing spheres at time t; apertures translate rigidly with the body.
  /// Order: face, hand_left, hand_right[, feet].
  std::vector<SphereAbsorber> apertures_at(double t) const;

  double cough_rate() const {
    return infection.phase == InfectionPhase::Infectious ? cough.rate_infected
                                                         : cough.rate_healthy;
  }
  bool infectious() const { return infection.phase == InfectionPhase::Infectious; }
};

/// Adds the record's viral load, scaled by the aperture sensitivity weight,
/// to the matching dose tally. The particle is consumed regardless of weight.
void accumulate_dose(Person& person, const CollisionRecord& hit);

/// Threshold/incubation transitions at time t. Returns the resulting events
/// (possibly both, when activation_delay is zero).
std::vector<InfectionEvent> update_infection(Person& person, double t);

/// Forces the person INFECTIOUS at t_activate regardless of dose; no-op when
/// already infectious. Reproduces scripted second transmitters.
std::optional<InfectionEvent> scheduled_activation(Person& person, double t_activate);

}  // namespace aerosim
