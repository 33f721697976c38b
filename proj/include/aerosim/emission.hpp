#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aerosim/geom.hpp"
#include "aerosim/particle.hpp"
#include "aerosim/rng.hpp"

namespace aerosim {

enum class EventKind : std::int8_t { Breath, Speech, Cough };

const char* to_string(EventKind kind);

/// Periodic breathing pattern: events at {phase + k*period}.
struct BreathingParams {
  double period = 4.0;  // s, > 0
  double phase = 0.0;   // s
};

/// Two-state silence/speaking chain, advanced once per tick.
struct SpeechMarkovParams {
  double p_silence_to_speak = 0.0;
  double p_speak_to_silence = 0.0;
  double tick = 0.5;  // s, > 0
};

/// Poisson cough process; the rate depends on the emitter's infection state.
struct CoughParams {
  double rate_healthy = 0.0;   // events/s
  double rate_infected = 0.0;  // events/s
};

/// Monotone (angle, cumulative probability) table; probabilities run from 0
/// to 1 and are inverted by piecewise-linear interpolation.
struct AngleCdf {
  std::vector<std::pair<double, double>> table;  // (polar angle rad, cum prob)

  /// Throws std::invalid_argument naming the defect; called at load time.
  void validate() const;
};

struct LognormalDiameter {
  double median = 200e-6;  // m
  double gsd = 1.8;        // geometric standard deviation, >= 1
};

struct TruncatedNormalSpeed {
  double mean = 10.0;  // m/s
  double sd = 2.0;     // m/s; samples truncated at 0
};

/// Air-ejection cylinder spawned together with a burst, attached to the
/// emitter's mouth and emission direction at event start.
struct JetTemplate {
  double length = 3.0;    // m
  double diameter = 1.0;  // m
  double speed = 5.0;     // m/s
  double duration = 1.0;  // s active window after event start
};

struct EmissionProfile {
  std::int32_t particles_per_interval = 20;
  double interval = 0.25e-3;  // s
  double duration = 100e-3;   // s
  LognormalDiameter diameter_dist;
  TruncatedNormalSpeed speed_dist;
  AngleCdf angle_cdf;
  double viral_load_per_volume = 1e9;  // dose/m^3, applied only when infectious
  std::optional<JetTemplate> jet;
  double keep_prob = 1.0;  // mask thinning; coupled per-particle uniforms
  double particle_density = 1000.0;    // kg/m^3
  double particle_temperature = 310.0; // K, metadata

  std::int64_t candidates_per_burst() const;
};

/// Default per-kind profiles (configurable placeholders; the cough numbers
/// are the 20-per-0.25-ms-for-100-ms burst with a 5 m/s x 3 m x 1 m jet).
EmissionProfile default_profile(EventKind kind);

/// Sneeze preset: a cough profile with higher counts and speeds.
EmissionProfile sneeze_profile();

enum class SpeechState : std::int8_t { Silent, Speaking };

/// Deterministic breathing event times {phase + k*period} within [0, horizon).
std::vector<double> breathing_events(const BreathingParams& params, double horizon);

/// One state per tick, chain started in Silent. Speaking ticks each produce
/// one speech event at tick start.
std::vector<std::pair<std::int64_t, SpeechState>> speech_timeline(const SpeechMarkovParams& params,
                                                                  double horizon,
                                                                  RandomStream& rng);

/// Homogeneous Poisson event times in [0, horizon), ascending.
std::vector<double> cough_events(double rate, double horizon, RandomStream& rng);

/// Piecewise-linear inverse of the angle CDF; u=0 maps to the first angle,
/// u=1 to the last.
double sample_inverse_cdf(const AngleCdf& table, double u);

/// Identity of one emission event, fixed before any sampling so that every
/// candidate particle owns an independent random stream keyed by
/// (person, event, candidate index).
struct BurstContext {
  std::uint64_t seed = 0;
  std::int32_t emitter_index = 0;
  std::int64_t event_id = 0;
  std::int64_t id_base = 0;  // candidate k gets particle id id_base + k
};

/// Samples one burst: floor(duration/interval) release instants with
/// particles_per_interval candidates each. Mask thinning consumes the first
/// uniform of each candidate stream, so surviving candidates draw identical
/// diameters, speeds and angles whatever keep_prob is.
std::vector<Particle> emit_burst(const EmissionProfile& profile, EventKind kind, const Vec3& origin,
                                 const Vec3& direction, double t0, bool infectious,
                                 const BurstContext& ctx);

}  // namespace aerosim
