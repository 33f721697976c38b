#include "aerosim/emission.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aerosim {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Breath: return "breath";
    case EventKind::Speech: return "speech";
    case EventKind::Cough: return "cough";
  }
  return "?";
}

void AngleCdf::validate() const {
  if (table.size() < 2) throw std::invalid_argument("angle_cdf: needs at least two points");
  if (table.front().second != 0.0) throw std::invalid_argument("angle_cdf: first probability must be 0");
  if (table.back().second != 1.0) throw std::invalid_argument("angle_cdf: last probability must be 1");
  for (std::size_t i = 0; i + 1 < table.size(); ++i) {
    if (!(table[i + 1].second > table[i].second))
      throw std::invalid_argument("angle_cdf: probabilities must be strictly increasing");
    if (!(table[i + 1].first >= table[i].first))
      throw std::invalid_argument("angle_cdf: angles must be non-decreasing");
  }
  for (const auto& [angle, prob] : table) {
    if (!std::isfinite(angle) || !std::isfinite(prob))
      throw std::invalid_argument("angle_cdf: non-finite entry");
  }
}

std::int64_t EmissionProfile::candidates_per_burst() const {
  const auto instants = static_cast<std::int64_t>(std::floor(duration / interval + 1e-9));
  return instants * particles_per_interval;
}

EmissionProfile default_profile(EventKind kind) {
  EmissionProfile p;
  p.angle_cdf.table = {{0.0, 0.0}, {0.2, 0.6}, {0.35, 1.0}};
  switch (kind) {
    case EventKind::Cough:
      p.particles_per_interval = 20;
      p.interval = 0.25e-3;
      p.duration = 100e-3;
      p.speed_dist = {10.0, 2.0};
      p.jet = JetTemplate{};
      break;
    case EventKind::Speech:
      // 1/20 of the cough count, lower speed, no air ejection.
      p.particles_per_interval = 1;
      p.interval = 0.25e-3;
      p.duration = 100e-3;
      p.speed_dist = {3.0, 1.0};
      p.jet.reset();
      break;
    case EventKind::Breath:
      // 1/100 of the cough count.
      p.particles_per_interval = 2;
      p.interval = 2.5e-3;
      p.duration = 100e-3;
      p.speed_dist = {1.0, 0.3};
      p.jet.reset();
      break;
  }
  return p;
}

EmissionProfile sneeze_profile() {
  EmissionProfile p = default_profile(EventKind::Cough);
  p.particles_per_interval = 50;
  p.speed_dist = {20.0, 4.0};
  if (p.jet) p.jet->speed = 10.0;
  return p;
}

std::vector<double> breathing_events(const BreathingParams& params, double horizon) {
  if (!(params.period > 0.0)) throw std::invalid_argument("breathing period must be > 0");
  std::vector<double> times;
  if (horizon <= 0.0) return times;
  // First k with phase + k*period >= 0.
  std::int64_t k = params.phase >= 0.0
                       ? 0
                       : static_cast<std::int64_t>(std::ceil(-params.phase / params.period));
  for (;; ++k) {
    const double t = params.phase + static_cast<double>(k) * params.period;
    if (t >= horizon) break;
    if (t >= 0.0) times.push_back(t);
  }
  return times;
}

std::vector<std::pair<std::int64_t, SpeechState>> speech_timeline(const SpeechMarkovParams& params,
                                                                  double horizon,
                                                                  RandomStream& rng) {
  if (!(params.tick > 0.0)) throw std::invalid_argument("speech tick must be > 0");
  const auto n_ticks = static_cast<std::int64_t>(std::floor(horizon / params.tick + 1e-9));
  std::vector<std::pair<std::int64_t, SpeechState>> timeline;
  timeline.reserve(static_cast<std::size_t>(std::max<std::int64_t>(n_ticks, 0)));
  SpeechState state = SpeechState::Silent;
  for (std::int64_t k = 0; k < n_ticks; ++k) {
    timeline.emplace_back(k, state);
    const double u = rng.uniform01();
    if (state == SpeechState::Silent) {
      if (u < params.p_silence_to_speak) state = SpeechState::Speaking;
    } else {
      if (u < params.p_speak_to_silence) state = SpeechState::Silent;
    }
  }
  return timeline;
}

std::vector<double> cough_events(double rate, double horizon, RandomStream& rng) {
  if (rate < 0.0 || horizon < 0.0) throw std::invalid_argument("cough rate and horizon must be >= 0");
  std::vector<double> times;
  if (rate == 0.0) return times;
  double t = 0.0;
  for (;;) {
    t += rng.exponential(rate);
    if (t >= horizon) break;
    times.push_back(t);
  }
  return times;
}

double sample_inverse_cdf(const AngleCdf& table, double u) {
  const auto& pts = table.table;
  if (u <= pts.front().second) return pts.front().first;
  if (u >= pts.back().second) return pts.back().first;
  // Find the segment whose probability range contains u.
  auto it = std::upper_bound(pts.begin(), pts.end(), u,
                             [](double v, const auto& p) { return v < p.second; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double frac = (u - lo.second) / (hi.second - lo.second);
  return lo.first + frac * (hi.first - lo.first);
}

std::vector<Particle> emit_burst(const EmissionProfile& profile, EventKind kind, const Vec3& origin,
                                 const Vec3& direction, double t0, bool infectious,
                                 const BurstContext& ctx) {
  (void)kind;
  const auto instants = static_cast<std::int64_t>(std::floor(profile.duration / profile.interval + 1e-9));
  const std::int32_t per_instant = profile.particles_per_interval;

  Vec3 tan_u, tan_w;
  tangent_basis(direction, tan_u, tan_w);
  const double sigma_ln = std::log(profile.diameter_dist.gsd);

  std::vector<Particle> out;
  out.reserve(static_cast<std::size_t>(instants) * static_cast<std::size_t>(per_instant));
  for (std::int64_t k = 0; k < instants; ++k) {
    const double birth = t0 + static_cast<double>(k) * profile.interval;
    for (std::int32_t j = 0; j < per_instant; ++j) {
      const std::int64_t cand = k * per_instant + j;
      RandomStream rs(ctx.seed, derive_stream(static_cast<std::uint64_t>(ctx.emitter_index),
                                              static_cast<std::uint64_t>(ctx.event_id),
                                              static_cast<std::uint64_t>(cand)));
      const double u_keep = rs.uniform01();
      if (!(u_keep < profile.keep_prob)) continue;

      Particle p;
      p.id = ctx.id_base + cand;
      p.emitter_id = ctx.emitter_index;
      p.event_id = ctx.event_id;
      p.birth_time = birth;
      p.position = origin;
      p.diameter = profile.diameter_dist.median * std::exp(sigma_ln * rs.normal01());
      p.density = profile.particle_density;
      p.temperature = profile.particle_temperature;

      const double speed = rs.truncated_normal_nonneg(profile.speed_dist.mean, profile.speed_dist.sd);
      const double polar = sample_inverse_cdf(profile.angle_cdf, rs.uniform01());
      const double azimuth = rs.uniform(0.0, 2.0 * std::numbers::pi);
      const Vec3 dir = direction * std::cos(polar) +
                       (tan_u * std::cos(azimuth) + tan_w * std::sin(azimuth)) * std::sin(polar);
      p.velocity = dir * speed;
      p.viral_load = infectious ? profile.viral_load_per_volume * sphere_volume(p.diameter) : 0.0;
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace aerosim
