#include "aerosim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "aerosim/physics.hpp"

namespace aerosim {

namespace {

// Event-id bases per source; stable across countermeasure transforms so that
// particle random streams stay coupled.
constexpr std::int64_t kBreathEventBase = 1'000'000;
constexpr std::int64_t kSpeechEventBase = 2'000'000;
constexpr std::int64_t kCoughEventBase = 3'000'000;
constexpr std::int64_t kRelayEventBase = 4'000'000;

// Stream tags for per-person event processes.
constexpr std::uint64_t kSpeechStreamTag = 0xA11CE;
constexpr std::uint64_t kCoughStreamTag = 0xC0FFE;

StepOutcome advance_one(const Particle& p, double dt_p, const StepContext& ctx) {
  StepOutcome o;
  const double t0 = ctx.t_end - dt_p;
  const Particle next = step(p, *ctx.field, ctx.air, t0, dt_p);
  const Vec3& x0 = p.position;
  const Vec3& x1 = next.position;

  double best_fraction = std::numeric_limits<double>::infinity();
  Vec3 best_point;
  std::int32_t best_absorber = -1;
  std::int8_t removal = 0;
  for (std::size_t i = 0; i < ctx.n_absorbers; ++i) {
    // Strict < keeps the lowest absorber index on ties.
    if (const auto hit = sweep_collide(x0, x1, ctx.absorbers[i]); hit && hit->fraction < best_fraction) {
      best_fraction = hit->fraction;
      best_point = hit->point;
      best_absorber = static_cast<std::int32_t>(i);
      removal = 1;
    }
  }
  if (const auto hit = ground_collide(x0, x1); hit && hit->fraction < best_fraction) {
    best_fraction = hit->fraction;
    best_point = hit->point;
    best_absorber = -1;
    removal = 2;
  }

  if (const auto cross = plane_crossing(x0, x1, ctx.plane_height);
      cross && (removal == 0 || cross->fraction <= best_fraction)) {
    o.crossed = true;
    o.cross_x = cross->point.x;
    o.cross_y = cross->point.y;
    o.cross_time = t0 + cross->fraction * dt_p;
  }

  if (removal != 0) {
    o.removal = removal;
    o.absorber_index = best_absorber;
    o.time = t0 + best_fraction * dt_p;
    o.point = best_point;
    o.speed = norm(next.velocity);
    return o;
  }

  const bool outside = x1.x < ctx.domain_min.x || x1.x > ctx.domain_max.x ||
                       x1.y < ctx.domain_min.y || x1.y > ctx.domain_max.y ||
                       x1.z < ctx.domain_min.z || x1.z > ctx.domain_max.z;
  if (outside) {
    o.removal = 3;
    o.time = ctx.t_end;
    o.point = x1;
    o.speed = norm(next.velocity);
    return o;
  }
  o.after = next;
  return o;
}

}  // namespace

void advance_particles_serial(const Particle* particles, const double* step_dt, std::size_t n,
                              const StepContext& ctx, StepOutcome* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = advance_one(particles[i], step_dt[i], ctx);
}

void advance_particles_parallel(const Particle* particles, const double* step_dt, std::size_t n,
                                const StepContext& ctx, StepOutcome* out, int threads) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
    out[i] = advance_one(particles[i], step_dt[i], ctx);
#else
  (void)threads;
  advance_particles_serial(particles, step_dt, n, ctx, out);
#endif
}

namespace {

struct PersonRuntime {
  std::vector<double> breath_times;
  std::size_t next_breath = 0;
  std::vector<double> speech_times;
  std::size_t next_speech = 0;
  RandomStream cough_stream{0, 0};
  double cough_rate = 0.0;
  double next_cough = std::numeric_limits<double>::infinity();
  std::int64_t breath_seq = 0;
  std::int64_t speech_seq = 0;
  std::int64_t cough_seq = 0;
  std::int64_t relay_seq = 0;
  bool scheduled_pending = false;

  void set_cough_rate(double rate, double from_time) {
    cough_rate = rate;
    next_cough = rate > 0.0 ? from_time + cough_stream.exponential(rate)
                            : std::numeric_limits<double>::infinity();
  }
};

struct RelayBurst {
  std::int32_t person = -1;
  double t0 = 0.0;
};

bool removal_before(const CollisionRecord& a, const CollisionRecord& b) {
  if (a.time != b.time) return a.time < b.time;
  return a.particle_id < b.particle_id;
}

bool crossing_before(const PlaneCrossing& a, const PlaneCrossing& b) {
  if (a.time != b.time) return a.time < b.time;
  return a.particle_id < b.particle_id;
}

bool pending_before(const Particle& a, const Particle& b) {
  if (a.birth_time != b.birth_time) return a.birth_time < b.birth_time;
  return a.id < b.id;
}

}  // namespace

SimulationReport run_simulation(const Scenario& scenario, int threads) {
  scenario.validate();

  const double dt = scenario.dt;
  const double horizon = scenario.horizon;
  const std::uint64_t seed = scenario.seed;
  const auto n_persons = static_cast<std::int32_t>(scenario.persons.size());

  SimulationReport report;
  report.seed = seed;
  report.config_echo = scenario_to_json(scenario);
  report.config_hash = config_hash_hex(scenario);
  for (const Person& p : scenario.persons) report.person_ids.push_back(p.id);
  report.tallies.resize(scenario.persons.size());

  AirflowField field;
  field.add_uniform(scenario.background_uniform);
  for (const CylinderJet& jet : scenario.background_jets) field.add_jet(jet);

  std::vector<Person> persons = scenario.persons;
  std::vector<PersonRuntime> runtimes(persons.size());
  for (std::size_t i = 0; i < persons.size(); ++i) {
    Person& p = persons[i];
    PersonRuntime& rt = runtimes[i];
    const double delay = p.event_delay;
    if (p.breathing && horizon > delay) {
      rt.breath_times = breathing_events(*p.breathing, horizon - delay);
      for (double& t : rt.breath_times) t += delay;
    }
    if (p.speech && horizon > delay) {
      RandomStream speech_stream(seed, derive_stream(static_cast<std::uint64_t>(i), kSpeechStreamTag));
      const auto timeline = speech_timeline(*p.speech, horizon - delay, speech_stream);
      for (const auto& [tick, state] : timeline) {
        if (state == SpeechState::Speaking)
          rt.speech_times.push_back(delay + static_cast<double>(tick) * p.speech->tick);
      }
    }
    rt.cough_stream = RandomStream(seed, derive_stream(static_cast<std::uint64_t>(i), kCoughStreamTag));
    rt.set_cough_rate(p.cough_rate(), delay);
    rt.scheduled_pending = p.scheduled_activation_time.has_value();
  }

  std::vector<Particle> pending;   // generated but not yet born; sorted (birth_time, id)
  std::vector<Particle> airborne;
  std::vector<double> step_dts;
  std::vector<StepOutcome> outcomes;
  std::deque<RelayBurst> relay_queue;
  std::int64_t next_particle_id = 0;

  auto handle_infection_events = [&](const std::vector<InfectionEvent>& events) {
    for (const InfectionEvent& ev : events) {
      report.infection_events.push_back(ev);
      if (ev.to == InfectionPhase::Infectious) {
        Person& p = persons[ev.person];
        PersonRuntime& rt = runtimes[ev.person];
        rt.set_cough_rate(p.cough.rate_infected, std::max(ev.time, p.event_delay));
        relay_queue.push_back({ev.person, ev.time});
      }
    }
  };

  auto spawn_burst = [&](std::int32_t person_index, EventKind kind, std::int64_t event_id,
                         double t0) {
    Person& p = persons[person_index];
    const EmissionProfile& profile = p.profile(kind);
    const Vec3 origin = p.emission_origin_at(t0);
    BurstContext ctx{seed, person_index, event_id, next_particle_id};
    next_particle_id += profile.candidates_per_burst();
    std::vector<Particle> burst =
        emit_burst(profile, kind, origin, p.facing, t0, p.infectious(), ctx);
    if (profile.jet && kind == EventKind::Cough) {
      CylinderJet jet;
      jet.origin = origin;
      jet.axis = p.facing;
      jet.length = profile.jet->length;
      jet.diameter = profile.jet->diameter;
      jet.speed = profile.jet->speed;
      jet.active_from = t0;
      jet.active_until = t0 + profile.jet->duration;
      field.add_jet(jet);
    }
    const std::size_t old_size = pending.size();
    pending.insert(pending.end(), burst.begin(), burst.end());
    std::inplace_merge(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(old_size),
                       pending.end(), pending_before);
  };

  const auto n_steps = static_cast<std::int64_t>(std::ceil(horizon / dt - 1e-12));
  for (std::int64_t k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double t_next = std::min(static_cast<double>(k + 1) * dt, horizon);

    // Barrier: activations due before this step's window ends.
    for (std::int32_t pi = 0; pi < n_persons; ++pi) {
      Person& p = persons[pi];
      PersonRuntime& rt = runtimes[pi];
      if (rt.scheduled_pending && *p.scheduled_activation_time + p.event_delay < t_next) {
        rt.scheduled_pending = false;
        if (auto ev = scheduled_activation(p, *p.scheduled_activation_time + p.event_delay))
          handle_infection_events({*ev});
      }
      handle_infection_events(update_infection(p, t));
    }

    // Event generation and bursts due in [t, t_next).
    for (std::size_t qi = 0; qi < relay_queue.size();) {
      if (relay_queue[qi].t0 < t_next) {
        const RelayBurst rb = relay_queue[qi];
        relay_queue.erase(relay_queue.begin() + static_cast<std::ptrdiff_t>(qi));
        PersonRuntime& rt = runtimes[rb.person];
        spawn_burst(rb.person, EventKind::Cough, kRelayEventBase + rt.relay_seq++, rb.t0);
      } else {
        ++qi;
      }
    }
    for (std::int32_t pi = 0; pi < n_persons; ++pi) {
      PersonRuntime& rt = runtimes[pi];
      while (rt.next_breath < rt.breath_times.size() && rt.breath_times[rt.next_breath] < t_next) {
        spawn_burst(pi, EventKind::Breath, kBreathEventBase + rt.breath_seq++,
                    rt.breath_times[rt.next_breath]);
        ++rt.next_breath;
      }
      while (rt.next_speech < rt.speech_times.size() && rt.speech_times[rt.next_speech] < t_next) {
        spawn_burst(pi, EventKind::Speech, kSpeechEventBase + rt.speech_seq++,
                    rt.speech_times[rt.next_speech]);
        ++rt.next_speech;
      }
      while (rt.next_cough < t_next) {
        const double t0 = rt.next_cough;
        spawn_burst(pi, EventKind::Cough, kCoughEventBase + rt.cough_seq++, t0);
        rt.next_cough = t0 + rt.cough_stream.exponential(rt.cough_rate);
      }
    }

    // Activate pending particles born in this window.
    step_dts.assign(airborne.size(), t_next - t);
    std::size_t born = 0;
    while (born < pending.size() && pending[born].birth_time < t_next) {
      const Particle& p = pending[born];
      airborne.push_back(p);
      step_dts.push_back(t_next - p.birth_time);
      report.emitted += 1;
      PersonTally& tally = report.tallies[p.emitter_id];
      tally.emitted += 1;
      if (p.viral_load > 0.0) tally.emitted_infectious += 1;
      ++born;
    }
    pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(born));

    if (airborne.empty()) continue;

    // Absorbers at the step start; apertures ride along waypoint paths.
    std::vector<SphereAbsorber> absorbers;
    for (const Person& p : persons) {
      const auto spheres = p.apertures_at(t);
      absorbers.insert(absorbers.end(), spheres.begin(), spheres.end());
    }

    StepContext ctx;
    ctx.field = &field;
    ctx.air = scenario.air;
    ctx.absorbers = absorbers.data();
    ctx.n_absorbers = absorbers.size();
    ctx.t_end = t_next;
    ctx.plane_height = scenario.density_plane_height;
    ctx.domain_min = scenario.domain_min;
    ctx.domain_max = scenario.domain_max;

    outcomes.resize(airborne.size());
    if (threads > 1) {
      advance_particles_parallel(airborne.data(), step_dts.data(), airborne.size(), ctx,
                                 outcomes.data(), threads);
    } else {
      advance_particles_serial(airborne.data(), step_dts.data(), airborne.size(), ctx,
                               outcomes.data());
    }

    // Deterministic merge: collect, sort by (time, particle id), then apply.
    std::vector<CollisionRecord> step_removals;
    std::vector<PlaneCrossing> step_crossings;
    std::vector<Particle> survivors;
    survivors.reserve(airborne.size());
    for (std::size_t i = 0; i < airborne.size(); ++i) {
      const Particle& p = airborne[i];
      const StepOutcome& o = outcomes[i];
      if (o.crossed) step_crossings.push_back({p.id, o.cross_x, o.cross_y, o.cross_time});
      if (o.removal == 0) {
        survivors.push_back(o.after);
        continue;
      }
      CollisionRecord rec;
      rec.particle_id = p.id;
      rec.emitter_id = p.emitter_id;
      rec.event_id = p.event_id;
      rec.position = o.point;
      rec.speed = o.speed;
      rec.time = o.time;
      rec.viral_load = p.viral_load;
      if (o.removal == 1) {
        const SphereAbsorber& s = absorbers[static_cast<std::size_t>(o.absorber_index)];
        rec.removal = RemovalKind::Aperture;
        rec.absorber_owner = s.owner;
        rec.absorber_kind = s.kind;
      } else if (o.removal == 2) {
        rec.removal = RemovalKind::Ground;
      } else {
        rec.removal = RemovalKind::Exit;
      }
      step_removals.push_back(rec);
    }
    airborne.swap(survivors);

    std::sort(step_removals.begin(), step_removals.end(), removal_before);
    std::sort(step_crossings.begin(), step_crossings.end(), crossing_before);
    for (const CollisionRecord& rec : step_removals) {
      switch (rec.removal) {
        case RemovalKind::Aperture:
          report.absorbed += 1;
          report.tallies[rec.absorber_owner].received_by_kind[static_cast<int>(rec.absorber_kind)] += 1;
          accumulate_dose(persons[rec.absorber_owner], rec);
          break;
        case RemovalKind::Ground: report.grounded += 1; break;
        case RemovalKind::Exit: report.exited += 1; break;
      }
      report.removals.push_back(rec);
    }
    report.crossings.insert(report.crossings.end(), step_crossings.begin(), step_crossings.end());

    // Barrier: dose thresholds crossed by this step's absorptions.
    for (std::int32_t pi = 0; pi < n_persons; ++pi)
      handle_infection_events(update_infection(persons[pi], t_next));
  }

  report.airborne_at_end = static_cast<std::int64_t>(airborne.size());
  std::sort(report.removals.begin(), report.removals.end(), removal_before);
  std::sort(report.crossings.begin(), report.crossings.end(), crossing_before);
  for (const Person& p : persons) {
    report.final_dose.push_back(p.infection.dose_by_kind);
    report.final_phase.push_back(p.infection.phase);
  }
  return report;
}

InfectionMetrics infection_metrics(const SimulationReport& report) {
  InfectionMetrics m;
  const std::size_t n = report.tallies.size();
  m.dose_by_kind = report.final_dose;
  for (const auto& dose : m.dose_by_kind)
    m.effective_dose.push_back(dose[0] + dose[1] + dose[2] + dose[3]);
  for (const PersonTally& t : report.tallies) m.received_by_kind.push_back(t.received_by_kind);

  if (n < 2) return m;

  // Receptions per ordered (emitter, receiver) pair, split by particle class.
  std::vector<std::vector<std::array<double, 2>>> received(
      n, std::vector<std::array<double, 2>>(n, {0.0, 0.0}));
  for (const CollisionRecord& rec : report.removals) {
    if (rec.removal != RemovalKind::Aperture) continue;
    if (rec.emitter_id < 0 || rec.absorber_owner < 0) continue;
    if (rec.emitter_id == rec.absorber_owner) continue;  // self-reception is not a pair link
    const int cls = rec.viral_load > 0.0 ? 1 : 0;
    received[rec.emitter_id][rec.absorber_owner][cls] += 1.0;
  }

  ChannelCounts pooled = make_reception_counts(0, 0, 0, 0);
  for (std::size_t e = 0; e < n; ++e) {
    const double emitted_inf = static_cast<double>(report.tallies[e].emitted_infectious);
    const double emitted_non = static_cast<double>(report.tallies[e].emitted) - emitted_inf;
    if (emitted_inf + emitted_non == 0.0) continue;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == e) continue;
      ChannelCounts pair = make_reception_counts(emitted_non, emitted_inf, received[e][r][0],
                                                 received[e][r][1]);
      m.pair_counts.push_back({static_cast<std::int32_t>(e), static_cast<std::int32_t>(r), pair});
      for (int c = 0; c < 2; ++c) {
        pooled.emitted[c] += pair.emitted[c];
        pooled.outcome_counts[c][0] += pair.outcome_counts[c][0];
        pooled.outcome_counts[c][1] += pair.outcome_counts[c][1];
      }
    }
  }
  if (pooled.emitted[0] + pooled.emitted[1] == 0.0) return m;

  m.channel = estimate_channel(pooled);
  m.mutual_information_bits = mutual_information(*m.channel);
  return m;
}

}  // namespace aerosim
