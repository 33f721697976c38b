#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aerosim/absorber.hpp"
#include "aerosim/airflow.hpp"
#include "aerosim/channel.hpp"
#include "aerosim/scenario.hpp"

namespace aerosim {

/// Downward crossing of the density plane.
struct PlaneCrossing {
  std::int64_t particle_id = 0;
  double x = 0.0;
  double y = 0.0;
  double time = 0.0;
};

struct PersonTally {
  std::array<std::int64_t, 4> received_by_kind{};  // indexed by ApertureKind
  std::int64_t emitted = 0;
  std::int64_t emitted_infectious = 0;  // particles carrying viral load

  std::int64_t received_total() const {
    return received_by_kind[0] + received_by_kind[1] + received_by_kind[2] + received_by_kind[3];
  }
};

struct SimulationReport {
  std::vector<CollisionRecord> removals;  // apertures, ground and exits; sorted by (time, id)
  std::vector<PlaneCrossing> crossings;   // sorted by (time, id)
  std::vector<InfectionEvent> infection_events;

  std::int64_t emitted = 0;
  std::int64_t absorbed = 0;
  std::int64_t grounded = 0;
  std::int64_t exited = 0;
  std::int64_t airborne_at_end = 0;

  std::vector<std::string> person_ids;
  std::vector<PersonTally> tallies;
  std::vector<std::array<double, 4>> final_dose;  // per person, weights applied
  std::vector<InfectionPhase> final_phase;

  std::uint64_t seed = 0;
  std::string config_hash;
  nlohmann::json config_echo;

  /// emitted == absorbed + grounded + exited + airborne_at_end, exactly.
  bool conservation_holds() const {
    return emitted == absorbed + grounded + exited + airborne_at_end;
  }
};

/// Inputs shared by every particle of one step.
struct StepContext {
  const AirflowField* field = nullptr;
  AirProperties air;
  const SphereAbsorber* absorbers = nullptr;
  std::size_t n_absorbers = 0;
  double t_end = 0.0;  // end of the step window; particle i starts at t_end - step_dt[i]
  double plane_height = 0.65;
  Vec3 domain_min;
  Vec3 domain_max;
};

/// Per-particle result of one step; slots line up with the input order so
/// parallel execution cannot reorder anything.
struct StepOutcome {
  Particle after;
  std::int8_t removal = 0;  // 0 airborne, 1 aperture, 2 ground, 3 exit
  std::int32_t absorber_index = -1;
  double time = 0.0;
  Vec3 point;
  double speed = 0.0;
  bool crossed = false;
  double cross_x = 0.0;
  double cross_y = 0.0;
  double cross_time = 0.0;
};

/// Reference implementation of the per-step particle kernel.
void advance_particles_serial(const Particle* particles, const double* step_dt, std::size_t n,
                              const StepContext& ctx, StepOutcome* out);

/// OpenMP version; produces bit-identical outcomes to the serial kernel for
/// any thread count because every slot is an independent pure computation.
void advance_particles_parallel(const Particle* particles, const double* step_dt, std::size_t n,
                                const StepContext& ctx, StepOutcome* out, int threads);

/// Fixed-timestep orchestration: event generation, bursts, particle advance
/// with sweep collision, deterministic record merging and barrier infection
/// updates. threads <= 1 runs the serial reference kernel.
SimulationReport run_simulation(const Scenario& scenario, int threads = 1);

/// Per-person reception/dose aggregation plus the pooled empirical channel
/// over ordered (emitter, receiver) pairs.
struct PairCounts {
  std::int32_t emitter = -1;
  std::int32_t receiver = -1;
  ChannelCounts counts;
};

struct InfectionMetrics {
  std::vector<std::array<double, 4>> dose_by_kind;  // per person
  std::vector<double> effective_dose;
  std::vector<std::array<std::int64_t, 4>> received_by_kind;
  std::vector<PairCounts> pair_counts;
  std::optional<DiscreteChannel> channel;  // pooled; empty when nothing was emitted
  double mutual_information_bits = 0.0;
};

InfectionMetrics infection_metrics(const SimulationReport& report);

}  // namespace aerosim
