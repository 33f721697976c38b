#pragma once

#include <cstdint>

namespace aerosim {

/// splitmix64 finalizer; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a stream id from up to three components (person, event, particle
/// index and the like). Streams with different components never collide in
/// practice; equal components always map to the same stream.
constexpr std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(a);
  h = mix64(h ^ (b + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (c + 0xc2b2ae3d27d4eb4fULL));
  return h;
}

/// Counter-based random stream. A sample sequence is a pure function of
/// (seed, stream_id), independent of any other stream, so draws can be made
/// from any thread or in any order across particles without changing results.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(mix64(seed ^ mix64(stream_id))) {}

  std::uint64_t next_u64() { return mix64(key_ ^ (++counter_) * 0xd1342543de82ef95ULL); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal01();

  double normal(double mean, double sd) { return mean + sd * normal01(); }

  /// Normal truncated to [0, inf) by rejection.
  double truncated_normal_nonneg(double mean, double sd);

  /// Exponential with the given rate (> 0).
  double exponential(double rate);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace aerosim
