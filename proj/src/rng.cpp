#include "aerosim/rng.hpp"

#include <cmath>
#include <numbers>

namespace aerosim {

double RandomStream::normal01() {
  // log(0) is avoided because uniform01 never returns 1 and 1-u never 0.
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomStream::truncated_normal_nonneg(double mean, double sd) {
  for (;;) {
    const double v = normal(mean, sd);
    if (v >= 0.0) return v;
  }
}

double RandomStream::exponential(double rate) {
  return -std::log(1.0 - uniform01()) / rate;
}

}  // namespace aerosim
