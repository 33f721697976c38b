#pragma once

#include <string>
#include <vector>

#include "aerosim/errors.hpp"

namespace aerosim {

/// Discrete memoryless channel: input distribution over particle classes and
/// a row-stochastic transition matrix to reception outcomes.
struct DiscreteChannel {
  std::vector<std::string> input_labels;
  std::vector<std::string> output_labels;
  std::vector<double> input_dist;                 // p(x)
  std::vector<std::vector<double>> transition;    // p(y|x), one row per input

  /// Throws ValidationError unless p(x) and every row sum to 1 within 1e-12
  /// and all entries are non-negative.
  void validate() const;
};

/// I(X;Y) = H(Y) - H(Y|X) in bits, with 0 log 0 := 0.
double mutual_information(const DiscreteChannel& ch);

/// Observed counts feeding channel estimation.
struct ChannelCounts {
  std::vector<std::string> input_labels;
  std::vector<std::string> output_labels;
  std::vector<double> emitted;                    // per input class
  std::vector<std::vector<double>> outcome_counts;  // per class, per outcome
};

/// Normalizes counts into a channel. Classes with zero emissions are dropped
/// and reported through `warnings` when given.
DiscreteChannel estimate_channel(const ChannelCounts& counts,
                                 std::vector<std::string>* warnings = nullptr);

/// Convenience for the binary {infectious, non-infectious} x
/// {not-received, received} channel built from emitted/received totals.
ChannelCounts make_reception_counts(double emitted_non_infectious, double emitted_infectious,
                                    double received_non_infectious, double received_infectious);

}  // namespace aerosim
