#include "aerosim/channel.hpp"

#include <cmath>

namespace aerosim {

namespace {

constexpr double kSumTolerance = 1e-12;

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

void DiscreteChannel::validate() const {
  const std::size_t n_in = input_dist.size();
  const std::size_t n_out = output_labels.size();
  if (n_in == 0) throw ValidationError("channel: empty input distribution");
  if (input_labels.size() != n_in) throw ValidationError("channel: input_labels size mismatch");
  if (transition.size() != n_in) throw ValidationError("channel: transition row count mismatch");

  double sum = 0.0;
  for (double p : input_dist) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("channel: input_dist entry < 0");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kSumTolerance)
    throw ValidationError("channel: input_dist does not sum to 1");

  for (std::size_t i = 0; i < n_in; ++i) {
    const auto& row = transition[i];
    if (row.size() != n_out) throw ValidationError("channel: transition row size mismatch");
    double row_sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("channel: transition entry < 0");
      row_sum += p;
    }
    if (std::fabs(row_sum - 1.0) > kSumTolerance)
      throw ValidationError("channel: transition row " + std::to_string(i) + " does not sum to 1");
  }
}

double mutual_information(const DiscreteChannel& ch) {
  ch.validate();
  const std::size_t n_in = ch.input_dist.size();
  const std::size_t n_out = ch.output_labels.size();

  std::vector<double> p_y(n_out, 0.0);
  for (std::size_t x = 0; x < n_in; ++x)
    for (std::size_t y = 0; y < n_out; ++y) p_y[y] += ch.input_dist[x] * ch.transition[x][y];

  double h_y = 0.0;
  for (double p : p_y) h_y -= plogp(p);

  double h_y_given_x = 0.0;
  for (std::size_t x = 0; x < n_in; ++x) {
    double h_row = 0.0;
    for (double p : ch.transition[x]) h_row -= plogp(p);
    h_y_given_x += ch.input_dist[x] * h_row;
  }
  return h_y - h_y_given_x;
}

DiscreteChannel estimate_channel(const ChannelCounts& counts, std::vector<std::string>* warnings) {
  if (counts.emitted.size() != counts.input_labels.size() ||
      counts.outcome_counts.size() != counts.emitted.size())
    throw ValidationError("channel counts: inconsistent class count");

  DiscreteChannel ch;
  ch.output_labels = counts.output_labels;

  double total = 0.0;
  for (std::size_t i = 0; i < counts.emitted.size(); ++i) {
    const double emitted = counts.emitted[i];
    if (emitted < 0.0) throw ValidationError("channel counts: negative emission count");
    if (emitted == 0.0) {
      if (warnings)
        warnings->push_back("class '" + counts.input_labels[i] + "' has zero emissions; dropped");
      continue;
    }
    total += emitted;
  }
  if (total == 0.0) throw ValidationError("channel counts: no emissions in any class");

  for (std::size_t i = 0; i < counts.emitted.size(); ++i) {
    const double emitted = counts.emitted[i];
    if (emitted == 0.0) continue;
    const auto& row_counts = counts.outcome_counts[i];
    if (row_counts.size() != counts.output_labels.size())
      throw ValidationError("channel counts: outcome row size mismatch");
    double row_sum = 0.0;
    for (double c : row_counts) {
      if (c < 0.0) throw ValidationError("channel counts: negative outcome count");
      row_sum += c;
    }
    if (row_sum == 0.0) {
      if (warnings)
        warnings->push_back("class '" + counts.input_labels[i] + "' has zero outcomes; dropped");
      total -= emitted;
      continue;
    }
    ch.input_labels.push_back(counts.input_labels[i]);
    ch.input_dist.push_back(emitted);
    std::vector<double> row(row_counts.size());
    for (std::size_t y = 0; y < row.size(); ++y) row[y] = row_counts[y] / row_sum;
    ch.transition.push_back(std::move(row));
  }
  for (double& p : ch.input_dist) p /= total;
  ch.validate();
  return ch;
}

ChannelCounts make_reception_counts(double emitted_non_infectious, double emitted_infectious,
                                    double received_non_infectious, double received_infectious) {
  ChannelCounts c;
  c.input_labels = {"non-infectious", "infectious"};
  c.output_labels = {"not-received", "received"};
  c.emitted = {emitted_non_infectious, emitted_infectious};
  c.outcome_counts = {
      {emitted_non_infectious - received_non_infectious, received_non_infectious},
      {emitted_infectious - received_infectious, received_infectious},
  };
  return c;
}

}  // namespace aerosim
