#include "eventforge/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "eventforge/error.hpp"

namespace eventforge {

double total_log_change(std::span<const IntensityFrame> frames, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < frames.size(); ++j) {
    const auto prev = frames[j].intensity.pixels();
    const auto next = frames[j + 1].intensity.pixels();
    if (!frames[j].intensity.same_shape(frames[j + 1].intensity)) {
      throw DataError("intensity frame " + std::to_string(j + 1) + " differs in size from frame " +
                          std::to_string(j),
                      j + 1);
    }
    for (std::size_t i = 0; i < prev.size(); ++i) {
      total += std::abs(std::log(std::max(next[i], epsilon)) - std::log(std::max(prev[i], epsilon)));
    }
  }
  return total;
}

ThresholdEstimate estimate_threshold(const CalibrationInput& input, std::optional<NoiseRates> noise) {
  if (input.frames.size() < 2) throw DataError("threshold calibration needs at least two intensity frames");
  const Timestamp first = input.frames.front().timestamp;
  const Timestamp last = input.frames.back().timestamp;
  const auto begin = std::upper_bound(input.events.begin(), input.events.end(), first,
                                      [](Timestamp t, const Event& e) { return t < e.t; });
  const auto end = std::upper_bound(begin, input.events.end(), last,
                                    [](Timestamp t, const Event& e) { return t < e.t; });
  ThresholdEstimate est;
  est.event_count = static_cast<std::size_t>(end - begin);
  if (est.event_count == 0) throw DataError("threshold calibration needs at least one event between the frames");
  est.total_log_change = total_log_change(input.frames, input.epsilon);
  est.raw = est.total_log_change / static_cast<double>(est.event_count);
  if (noise) {
    const double span_seconds = static_cast<double>(last - first) * 1e-6;
    const double expected_noise = (noise->positive + noise->negative) * span_seconds;
    const double signal = static_cast<double>(est.event_count) - expected_noise;
    if (signal > 0.0) est.corrected = est.total_log_change / signal;
  }
  return est;
}

NoiseRates estimate_noise_rates(std::span<const Event> events, double duration_seconds) {
  if (!(duration_seconds > 0.0)) throw std::invalid_argument("duration must be > 0");
  std::size_t positive = 0;
  for (const Event& e : events) positive += e.polarity == Polarity::Positive ? 1 : 0;
  return NoiseRates{static_cast<double>(positive) / duration_seconds,
                    static_cast<double>(events.size() - positive) / duration_seconds};
}

}  // namespace eventforge
