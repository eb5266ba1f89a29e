#pragma once

#include <optional>
#include <span>
#include <vector>

#include "eventforge/event.hpp"
#include "eventforge/image.hpp"

namespace eventforge {

struct IntensityFrame {
  Image<double> intensity;
  Timestamp timestamp = 0;
};

struct CalibrationInput {
  std::vector<IntensityFrame> frames;
  /// Sorted events over the frames' time span.
  std::span<const Event> events;
  /// Intensities are clamped below at epsilon before the log.
  double epsilon = 10.0;
};

struct NoiseRates {
  double positive = 0.0;
  double negative = 0.0;
};

struct ThresholdEstimate {
  /// total_log_change / event_count.
  double raw = 0.0;
  /// Present when noise rates were supplied and the expected noise count is
  /// below the event count.
  std::optional<double> corrected;
  double total_log_change = 0.0;
  std::size_t event_count = 0;
};

/// Sum over consecutive frame pairs and pixels of
/// |log(max(next, eps)) - log(max(prev, eps))|.
double total_log_change(std::span<const IntensityFrame> frames, double epsilon);

/// Threshold estimate from paired intensity frames and events. Counts events
/// with first.timestamp < t <= last.timestamp. Assumes monotone motion between
/// frames (events that cancel between two frames are invisible to the
/// estimator). Throws DataError for fewer than 2 frames, mismatched frame
/// sizes or zero events.
ThresholdEstimate estimate_threshold(const CalibrationInput& input,
                                     std::optional<NoiseRates> noise = std::nullopt);

/// Per-polarity counts divided by the duration of a static-scene recording.
/// Throws std::invalid_argument for a non-positive duration.
NoiseRates estimate_noise_rates(std::span<const Event> events, double duration_seconds);

}  // namespace eventforge
