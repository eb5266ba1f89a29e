#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "eventforge/event.hpp"
#include "eventforge/image.hpp"
#include "eventforge/pose.hpp"

namespace eventforge {

using Rng = std::mt19937_64;

struct CameraConfig {
  SensorGeometry geometry;
  /// Contrast threshold C in log-brightness units.
  double threshold = 0.5;
  /// Whole-sensor noise rates, events per second.
  double noise_rate_positive = 2500.0;
  double noise_rate_negative = 100.0;
  /// Added to the luma before taking the log.
  double epsilon = 1.0;
  int steps_per_second = 1000;

  /// Throws std::invalid_argument on any out-of-range field. steps_per_second
  /// must divide 10^6 so steps sit on an integer microsecond grid.
  void validate() const;

  Duration step_duration() const noexcept { return 1'000'000 / steps_per_second; }
  Timestamp step_timestamp(std::int64_t step) const noexcept { return step * step_duration(); }

  /// Per-pixel, per-step Bernoulli probability: rate / (W * H * steps_per_second).
  double noise_probability(Polarity p) const noexcept;
};

struct LogBrightnessFrame {
  Image<double> values;
  Timestamp timestamp = 0;
};

/// Log-brightness at the last emitted event, per pixel.
struct MemoryFrame {
  Image<double> values;
};

/// One sampled noise event: row-major pixel index and polarity.
struct NoiseHit {
  std::uint32_t pixel = 0;
  Polarity polarity = Polarity::Positive;

  friend bool operator==(const NoiseHit&, const NoiseHit&) = default;
};

/// Draws this step's noise events. Output is sorted by pixel with the positive
/// hit before the negative one at a shared pixel. Uses geometric gap sampling,
/// which is distributionally identical to one Bernoulli draw per pixel.
void sample_noise(const CameraConfig& config, Rng& rng, std::vector<NoiseHit>& out);

/// Deterministic part of a step given pre-drawn noise. Appends events in
/// row-major pixel order; within a pixel: noise positive, noise negative, then
/// threshold-crossing events. Noise does not touch the memory frame.
///
/// Serial reference kernel.
void emit_events_serial(MemoryFrame& memory, const LogBrightnessFrame& frame, double threshold,
                        std::span<const NoiseHit> noise, std::vector<Event>& out);

/// OpenMP kernel over contiguous row blocks; output identical to the serial
/// kernel, event for event.
void emit_events_parallel(MemoryFrame& memory, const LogBrightnessFrame& frame, double threshold,
                          std::span<const NoiseHit> noise, std::vector<Event>& out);

struct StepResult {
  std::vector<Event> events;
  MemoryFrame memory;
};

/// One simulation step: noise draw followed by threshold emission.
/// Throws DataError when frame/memory dimensions differ from the geometry.
StepResult step(const MemoryFrame& memory, const LogBrightnessFrame& frame,
                const CameraConfig& config, Rng& rng);

/// In-place variant used by the simulation loop.
void step_inplace(MemoryFrame& memory, const LogBrightnessFrame& frame, const CameraConfig& config,
                  Rng& rng, std::vector<NoiseHit>& noise_scratch, std::vector<Event>& out);

/// Log of the luma-weighted sum of a [0, 255] RGB pixel plus epsilon.
inline double log_luma(const Rgb& rgb255, double epsilon) {
  return std::log(0.2 * rgb255[0] + 0.7 * rgb255[1] + 0.1 * rgb255[2] + epsilon);
}

/// Converts a formed RGB image with channels in [0, 255] to log-brightness.
/// Throws DataError naming the first pixel outside [0, 255].
LogBrightnessFrame to_log_brightness(const RgbImage& frame, double epsilon = 1.0,
                                     Timestamp timestamp = 0);

struct SceneConfig;

struct SimulationResult {
  std::vector<Event> events;
  /// Ground-truth pose at every step.
  std::vector<PoseVector> poses;
  std::int64_t steps = 0;
  Duration step_duration = 1000;
  /// Threshold in force during each rerandomisation period.
  std::vector<double> thresholds;
};

struct SimulateOptions {
  /// Apply the rerandomisation schedule (scene redraw + threshold draw).
  bool rerandomize = true;
  /// Called after every step with the frame just consumed, the updated memory
  /// frame and the events emitted by that step.
  std::function<void(std::int64_t step, const LogBrightnessFrame&, const MemoryFrame&,
                     std::span<const Event>)>
      on_step;
};

/// Renders one frame per step, feeds step() and collects events and poses.
/// Step 0 initialises the memory frame to the first rendered frame.
SimulationResult simulate(SceneConfig scene, CameraConfig config, double duration_seconds, Rng& rng,
                          const SimulateOptions& options = {});

}  // namespace eventforge
