#include "eventforge/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "eventforge/error.hpp"
#include "eventforge/parallel.hpp"
#include "eventforge/scene.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eventforge {

void CameraConfig::validate() const {
  geometry.validate();
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw std::invalid_argument("threshold must be > 0");
  }
  if (!(noise_rate_positive >= 0.0) || !(noise_rate_negative >= 0.0)) {
    throw std::invalid_argument("noise rates must be >= 0");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (steps_per_second < 1) throw std::invalid_argument("steps_per_second must be >= 1");
  if (1'000'000 % steps_per_second != 0) {
    throw std::invalid_argument("steps_per_second must divide 1000000, got " +
                                std::to_string(steps_per_second));
  }
}

double CameraConfig::noise_probability(Polarity p) const noexcept {
  const double rate = p == Polarity::Positive ? noise_rate_positive : noise_rate_negative;
  const double denom = static_cast<double>(geometry.pixel_count()) * steps_per_second;
  return std::min(1.0, rate / denom);
}

namespace {

void sample_polarity(double probability, std::uint64_t pixels, Polarity polarity, Rng& rng,
                     std::vector<NoiseHit>& out) {
  if (probability <= 0.0) return;
  if (probability >= 1.0) {
    for (std::uint64_t i = 0; i < pixels; ++i) out.push_back({static_cast<std::uint32_t>(i), polarity});
    return;
  }
  // Gap to the next success of a per-pixel Bernoulli process.
  std::geometric_distribution<std::uint64_t> gap(probability);
  for (std::uint64_t i = gap(rng); i < pixels; i += 1 + gap(rng)) {
    out.push_back({static_cast<std::uint32_t>(i), polarity});
  }
}

void check_shapes(const MemoryFrame& memory, const LogBrightnessFrame& frame) {
  if (!memory.values.same_shape(frame.values)) {
    throw DataError("memory frame is " + std::to_string(memory.values.width()) + "x" +
                    std::to_string(memory.values.height()) + " but log-brightness frame is " +
                    std::to_string(frame.values.width()) + "x" + std::to_string(frame.values.height()));
  }
}

/// Emission over rows [y0, y1). `noise` holds exactly the hits inside those rows.
// floor(magnitude / threshold), corrected so that n * C <= magnitude < (n + 1) * C
// holds in floating point; the division alone can round across an integer.
std::int64_t crossings(double magnitude, double threshold) {
  auto n = static_cast<std::int64_t>(std::floor(magnitude / threshold));
  while (static_cast<double>(n + 1) * threshold <= magnitude) ++n;
  while (n > 0 && static_cast<double>(n) * threshold > magnitude) --n;
  return n;
}

void emit_rows(MemoryFrame& memory, const LogBrightnessFrame& frame, double threshold,
               std::span<const NoiseHit> noise, int y0, int y1, std::vector<Event>& out) {
  const int width = frame.values.width();
  const Timestamp t = frame.timestamp;
  const double* brightness = frame.values.data();
  double* mem = memory.values.data();
  std::size_t next_noise = 0;
  for (int y = y0; y < y1; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
    for (int x = 0; x < width; ++x) {
      const std::size_t idx = row + static_cast<std::size_t>(x);
      while (next_noise < noise.size() && noise[next_noise].pixel == idx) {
        out.push_back(Event{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                            noise[next_noise].polarity, t});
        ++next_noise;
      }
      const double delta = brightness[idx] - mem[idx];
      if (delta >= threshold) {
        const auto n = crossings(delta, threshold);
        for (std::int64_t k = 0; k < n; ++k) {
          out.push_back(Event{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                              Polarity::Positive, t});
        }
        mem[idx] += static_cast<double>(n) * threshold;
      } else if (delta <= -threshold) {
        const auto n = crossings(-delta, threshold);
        for (std::int64_t k = 0; k < n; ++k) {
          out.push_back(Event{static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                              Polarity::Negative, t});
        }
        mem[idx] -= static_cast<double>(n) * threshold;
      }
    }
  }
}

std::span<const NoiseHit> noise_in_rows(std::span<const NoiseHit> noise, int width, int y0, int y1) {
  const auto lo = static_cast<std::uint32_t>(static_cast<std::size_t>(y0) * width);
  const auto hi = static_cast<std::uint32_t>(static_cast<std::size_t>(y1) * width);
  auto by_pixel = [](const NoiseHit& h, std::uint32_t p) { return h.pixel < p; };
  auto first = std::lower_bound(noise.begin(), noise.end(), lo, by_pixel);
  auto last = std::lower_bound(first, noise.end(), hi, by_pixel);
  return {first, last};
}

}  // namespace

void sample_noise(const CameraConfig& config, Rng& rng, std::vector<NoiseHit>& out) {
  out.clear();
  const std::uint64_t pixels = config.geometry.pixel_count();
  std::vector<NoiseHit> positive;
  std::vector<NoiseHit> negative;
  sample_polarity(config.noise_probability(Polarity::Positive), pixels, Polarity::Positive, rng, positive);
  sample_polarity(config.noise_probability(Polarity::Negative), pixels, Polarity::Negative, rng, negative);
  out.reserve(positive.size() + negative.size());
  std::merge(positive.begin(), positive.end(), negative.begin(), negative.end(), std::back_inserter(out),
             [](const NoiseHit& a, const NoiseHit& b) {
               return a.pixel != b.pixel ? a.pixel < b.pixel : a.polarity < b.polarity;
             });
}

void emit_events_serial(MemoryFrame& memory, const LogBrightnessFrame& frame, double threshold,
                        std::span<const NoiseHit> noise, std::vector<Event>& out) {
  check_shapes(memory, frame);
  emit_rows(memory, frame, threshold, noise, 0, frame.values.height(), out);
}

void emit_events_parallel(MemoryFrame& memory, const LogBrightnessFrame& frame, double threshold,
                          std::span<const NoiseHit> noise, std::vector<Event>& out) {
  check_shapes(memory, frame);
  const int height = frame.values.height();
  const int width = frame.values.width();
  const int threads = std::min(max_threads(), height);
  if (threads <= 1) {
    emit_rows(memory, frame, threshold, noise, 0, height, out);
    return;
  }
  // Contiguous row blocks, concatenated in block order, keep row-major output.
  std::vector<std::vector<Event>> blocks(static_cast<std::size_t>(threads));
#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1) num_threads(threads)
#endif
  for (int b = 0; b < threads; ++b) {
    const int y0 = static_cast<int>(static_cast<long long>(height) * b / threads);
    const int y1 = static_cast<int>(static_cast<long long>(height) * (b + 1) / threads);
    emit_rows(memory, frame, threshold, noise_in_rows(noise, width, y0, y1), y0, y1,
              blocks[static_cast<std::size_t>(b)]);
  }
  std::size_t total = 0;
  for (const auto& block : blocks) total += block.size();
  out.reserve(out.size() + total);
  for (const auto& block : blocks) out.insert(out.end(), block.begin(), block.end());
}

void step_inplace(MemoryFrame& memory, const LogBrightnessFrame& frame, const CameraConfig& config,
                  Rng& rng, std::vector<NoiseHit>& noise_scratch, std::vector<Event>& out) {
  if (!frame.values.same_shape(config.geometry.width, config.geometry.height)) {
    throw DataError("frame is " + std::to_string(frame.values.width()) + "x" +
                    std::to_string(frame.values.height()) + " but the sensor is " +
                    std::to_string(config.geometry.width) + "x" + std::to_string(config.geometry.height));
  }
  sample_noise(config, rng, noise_scratch);
  emit_events_parallel(memory, frame, config.threshold, noise_scratch, out);
}

StepResult step(const MemoryFrame& memory, const LogBrightnessFrame& frame, const CameraConfig& config,
                Rng& rng) {
  config.validate();
  StepResult result{{}, memory};
  std::vector<NoiseHit> noise;
  step_inplace(result.memory, frame, config, rng, noise, result.events);
  return result;
}

LogBrightnessFrame to_log_brightness(const RgbImage& frame, double epsilon, Timestamp timestamp) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  LogBrightnessFrame out{Image<double>(frame.width(), frame.height()), timestamp};
  const auto src = frame.pixels();
  auto dst = out.values.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const Rgb& px = src[i];
    for (int c = 0; c < 3; ++c) {
      if (!(px[c] >= 0.0 && px[c] <= 255.0)) {
        throw DataError("pixel " + std::to_string(i) + " channel " + std::to_string(c) + " = " +
                            std::to_string(px[c]) + " is outside [0, 255]",
                        i);
      }
    }
    dst[i] = log_luma(px, epsilon);
  }
  return out;
}

SimulationResult simulate(SceneConfig scene, CameraConfig config, double duration_seconds, Rng& rng,
                          const SimulateOptions& options) {
  config.validate();
  scene.validate(config.geometry);
  if (!(duration_seconds > 0.0)) throw std::invalid_argument("duration must be > 0");
  const std::int64_t steps = std::llround(duration_seconds * config.steps_per_second);
  if (steps < 1) throw std::invalid_argument("duration is shorter than one step");
  const double last_time = static_cast<double>(steps - 1) / config.steps_per_second;
  if (last_time > scene.trajectory.span_seconds()) {
    throw std::invalid_argument("trajectory spans " + std::to_string(scene.trajectory.span_seconds()) +
                                " s but the simulation needs " + std::to_string(last_time) + " s");
  }
  const std::int64_t period_steps = std::llround(scene.rerandomize_period * config.steps_per_second);

  SimulationResult result;
  result.steps = steps;
  result.step_duration = config.step_duration();
  result.poses.reserve(static_cast<std::size_t>(steps));
  result.thresholds.push_back(config.threshold);

  auto renderer = std::make_unique<SceneRenderer>(scene, config);
  MemoryFrame memory;
  LogBrightnessFrame frame;
  std::vector<NoiseHit> noise;
  bool reset_memory = true;

  for (std::int64_t k = 0; k < steps; ++k) {
    if (options.rerandomize && k > 0 && period_steps > 0 && k % period_steps == 0) {
      rerandomize(scene, config, rng);
      renderer = std::make_unique<SceneRenderer>(scene, config);
      result.thresholds.push_back(config.threshold);
      reset_memory = true;
    }
    const double time = static_cast<double>(k) / config.steps_per_second;
    const PoseVector pose = bezier_pose(scene.trajectory, time);
    result.poses.push_back(pose);
    renderer->render_log(pose, config.step_timestamp(k), frame);
    if (reset_memory) {
      memory.values = frame.values;
      reset_memory = false;
    }
    const std::size_t first = result.events.size();
    step_inplace(memory, frame, config, rng, noise, result.events);
    if (options.on_step) {
      options.on_step(k, frame, memory,
                      std::span<const Event>(result.events).subspan(first));
    }
  }
  return result;
}

}  // namespace eventforge
