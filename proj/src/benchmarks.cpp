#include "eventforge/benchmarks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "eventforge/dataset.hpp"
#include "eventforge/representations.hpp"
#include "eventforge/scene.hpp"
#include "eventforge/simulator.hpp"
#include "eventforge/stream_format.hpp"
#include "eventforge/windowing.hpp"

namespace eventforge {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr std::uint64_t kEventsPerStep = 200;

// Keeps the decode loop observable.
volatile std::uint64_t g_sink = 0;

}  // namespace

LoaderBenchmark benchmark_loader(const std::filesystem::path& directory, std::uint64_t events, std::uint64_t seed) {
  std::filesystem::create_directories(directory);
  const auto events_path = directory / "bench_events.bin";
  const auto metadata_path = directory / "bench_poses.meta";

  Rng rng(seed);
  const std::int64_t steps = static_cast<std::int64_t>(std::max<std::uint64_t>(1, events / kEventsPerStep));
  {
    std::vector<std::uint8_t> bytes;
    bytes.reserve((events + static_cast<std::uint64_t>(steps)) * kEventBlockSize);
    std::uniform_int_distribution<int> x(0, 239), y(0, 179), p(0, 1);
    std::uint64_t written = 0;
    for (std::int64_t s = 0; s < steps; ++s) {
      const std::uint64_t target = events * static_cast<std::uint64_t>(s + 1) / static_cast<std::uint64_t>(steps);
      for (; written < target; ++written) {
        const int xv = x(rng);
        bytes.insert(bytes.end(), {static_cast<std::uint8_t>(xv & 0xFF), static_cast<std::uint8_t>(xv >> 8),
                                   static_cast<std::uint8_t>(y(rng)), static_cast<std::uint8_t>(p(rng))});
      }
      bytes.insert(bytes.end(), {0, 0, 0, kTickByte});
    }
    write_file(events_path, bytes);
    std::vector<PoseVector> poses(static_cast<std::size_t>(steps));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& pose : poses) {
      for (double& v : pose.values) v = u(rng);
    }
    write_file(metadata_path, encode_metadata(poses));
  }

  auto pass = [&] {
    const EventDataset dataset = EventDataset::open(events_path, metadata_path);
    auto cursor = dataset.cursor();
    EventDataset::Step step;
    std::uint64_t count = 0;
    std::uint64_t checksum = 0;
    while (cursor.next(step)) {
      count += step.events.size();
      for (const Event& e : step.events) checksum += e.x;
      checksum += static_cast<std::uint64_t>(step.pose[0] > 0.0);
    }
    return std::pair{count, checksum};
  };

  pass();  // warm the page cache
  const auto start = Clock::now();
  const auto [count, checksum] = pass();
  LoaderBenchmark result;
  result.seconds = seconds_since(start);
  g_sink = checksum;
  result.events = count;
  result.steps = steps;
  result.events_per_second = static_cast<double>(result.events) / result.seconds;
  result.simulated_seconds_per_second = static_cast<double>(steps) / 1000.0 / result.seconds;
  std::filesystem::remove(events_path);
  std::filesystem::remove(metadata_path);
  return result;
}

SimulatorBenchmark benchmark_simulator(std::int64_t frames, bool parallel, std::uint64_t seed) {
  Rng rng(seed);
  CameraConfig camera;
  const int seconds = static_cast<int>(frames / camera.steps_per_second) + 1;
  const SceneConfig scene = random_scene(camera.geometry, seconds, rng);
  const SceneRenderer renderer(scene, camera);

  MemoryFrame memory;
  LogBrightnessFrame frame;
  std::vector<NoiseHit> noise;
  std::vector<Event> events;
  SimulatorBenchmark result;
  result.frames = frames;

  const auto start = Clock::now();
  for (std::int64_t k = 0; k < frames; ++k) {
    const PoseVector pose = bezier_pose(scene.trajectory, static_cast<double>(k) / camera.steps_per_second);
    renderer.render_log(pose, camera.step_timestamp(k), frame);
    if (k == 0) memory.values = frame.values;
    sample_noise(camera, rng, noise);
    events.clear();
    if (parallel) {
      emit_events_parallel(memory, frame, camera.threshold, noise, events);
    } else {
      emit_events_serial(memory, frame, camera.threshold, noise, events);
    }
    result.events += events.size();
  }
  result.seconds = seconds_since(start);
  result.frames_per_second = static_cast<double>(frames) / result.seconds;
  return result;
}

BuilderBenchmark benchmark_lnes(double stream_seconds, bool parallel, std::uint64_t seed) {
  Rng rng(seed);
  CameraConfig camera;
  const SceneConfig scene =
      random_scene(camera.geometry, static_cast<int>(std::ceil(stream_seconds)) + 1, rng);
  SimulateOptions options;
  options.rerandomize = false;
  const SimulationResult sim = simulate(scene, camera, stream_seconds, rng, options);

  constexpr Duration kLength = 100'000;
  constexpr Duration kStride = 1'000;
  WindowSlider slider(sim.events, kLength, kStride, sim.steps * sim.step_duration);
  std::vector<EventWindow> windows;
  windows.reserve(slider.window_count());
  for (const EventWindow& w : slider) windows.push_back(w);

  BuilderBenchmark result;
  result.windows = windows.size();
  for (const auto& w : windows) result.events += w.events.size();

  const auto start = Clock::now();
  if (parallel) {
    constexpr std::size_t kChunk = 64;
    for (std::size_t i = 0; i < windows.size(); i += kChunk) {
      const auto chunk = std::span<const EventWindow>(windows).subspan(i, std::min(kChunk, windows.size() - i));
      const auto images = build_batch_parallel(RepresentationKind::LNES, chunk, camera.geometry);
      (void)images;
    }
  } else {
    WindowImage image;
    for (const EventWindow& w : windows) build_representation_into(RepresentationKind::LNES, w, camera.geometry, image);
  }
  result.seconds = seconds_since(start);
  result.windows_per_second = static_cast<double>(result.windows) / result.seconds;
  return result;
}

}  // namespace eventforge
