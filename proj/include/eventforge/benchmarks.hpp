#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace eventforge {

/// Reference figures the throughput report is compared against.
inline constexpr double kReferenceLoaderEventsPerSecond = 1.75e8;
inline constexpr double kReferenceSimulatorFramesPerSecond = 2000.0;

struct LoaderBenchmark {
  std::uint64_t events = 0;
  std::int64_t steps = 0;
  double seconds = 0.0;
  double events_per_second = 0.0;
  double simulated_seconds_per_second = 0.0;
};

/// Writes a synthetic recording of `events` events into `directory`, loads it
/// once to warm the page cache, then times a full open + iterate pass.
LoaderBenchmark benchmark_loader(const std::filesystem::path& directory, std::uint64_t events,
                                 std::uint64_t seed = 1);

struct SimulatorBenchmark {
  std::int64_t frames = 0;
  double seconds = 0.0;
  double frames_per_second = 0.0;
  std::uint64_t events = 0;
};

/// Times render + emission of `frames` steps of a random procedural scene at
/// 240x180 with default noise.
SimulatorBenchmark benchmark_simulator(std::int64_t frames, bool parallel, std::uint64_t seed = 1);

struct BuilderBenchmark {
  std::size_t windows = 0;
  double seconds = 0.0;
  double windows_per_second = 0.0;
  std::uint64_t events = 0;
};

/// Simulates `stream_seconds` of a random scene, then times LNES construction of every
/// 100 ms window at 1 ms stride.
BuilderBenchmark benchmark_lnes(double stream_seconds, bool parallel, std::uint64_t seed = 1);

}  // namespace eventforge
