// Serial reference kernels against the OpenMP kernels, plus loader throughput.
// Usage: eventforge_bench [loader_events] [simulator_frames] [lnes_stream_seconds]

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "eventforge/benchmarks.hpp"
#include "eventforge/parallel.hpp"

int main(int argc, char** argv) {
  using namespace eventforge;
  apply_thread_env();
  const std::uint64_t loader_events = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20'000'000ULL;
  const std::int64_t frames = argc > 2 ? std::strtoll(argv[2], nullptr, 10) : 2000;
  const double lnes_seconds = argc > 3 ? std::strtod(argv[3], nullptr) : 1.2;

  std::printf("threads: %d\n", max_threads());

  const auto dir = std::filesystem::temp_directory_path() / "eventforge-bench";
  std::filesystem::create_directories(dir);
  const auto loader = benchmark_loader(dir, loader_events);
  std::printf("loader: %.3g events/s (reference %.3g, ratio %.2f), %.1f simulated s/s\n",
              loader.events_per_second, kReferenceLoaderEventsPerSecond,
              loader.events_per_second / kReferenceLoaderEventsPerSecond, loader.simulated_seconds_per_second);

  for (const bool parallel : {false, true}) {
    const auto sim = benchmark_simulator(frames, parallel);
    std::printf("simulator %-8s: %8.1f frames/s (reference %.0f), %llu events\n",
                parallel ? "openmp" : "serial", sim.frames_per_second, kReferenceSimulatorFramesPerSecond,
                static_cast<unsigned long long>(sim.events));
  }
  for (const bool parallel : {false, true}) {
    const auto lnes = benchmark_lnes(lnes_seconds, parallel);
    std::printf("lnes      %-8s: %8.1f windows/s over %zu windows\n", parallel ? "openmp" : "serial",
                lnes.windows_per_second, lnes.windows);
  }
  return 0;
}
