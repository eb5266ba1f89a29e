#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eventforge/scene.hpp"
#include "eventforge/simulator.hpp"

namespace eventforge::cli {

/// Bad flag values or combinations; reported with usage text and exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters of a `simulate` run. Config file schema (YAML, every key optional):
///
///   seed: 7
///   duration: 1.0                 # simulated seconds
///   camera:
///     width: 240
///     height: 180
///     threshold: 0.5
///     noise_rate_positive: 2500   # events/s over the sensor
///     noise_rate_negative: 100
///     epsilon: 1.0
///     steps_per_second: 1000
///   scene:
///     primitive: random           # random | sphere | disk
///     radius_px: 30               # only with a fixed primitive
///     static: false               # hold the first keypose for the whole run
///     rerandomize: true
///     rerandomize_period: 50      # simulated seconds
struct SimulationSpec {
  std::uint64_t seed = 0;
  double duration = 1.0;
  CameraConfig camera;
  std::string primitive = "random";
  std::optional<double> radius_px;
  bool static_scene = false;
  bool rerandomize = true;
  double rerandomize_period = 50.0;
};

/// Throws DataError for unreadable files, unknown keys or wrong value types.
SimulationSpec load_simulation_spec(const std::filesystem::path& path);

/// Scene drawn from the spec's seed; `rng` continues to drive the simulation.
SceneConfig build_scene(const SimulationSpec& spec, Rng& rng);

/// Full in-memory simulation for a spec: the reference path the CLI output must match.
SimulationResult run_simulation(const SimulationSpec& spec);

struct RunManifest {
  std::string subcommand;
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  /// Flag values as given, serialised in key order.
  std::vector<std::pair<std::string, std::string>> parameters;
};

std::string tool_version();
/// Deterministic JSON: equal manifests give identical bytes.
std::string manifest_json(const RunManifest& manifest);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace eventforge::cli
