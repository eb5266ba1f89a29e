#include "cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "eventforge/error.hpp"

namespace eventforge::cli {

namespace {

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed, const std::string& where) {
  if (!node.IsMap()) throw DataError(where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw DataError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_value(const YAML::Node& node, const char* key, T& out, const std::string& where) {
  if (!node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception&) {
    throw DataError("bad value for '" + std::string(key) + "' in " + where);
  }
}

}  // namespace

SimulationSpec load_simulation_spec(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::Exception& e) {
    throw DataError("cannot read config " + path.string() + ": " + e.what());
  }
  SimulationSpec spec;
  if (root.IsNull()) return spec;
  check_keys(root, {"seed", "duration", "camera", "scene"}, "config");
  read_value(root, "seed", spec.seed, "config");
  read_value(root, "duration", spec.duration, "config");
  if (const auto cam = root["camera"]) {
    check_keys(cam,
               {"width", "height", "threshold", "noise_rate_positive", "noise_rate_negative", "epsilon",
                "steps_per_second"},
               "camera");
    read_value(cam, "width", spec.camera.geometry.width, "camera");
    read_value(cam, "height", spec.camera.geometry.height, "camera");
    read_value(cam, "threshold", spec.camera.threshold, "camera");
    read_value(cam, "noise_rate_positive", spec.camera.noise_rate_positive, "camera");
    read_value(cam, "noise_rate_negative", spec.camera.noise_rate_negative, "camera");
    read_value(cam, "epsilon", spec.camera.epsilon, "camera");
    read_value(cam, "steps_per_second", spec.camera.steps_per_second, "camera");
  }
  if (const auto scene = root["scene"]) {
    check_keys(scene, {"primitive", "radius_px", "static", "rerandomize", "rerandomize_period"}, "scene");
    read_value(scene, "primitive", spec.primitive, "scene");
    if (scene["radius_px"]) {
      double r = 0.0;
      read_value(scene, "radius_px", r, "scene");
      spec.radius_px = r;
    }
    read_value(scene, "static", spec.static_scene, "scene");
    read_value(scene, "rerandomize", spec.rerandomize, "scene");
    read_value(scene, "rerandomize_period", spec.rerandomize_period, "scene");
  }
  try {
    spec.camera.validate();
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid camera config: ") + e.what());
  }
  if (spec.primitive != "random" && spec.primitive != "sphere" && spec.primitive != "disk") {
    throw DataError("scene.primitive must be random, sphere or disk");
  }
  return spec;
}

SceneConfig build_scene(const SimulationSpec& spec, Rng& rng) {
  const int seconds = std::max(1, static_cast<int>(std::ceil(spec.duration)));
  SceneConfig scene = random_scene(spec.camera.geometry, seconds, rng);
  if (spec.primitive == "sphere") scene.primitive.shape = PrimitiveShape::Sphere;
  if (spec.primitive == "disk") scene.primitive.shape = PrimitiveShape::Disk;
  if (spec.radius_px) scene.primitive.radius_px = *spec.radius_px;
  if (spec.static_scene) {
    const PoseVector hold = scene.trajectory.keyposes.front();
    for (auto& p : scene.trajectory.keyposes) p = hold;
    for (auto& p : scene.trajectory.midpoints) p = hold;
  }
  scene.rerandomize_period = spec.rerandomize_period;
  return scene;
}

SimulationResult run_simulation(const SimulationSpec& spec) {
  Rng rng(spec.seed);
  SceneConfig scene = build_scene(spec, rng);
  SimulateOptions options;
  options.rerandomize = spec.rerandomize;
  return simulate(std::move(scene), spec.camera, spec.duration, rng, options);
}

std::string tool_version() { return "0.1.0"; }

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::ordered_json j;
  j["tool"] = "eventforge";
  j["version"] = tool_version();
  j["subcommand"] = manifest.subcommand;
  if (manifest.seed) {
    j["seed"] = *manifest.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["config"] = manifest.config_path;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest.parameters) params[k] = v;
  j["parameters"] = params;
  return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write manifest " + path.string());
  out << manifest_json(manifest);
}

}  // namespace eventforge::cli
