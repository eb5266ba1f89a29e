#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/cli.hpp"
#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "eventforge/dataset.hpp"
#include "eventforge/representations.hpp"

using namespace eventforge;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

std::string shell(const std::string& command) {
  std::string output;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, n);
  CHECK(pclose(pipe) == 0);
  return output;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 1, help exits 0") {
    CHECK(run_cli({}) == cli::kExitUsage);
    CHECK(run_cli({"frobnicate"}) == cli::kExitUsage);
    CHECK(run_cli({"windows", "--repr"}) == cli::kExitUsage);
    CHECK(run_cli({"--help"}) == cli::kExitOk);
    std::string err;
    CHECK(run_cli({"windows", "-i", "x", "--repr", "voxel"}, nullptr, &err) == cli::kExitUsage);
    CHECK(err.find("voxel") != std::string::npos);
  }

  TEST_CASE("data errors exit 2") {
    TempDir dir("eventforge_cli_data");
    write_text(dir.path / "bad.bin", std::string("\x01\x02\x03", 3));
    std::string err;
    CHECK(run_cli({"decode", "-i", (dir.path / "bad.bin").string(), "-o", (dir.path / "o.csv").string()}, nullptr,
                  &err) == cli::kExitData);
    CHECK(err.find("offset") != std::string::npos);
    CHECK(run_cli({"info", (dir.path / "missing.bin").string()}) == cli::kExitData);
  }

  TEST_CASE("simulate is deterministic and matches the in-memory pipeline") {
    TempDir dir("eventforge_cli_sim");
    write_text(dir.path / "sim.yaml", "seed: 5\nduration: 0.3\ncamera:\n  width: 64\n  height: 48\n");
    for (const char* sub : {"a", "b"}) {
      REQUIRE(run_cli({"simulate", "--config", (dir.path / "sim.yaml").string(), "--out-dir",
                       (dir.path / sub).string()}) == 0);
    }
    CHECK(slurp(dir.path / "a/events.bin") == slurp(dir.path / "b/events.bin"));
    CHECK(slurp(dir.path / "a/poses.meta") == slurp(dir.path / "b/poses.meta"));
    const auto manifest = slurp(dir.path / "a/manifest.json");
    CHECK(manifest.find("\"seed\": 5") != std::string::npos);

    const auto spec = cli::load_simulation_spec(dir.path / "sim.yaml");
    const auto direct = cli::run_simulation(spec);
    const auto ds = load_paired(dir.path / "a/events.bin", dir.path / "a/poses.meta");
    CHECK(ds.step_count() == direct.steps);
    const auto all = ds.slice(0, ds.step_count());
    CHECK(all.events == direct.events);
    CHECK(all.poses == direct.poses);

    std::string out;
    REQUIRE(run_cli({"info", (dir.path / "a/events.bin").string(), "--metadata",
                     (dir.path / "a/poses.meta").string()},
                    &out) == 0);
    CHECK(out.find("events " + std::to_string(direct.events.size()) + "\n") != std::string::npos);
    CHECK(out.find("steps 300\n") != std::string::npos);
  }

  TEST_CASE("unknown config keys are data errors") {
    TempDir dir("eventforge_cli_cfg");
    write_text(dir.path / "sim.yaml", "seed: 1\ncamra: {}\n");
    CHECK(run_cli({"simulate", "--config", (dir.path / "sim.yaml").string(), "--out-dir", dir.path.string()}) ==
          cli::kExitData);
  }

  TEST_CASE("encode and decode through CSV files") {
    TempDir dir("eventforge_cli_csv");
    write_text(dir.path / "in.csv", "x,y,t_us,p\n1,2,0,1\n3,4,2000,0\n");
    REQUIRE(run_cli({"encode", "-i", (dir.path / "in.csv").string(), "-o", (dir.path / "e.bin").string(), "--steps",
                     "5"}) == 0);
    CHECK(fs::file_size(dir.path / "e.bin") == 4 * (2 + 5));
    CHECK(fs::exists(dir.path / "e.bin.manifest.json"));
    REQUIRE(run_cli({"decode", "-i", (dir.path / "e.bin").string(), "-o", (dir.path / "out.csv").string()}) == 0);
    CHECK(slurp(dir.path / "out.csv") == "# steps=5\nx,y,t_us,p\n1,2,0,1\n3,4,2000,0\n");
  }

  TEST_CASE("windows writes one record per full window") {
    TempDir dir("eventforge_cli_win");
    write_text(dir.path / "sim.yaml", "seed: 2\nduration: 0.2\ncamera:\n  width: 32\n  height: 24\n");
    REQUIRE(run_cli({"simulate", "--config", (dir.path / "sim.yaml").string(), "--out-dir", dir.path.string()}) == 0);
    std::string out;
    REQUIRE(run_cli({"windows", "-i", (dir.path / "events.bin").string(), "-o", (dir.path / "w.evrw").string(),
                     "--width", "32", "--height", "24", "--length-ms", "100", "--stride-ms", "1"},
                    &out) == 0);
    CHECK(out == "windows 101\n");
    CHECK(fs::file_size(dir.path / "w.evrw") == 101 * (16 + 2 * 32 * 24 * 4));

    const auto ds = load_paired(dir.path / "events.bin", dir.path / "poses.meta");
    const auto events = ds.slice(0, ds.step_count()).events;
    std::ifstream records(dir.path / "w.evrw", std::ios::binary);
    std::size_t i = 0;
    while (auto rec = read_window_record(records)) {
      const auto expected = build_lnes(window_at(events, static_cast<Timestamp>(i) * 1000, 100'000), {32, 24});
      CHECK(rec->data == expected.data);
      ++i;
    }
    CHECK(i == 101);

    REQUIRE(run_cli({"windows", "-i", (dir.path / "events.bin").string(), "-o", (dir.path / "p.evrw").string(),
                     "--width", "32", "--height", "24", "--parallel"}) == 0);
    CHECK(slurp(dir.path / "p.evrw") == slurp(dir.path / "w.evrw"));
  }

  TEST_CASE("filter and eval subcommands") {
    TempDir dir("eventforge_cli_filter");
    std::vector<PoseVector> raw(30);
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i].values.fill(0.01 * static_cast<double>(i));
    write_file(dir.path / "raw.meta", encode_metadata(raw));
    for (const char* mode : {"slow", "fast", "auto"}) {
      std::string out;
      REQUIRE(run_cli({"filter", "-i", (dir.path / "raw.meta").string(), "-o", (dir.path / "f.meta").string(),
                       "--mode", mode},
                      &out) == 0);
      CHECK(out.find("frames 30") == 0);
      CHECK(to_poses(decode_metadata(read_file(dir.path / "f.meta"))).size() == 30);
    }

    std::ostringstream gt;
    std::ostringstream pred;
    gt << "frame,joint,x,y,z\n";
    pred << "frame,joint,x,y,z\n";
    for (int f = 0; f < 3; ++f)
      for (int j = 0; j < 21; ++j) {
        gt << f << "," << j << "," << j << ",0,0\n";
        pred << f << "," << j << "," << j + (j == 0 ? 0 : 10) << ",0,0\n";
      }
    write_text(dir.path / "gt.csv", gt.str());
    write_text(dir.path / "pred.csv", pred.str());
    std::string out;
    REQUIRE(run_cli({"eval", "--pred", (dir.path / "pred.csv").string(), "--gt", (dir.path / "gt.csv").string(), "-o",
                     (dir.path / "curve.csv").string(), "--png", (dir.path / "curve.png").string()},
                    &out) == 0);
    CHECK(out.find("3d_auc") != std::string::npos);
    CHECK(fs::file_size(dir.path / "curve.png") > 100);
    CHECK(slurp(dir.path / "curve.csv").find("threshold_mm,pck\n0,") == 0);
  }

  TEST_CASE("shell pipeline equals the in-memory pipeline") {
    TempDir dir("eventforge_cli_pipe");
    const std::string tool = EVENTFORGE_TOOL;
    write_text(dir.path / "sim.yaml", "seed: 9\nduration: 0.15\ncamera:\n  width: 40\n  height: 30\n");
    const auto p = dir.path.string();
    shell(tool + " simulate --config " + p + "/sim.yaml --out-dir " + p + " --csv - 2>/dev/null | " + tool +
          " encode -o " + p + "/piped.bin");
    CHECK(slurp(dir.path / "piped.bin") == slurp(dir.path / "events.bin"));

    const auto via_pipe = shell(tool + " decode -i " + p + "/events.bin | " + tool + " encode | " + tool +
                                " windows --width 40 --height 30 --length-ms 50 --stride-ms 5 2>/dev/null");
    const auto spec = cli::load_simulation_spec(dir.path / "sim.yaml");
    const auto direct = cli::run_simulation(spec);
    std::ostringstream expected;
    for (const auto& w : WindowSlider(direct.events, 50'000, 5'000, direct.steps * direct.step_duration))
      write_window_record(expected, build_lnes(w, {40, 30}));
    CHECK(via_pipe == expected.str());
  }
}
