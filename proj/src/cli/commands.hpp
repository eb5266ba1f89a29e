#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eventforge/event.hpp"

namespace eventforge::cli {

struct SimulateArgs {
  std::string config;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string events_name = "events.bin";
  std::string poses_name = "poses.meta";
  /// Also write the stream as CSV ("-" for stdout).
  std::string csv;
};

struct EncodeArgs {
  std::string input = "-";
  std::string output = "-";
  Duration step_us = 1000;
  std::int64_t steps = 0;
};

struct DecodeArgs {
  std::string input = "-";
  std::string output = "-";
  Duration step_us = 1000;
};

struct InfoArgs {
  std::string input;
  std::string metadata;
  Duration step_us = 1000;
};

struct WindowsArgs {
  std::string input = "-";
  std::string output = "-";
  std::string repr = "lnes";
  double length_ms = 100.0;
  double stride_ms = 1.0;
  int width = 240;
  int height = 180;
  Duration step_us = 1000;
  std::string png_dir;
  std::size_t png_limit = 0;
  bool parallel = false;
};

struct FilterArgs {
  std::string input;
  std::string output;
  std::string mode = "slow";
  std::optional<double> sigma2;
  std::optional<double> obs_noise;
  std::size_t probe_window = 1;
  double fast_residual = 0.7;
};

struct CalibrateArgs {
  std::string events;
  std::string frames;
  double epsilon = 10.0;
  std::optional<double> noise_positive;
  std::optional<double> noise_negative;
  bool static_scene = false;
  Duration step_us = 1000;
};

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::optional<double> max_threshold;
  int steps = 100;
  bool per_frame = false;
  std::string output;
  std::string png;
};

struct BenchArgs {
  std::uint64_t events = 20'000'000;
  std::int64_t frames = 2000;
  double lnes_seconds = 1.2;
  std::string dir;
  bool parallel = false;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_encode(const EncodeArgs& args, std::ostream& out, std::ostream& err);
int cmd_decode(const DecodeArgs& args, std::ostream& out, std::ostream& err);
int cmd_info(const InfoArgs& args, std::ostream& out, std::ostream& err);
int cmd_windows(const WindowsArgs& args, std::ostream& out, std::ostream& err);
int cmd_filter(const FilterArgs& args, std::ostream& out, std::ostream& err);
int cmd_calibrate(const CalibrateArgs& args, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err);

/// CSV event text: optional "# steps=N" line, header "x,y,t_us,p", then one
/// event per line with p = 1 (positive) or 0 (negative).
void write_events_csv(std::ostream& out, std::span<const Event> events, std::int64_t steps);
struct CsvEvents {
  std::vector<Event> events;
  std::int64_t steps = 0;
};
/// Throws DataError naming the offending line.
CsvEvents read_events_csv(std::istream& in);

}  // namespace eventforge::cli
