#include "cli/commands.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>

#include "cli/cli.hpp"
#include "cli/config.hpp"
#include "eventforge/benchmarks.hpp"
#include "eventforge/calibration.hpp"
#include "eventforge/dataset.hpp"
#include "eventforge/error.hpp"
#include "eventforge/image_io.hpp"
#include "eventforge/kalman.hpp"
#include "eventforge/metrics.hpp"
#include "eventforge/parallel.hpp"
#include "eventforge/representations.hpp"
#include "eventforge/scheduler.hpp"
#include "eventforge/stream_format.hpp"
#include "eventforge/windowing.hpp"

namespace fs = std::filesystem;

namespace eventforge::cli {

namespace {

bool is_stdio(const std::string& path) { return path.empty() || path == "-"; }

std::vector<std::uint8_t> read_input(const std::string& path) {
  if (!is_stdio(path)) return read_file(path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
  return bytes;
}

void write_output(const std::string& path, std::span<const std::uint8_t> bytes, std::ostream& out) {
  if (is_stdio(path)) {
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    return;
  }
  write_file(path, bytes);
}

std::ofstream open_text(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path);
  return file;
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

void manifest_for(const std::string& output, const RunManifest& manifest) {
  if (is_stdio(output)) return;
  write_manifest(output + ".manifest.json", manifest);
}

Duration ms_to_us(double ms, const char* flag) {
  const double us = ms * 1000.0;
  const auto rounded = std::llround(us);
  if (rounded < 1 || std::abs(us - static_cast<double>(rounded)) > 1e-6)
    throw UsageError(std::string(flag) + " must be a positive whole number of microseconds");
  return rounded;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line) {
  T value{};
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw DataError("line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

}  // namespace

void write_events_csv(std::ostream& out, std::span<const Event> events, std::int64_t steps) {
  out << "# steps=" << steps << "\n";
  out << "x,y,t_us,p\n";
  std::string buffer;
  buffer.reserve(1 << 16);
  for (const auto& e : events) {
    buffer += std::to_string(e.x);
    buffer += ',';
    buffer += std::to_string(e.y);
    buffer += ',';
    buffer += std::to_string(e.t);
    buffer += e.polarity == Polarity::Positive ? ",1\n" : ",0\n";
    if (buffer.size() > (1 << 16) - 64) {
      out << buffer;
      buffer.clear();
    }
  }
  out << buffer;
}

CsvEvents read_events_csv(std::istream& in) {
  CsvEvents result;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      constexpr std::string_view key = "# steps=";
      if (line.starts_with(key))
        result.steps = parse_number<std::int64_t>(std::string_view(line).substr(key.size()), number);
      continue;
    }
    if (line.starts_with("x,")) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4)
      throw DataError("line " + std::to_string(number) + ": expected 4 fields x,y,t_us,p");
    Event e;
    const auto x = parse_number<std::int64_t>(fields[0], number);
    const auto y = parse_number<std::int64_t>(fields[1], number);
    if (x < 0 || x > 65535 || y < 0 || y > 65535)
      throw DataError("line " + std::to_string(number) + ": coordinate out of range");
    e.x = static_cast<std::uint16_t>(x);
    e.y = static_cast<std::uint16_t>(y);
    e.t = parse_number<std::int64_t>(fields[2], number);
    const auto p = parse_number<int>(fields[3], number);
    if (p != 0 && p != 1) throw DataError("line " + std::to_string(number) + ": polarity must be 0 or 1");
    e.polarity = p == 1 ? Polarity::Positive : Polarity::Negative;
    result.events.push_back(e);
  }
  return result;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  SimulationSpec spec = args.config.empty() ? SimulationSpec{} : load_simulation_spec(args.config);
  if (args.duration) spec.duration = *args.duration;
  if (args.seed) spec.seed = *args.seed;
  if (!(spec.duration > 0.0)) throw UsageError("--duration must be positive");

  const auto result = run_simulation(spec);
  const auto encoded = encode_events(result.events, result.steps, result.step_duration);
  const auto metadata = encode_metadata(result.poses);

  fs::create_directories(args.out_dir);
  const auto events_path = (fs::path(args.out_dir) / args.events_name).string();
  const auto poses_path = (fs::path(args.out_dir) / args.poses_name).string();
  write_file(events_path, encoded.bytes);
  write_file(poses_path, metadata);

  RunManifest manifest{"simulate", spec.seed, args.config, {}, {events_path, poses_path}, {}};
  manifest.parameters = {
      {"duration", format_double(spec.duration)},
      {"width", std::to_string(spec.camera.geometry.width)},
      {"height", std::to_string(spec.camera.geometry.height)},
      {"threshold", format_double(spec.camera.threshold)},
      {"noise_rate_positive", format_double(spec.camera.noise_rate_positive)},
      {"noise_rate_negative", format_double(spec.camera.noise_rate_negative)},
      {"epsilon", format_double(spec.camera.epsilon)},
      {"steps_per_second", std::to_string(spec.camera.steps_per_second)},
      {"primitive", spec.primitive},
      {"static", spec.static_scene ? "true" : "false"},
      {"rerandomize", spec.rerandomize ? "true" : "false"},
  };
  write_manifest(fs::path(args.out_dir) / "manifest.json", manifest);

  std::ostream& report = is_stdio(args.csv) && !args.csv.empty() ? err : out;
  if (!args.csv.empty()) {
    if (is_stdio(args.csv)) {
      write_events_csv(out, result.events, result.steps);
    } else {
      auto file = open_text(args.csv);
      write_events_csv(file, result.events, result.steps);
    }
  }
  report << "steps " << result.steps << "\n"
         << "events " << result.events.size() << "\n"
         << "events_file " << events_path << "\n"
         << "metadata_file " << poses_path << "\n";
  return kExitOk;
}

int cmd_encode(const EncodeArgs& args, std::ostream& out, std::ostream& err) {
  CsvEvents csv;
  if (is_stdio(args.input)) {
    csv = read_events_csv(std::cin);
  } else {
    std::ifstream file(args.input);
    if (!file) throw DataError("cannot read " + args.input);
    csv = read_events_csv(file);
  }
  const auto report = validate_stream(csv.events, SensorGeometry{65535, 256});
  if (report.regressions > 0)
    throw DataError("input events are not sorted by time (first at event " +
                    std::to_string(*report.first_regression) + ")");
  const auto encoded = encode_events(csv.events, std::max(args.steps, csv.steps), args.step_us);
  write_output(args.output, encoded.bytes, out);
  if (encoded.quantized > 0)
    err << "warning: " << encoded.quantized << " timestamps were not on the " << args.step_us
        << " us step grid and were rounded down\n";
  manifest_for(args.output, {"encode",
                             std::nullopt,
                             "",
                             {args.input},
                             {args.output},
                             {{"step_us", std::to_string(args.step_us)}, {"steps", std::to_string(args.steps)}}});
  return kExitOk;
}

int cmd_decode(const DecodeArgs& args, std::ostream& out, std::ostream& /*err*/) {
  const auto bytes = read_input(args.input);
  const auto decoded = decode_events(bytes, args.step_us);
  if (is_stdio(args.output)) {
    write_events_csv(out, decoded.events, decoded.steps);
  } else {
    auto file = open_text(args.output);
    write_events_csv(file, decoded.events, decoded.steps);
  }
  manifest_for(args.output,
               {"decode", std::nullopt, "", {args.input}, {args.output}, {{"step_us", std::to_string(args.step_us)}}});
  return kExitOk;
}

int cmd_info(const InfoArgs& args, std::ostream& out, std::ostream& /*err*/) {
  std::vector<std::size_t> per_step;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::int64_t steps = 0;
  std::size_t events = 0;
  std::uint32_t fields = 0;
  if (!args.metadata.empty()) {
    const auto dataset = EventDataset::open(args.input, args.metadata, args.step_us);
    steps = dataset.step_count();
    events = dataset.event_count();
    fields = dataset.metadata_fields();
    std::vector<Event> buffer;
    for (std::int64_t s = 0; s < steps; ++s) {
      dataset.step_events(s, buffer);
      per_step.push_back(buffer.size());
      for (const auto& e : buffer) (e.polarity == Polarity::Positive ? positive : negative)++;
    }
  } else {
    const auto decoded = decode_events(read_file(args.input), args.step_us);
    steps = decoded.steps;
    events = decoded.events.size();
    per_step.assign(static_cast<std::size_t>(steps) + 1, 0);
    for (const auto& e : decoded.events) {
      per_step[static_cast<std::size_t>(e.t / args.step_us)]++;
      (e.polarity == Polarity::Positive ? positive : negative)++;
    }
    if (per_step.back() == 0) per_step.pop_back();
  }

  out << "steps " << steps << "\n";
  out << "duration_s " << format_double(static_cast<double>(steps * args.step_us) / 1e6) << "\n";
  out << "events " << events << "\n";
  out << "positive " << positive << "\n";
  out << "negative " << negative << "\n";
  if (!args.metadata.empty()) out << "metadata_fields " << fields << "\n";
  if (steps > 0) out << "mean_events_per_step " << format_double(double(events) / double(steps)) << "\n";

  // Decade buckets of events per step.
  const std::array<std::pair<std::size_t, const char*>, 6> buckets{{{0, "0"},
                                                                     {1, "1-9"},
                                                                     {10, "10-99"},
                                                                     {100, "100-999"},
                                                                     {1000, "1000-9999"},
                                                                     {10000, ">=10000"}}};
  std::array<std::size_t, 6> counts{};
  for (const auto n : per_step) {
    std::size_t b = 0;
    while (b + 1 < buckets.size() && n >= buckets[b + 1].first) ++b;
    counts[b]++;
  }
  out << "events_per_step_histogram\n";
  for (std::size_t b = 0; b < buckets.size(); ++b) out << "  " << buckets[b].second << " " << counts[b] << "\n";
  return kExitOk;
}

int cmd_windows(const WindowsArgs& args, std::ostream& out, std::ostream& err) {
  const auto kind = parse_representation(args.repr);
  if (!kind) throw UsageError("unknown representation '" + args.repr + "' (lnes, eoi, eci, eci-s)");
  const auto length = ms_to_us(args.length_ms, "--length-ms");
  const auto stride = ms_to_us(args.stride_ms, "--stride-ms");
  const SensorGeometry geometry{args.width, args.height};
  geometry.validate();

  const auto decoded = decode_events(read_input(args.input), args.step_us);
  const auto report = validate_stream(decoded.events, geometry);
  if (report.out_of_bounds > 0) throw DataError(report.describe(geometry));

  std::ofstream file;
  std::ostream* sink = &out;
  if (!is_stdio(args.output)) {
    file = open_text(args.output);
    sink = &file;
  }
  if (!args.png_dir.empty()) fs::create_directories(args.png_dir);

  const Timestamp stream_end = decoded.steps * args.step_us;
  WindowSlider slider(decoded.events, length, stride, stream_end);
  std::size_t written = 0;
  auto emit = [&](const WindowImage& image) {
    write_window_record(*sink, image);
    if (!args.png_dir.empty() && (args.png_limit == 0 || written < args.png_limit)) {
      std::ostringstream name;
      name << to_string(*kind) << "_" << std::setw(6) << std::setfill('0') << written << ".png";
      write_window_png(fs::path(args.png_dir) / name.str(), image);
    }
    ++written;
  };

  if (args.parallel) {
    std::vector<EventWindow> chunk;
    constexpr std::size_t kChunk = 256;
    auto flush = [&] {
      for (const auto& image : build_batch_parallel(*kind, chunk, geometry)) emit(image);
      chunk.clear();
    };
    for (const auto& window : slider) {
      chunk.push_back(window);
      if (chunk.size() == kChunk) flush();
    }
    flush();
  } else {
    WindowImage image;
    for (const auto& window : slider) {
      build_representation_into(*kind, window, geometry, image);
      emit(image);
    }
  }
  sink->flush();
  if (!*sink) throw DataError("failed writing window records");

  (is_stdio(args.output) ? err : out) << "windows " << written << "\n";
  manifest_for(args.output, {"windows",
                             std::nullopt,
                             "",
                             {args.input},
                             {args.output},
                             {{"repr", std::string(to_string(*kind))},
                              {"length_us", std::to_string(length)},
                              {"stride_us", std::to_string(stride)},
                              {"width", std::to_string(args.width)},
                              {"height", std::to_string(args.height)},
                              {"step_us", std::to_string(args.step_us)}}});
  return kExitOk;
}

int cmd_filter(const FilterArgs& args, std::ostream& out, std::ostream& /*err*/) {
  const auto stream = decode_metadata(read_file(args.input));
  const auto raw = to_poses(stream);
  std::vector<PoseVector> filtered;
  filtered.reserve(raw.size());
  std::size_t fast_frames = 0;

  if (args.mode == "auto") {
    if (args.sigma2 || args.obs_noise) throw UsageError("--sigma2/--obs-noise apply to slow and fast modes only");
    SchedulerThresholds thresholds;
    thresholds.fast_residual = args.fast_residual;
    thresholds.residual_window = args.probe_window;
    SlowMotionScheduler scheduler(thresholds);
    PoseFilter main_filter(FilterSettings::slow());
    for (const auto& pose : raw) {
      if (scheduler.observe(pose, main_filter) == FilterMode::Fast) ++fast_frames;
      filtered.push_back(main_filter.filter(pose));
    }
  } else {
    FilterSettings settings = args.mode == "fast" ? FilterSettings::fast() : FilterSettings::slow();
    if (args.sigma2) settings.process_sigma2 = *args.sigma2;
    if (args.obs_noise) settings.observation_noise = *args.obs_noise;
    try {
      settings.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    PoseFilter filter(settings);
    for (const auto& pose : raw) filtered.push_back(filter.filter(pose));
  }

  write_file(args.output, encode_metadata(filtered, stream.magic));
  out << "frames " << filtered.size() << "\n";
  if (args.mode == "auto") out << "fast_frames " << fast_frames << "\n";

  RunManifest manifest{"filter", std::nullopt, "", {args.input}, {args.output}, {{"mode", args.mode}}};
  if (args.sigma2) manifest.parameters.emplace_back("sigma2", format_double(*args.sigma2));
  if (args.obs_noise) manifest.parameters.emplace_back("obs_noise", format_double(*args.obs_noise));
  if (args.mode == "auto") {
    manifest.parameters.emplace_back("probe_window", std::to_string(args.probe_window));
    manifest.parameters.emplace_back("fast_residual", format_double(args.fast_residual));
  }
  manifest_for(args.output, manifest);
  return kExitOk;
}

int cmd_calibrate(const CalibrateArgs& args, std::ostream& out, std::ostream& /*err*/) {
  const auto decoded = decode_events(read_file(args.events), args.step_us);
  if (args.static_scene) {
    const double seconds = static_cast<double>(decoded.steps * args.step_us) / 1e6;
    if (!(seconds > 0.0)) throw DataError("static recording has no steps");
    const auto rates = estimate_noise_rates(decoded.events, seconds);
    out << "noise_rate_positive " << format_double(rates.positive) << "\n";
    out << "noise_rate_negative " << format_double(rates.negative) << "\n";
    return kExitOk;
  }
  if (args.frames.empty()) throw UsageError("calibrate needs --frames unless --static is given");
  if (args.noise_positive.has_value() != args.noise_negative.has_value())
    throw UsageError("give both --noise-positive and --noise-negative, or neither");

  std::ifstream list(args.frames);
  if (!list) throw DataError("cannot read " + args.frames);
  CalibrationInput input;
  input.epsilon = args.epsilon;
  std::string line;
  std::size_t number = 0;
  while (std::getline(list, line)) {
    ++number;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    Timestamp t = 0;
    std::string name;
    if (!(fields >> t >> name)) throw DataError(args.frames + ":" + std::to_string(number) + ": expected '<us> <file>'");
    fs::path path(name);
    if (path.is_relative()) path = fs::path(args.frames).parent_path() / path;
    input.frames.push_back({read_pgm(path), t});
  }
  input.events = decoded.events;

  std::optional<NoiseRates> noise;
  if (args.noise_positive) noise = NoiseRates{*args.noise_positive, *args.noise_negative};
  const auto estimate = estimate_threshold(input, noise);
  out << "threshold " << format_double(estimate.raw) << "\n";
  if (estimate.corrected) out << "threshold_noise_corrected " << format_double(*estimate.corrected) << "\n";
  out << "total_log_change " << format_double(estimate.total_log_change) << "\n";
  out << "events " << estimate.event_count << "\n";
  return kExitOk;
}

namespace {

template <int Dim>
std::vector<KeypointSet<Dim>> read_keypoints(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::map<std::int64_t, std::pair<KeypointSet<Dim>, std::array<bool, kKeypointCount>>> frames;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line.starts_with("frame")) continue;
    const auto fields = split(line, ',');
    if (fields.size() != static_cast<std::size_t>(2 + Dim))
      throw DataError(path + ":" + std::to_string(number) + ": expected " + std::to_string(2 + Dim) + " fields");
    const auto frame = parse_number<std::int64_t>(fields[0], number);
    const auto joint = parse_number<int>(fields[1], number);
    if (joint < 0 || joint >= kKeypointCount)
      throw DataError(path + ":" + std::to_string(number) + ": joint index out of range");
    auto& [set, seen] = frames[frame];
    for (int d = 0; d < Dim; ++d) set.points[joint](d) = parse_number<double>(fields[2 + d], number);
    seen[joint] = true;
  }
  std::vector<KeypointSet<Dim>> result;
  for (const auto& [frame, entry] : frames) {
    if (!std::ranges::all_of(entry.second, [](bool b) { return b; }))
      throw DataError(path + ": frame " + std::to_string(frame) + " is missing joints");
    result.push_back(entry.first);
  }
  return result;
}

int detect_dimension(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line.starts_with("frame")) continue;
    const auto n = split(line, ',').size();
    if (n == 4) return 2;
    if (n == 5) return 3;
    throw DataError(path + ": rows must be frame,joint,x,y or frame,joint,x,y,z");
  }
  throw DataError(path + ": no keypoints");
}

void draw_line(std::vector<std::uint8_t>& rgb, int width, int height, int x0, int y0, int x1, int y1,
               std::array<std::uint8_t, 3> colour) {
  const int dx = std::abs(x1 - x0);
  const int dy = -std::abs(y1 - y0);
  const int sx = x0 < x1 ? 1 : -1;
  const int sy = y0 < y1 ? 1 : -1;
  int e = dx + dy;
  while (true) {
    if (x0 >= 0 && x0 < width && y0 >= 0 && y0 < height)
      std::copy(colour.begin(), colour.end(), rgb.begin() + 3 * (static_cast<std::ptrdiff_t>(y0) * width + x0));
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * e;
    if (e2 >= dy) {
      e += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      e += dx;
      y0 += sy;
    }
  }
}

void plot_curve(const std::string& path, const PckCurve& curve) {
  constexpr int kWidth = 480;
  constexpr int kHeight = 360;
  constexpr int kMargin = 40;
  std::vector<std::uint8_t> rgb(kWidth * kHeight * 3, 255);
  const std::array<std::uint8_t, 3> grey{200, 200, 200};
  const std::array<std::uint8_t, 3> black{0, 0, 0};
  const std::array<std::uint8_t, 3> blue{30, 90, 200};
  const int x_span = kWidth - 2 * kMargin;
  const int y_span = kHeight - 2 * kMargin;
  for (int i = 1; i <= 10; ++i) {
    const int y = kHeight - kMargin - i * y_span / 10;
    draw_line(rgb, kWidth, kHeight, kMargin, y, kWidth - kMargin, y, grey);
    const int x = kMargin + i * x_span / 10;
    draw_line(rgb, kWidth, kHeight, x, kMargin, x, kHeight - kMargin, grey);
  }
  draw_line(rgb, kWidth, kHeight, kMargin, kHeight - kMargin, kWidth - kMargin, kHeight - kMargin, black);
  draw_line(rgb, kWidth, kHeight, kMargin, kMargin, kMargin, kHeight - kMargin, black);

  const double t0 = curve.thresholds.front();
  const double range = curve.thresholds.back() - t0;
  auto px = [&](std::size_t i) {
    return kMargin + static_cast<int>(std::lround((curve.thresholds[i] - t0) / range * x_span));
  };
  auto py = [&](std::size_t i) {
    return kHeight - kMargin - static_cast<int>(std::lround(curve.values[i] * y_span));
  };
  for (std::size_t i = 1; i < curve.values.size(); ++i)
    for (int w = -1; w <= 1; ++w)
      draw_line(rgb, kWidth, kHeight, px(i - 1), py(i - 1) + w, px(i), py(i) + w, blue);
  write_png_rgb(path, kWidth, kHeight, rgb);
}

}  // namespace

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& /*err*/) {
  const int dim = detect_dimension(args.gt);
  if (detect_dimension(args.pred) != dim) throw DataError("prediction and ground truth dimensions differ");
  const double max = args.max_threshold.value_or(dim == 3 ? 100.0 : 1.0);
  if (!(max > 0.0)) throw UsageError("--max-threshold must be positive");
  const auto thresholds = linear_thresholds(max, args.steps);
  const auto averaging = args.per_frame ? PckAveraging::PerFrame : PckAveraging::Pooled;

  PckCurve curve;
  std::size_t frames = 0;
  if (dim == 3) {
    const auto pred = read_keypoints<3>(args.pred);
    const auto gt = read_keypoints<3>(args.gt);
    if (pred.size() != gt.size()) throw DataError("prediction and ground truth frame counts differ");
    curve = pck3d(pred, gt, thresholds, averaging);
    frames = gt.size();
  } else {
    const auto pred = read_keypoints<2>(args.pred);
    const auto gt = read_keypoints<2>(args.gt);
    if (pred.size() != gt.size()) throw DataError("prediction and ground truth frame counts differ");
    curve = pck2d_palm(pred, gt, thresholds, averaging);
    frames = gt.size();
  }
  const double area = auc(curve);

  if (!args.output.empty()) {
    auto file = open_text(args.output);
    file << (dim == 3 ? "threshold_mm,pck\n" : "threshold_palm,pck\n");
    for (std::size_t i = 0; i < curve.values.size(); ++i)
      file << format_double(curve.thresholds[i]) << "," << format_double(curve.values[i]) << "\n";
  }
  if (!args.png.empty()) plot_curve(args.png, curve);

  out << "frames " << frames << "\n";
  out << (dim == 3 ? "3d_auc " : "2d_aucp ") << format_double(area) << "\n";
  if (!args.output.empty()) {
    RunManifest manifest{"eval", std::nullopt, "", {args.pred, args.gt}, {args.output}, {}};
    manifest.parameters = {{"max_threshold", format_double(max)},
                           {"steps", std::to_string(args.steps)},
                           {"averaging", args.per_frame ? "per-frame" : "pooled"}};
    manifest_for(args.output, manifest);
  }
  return kExitOk;
}

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& /*err*/) {
  const fs::path dir = args.dir.empty() ? fs::temp_directory_path() / "eventforge-bench" : fs::path(args.dir);
  fs::create_directories(dir);
  out << "threads " << max_threads() << (args.parallel ? " (parallel kernels)" : " (serial kernels)") << "\n";
  out << "reference_loader_events_per_s " << format_double(kReferenceLoaderEventsPerSecond) << "\n";
  out << "reference_simulator_frames_per_s " << format_double(kReferenceSimulatorFramesPerSecond) << "\n";

  const auto loader = benchmark_loader(dir, args.events);
  out << "loader_events_per_s " << format_double(loader.events_per_second) << "\n";
  out << "loader_simulated_s_per_s " << format_double(loader.simulated_seconds_per_second) << "\n";
  out << "loader_vs_reference " << format_double(loader.events_per_second / kReferenceLoaderEventsPerSecond)
      << "\n";

  const auto simulator = benchmark_simulator(args.frames, args.parallel);
  out << "simulator_frames_per_s " << format_double(simulator.frames_per_second) << "\n";

  const auto lnes = benchmark_lnes(args.lnes_seconds, args.parallel);
  out << "lnes_windows_per_s " << format_double(lnes.windows_per_second) << "\n";
  return kExitOk;
}

}  // namespace eventforge::cli
