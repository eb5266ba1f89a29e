// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// if any criterion fails.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "eventforge/benchmarks.hpp"
#include "eventforge/calibration.hpp"
#include "eventforge/dataset.hpp"
#include "eventforge/error.hpp"
#include "eventforge/kalman.hpp"
#include "eventforge/metrics.hpp"
#include "eventforge/parallel.hpp"
#include "eventforge/representations.hpp"
#include "eventforge/scene.hpp"
#include "eventforge/scheduler.hpp"
#include "eventforge/simulator.hpp"
#include "eventforge/stream_format.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace eventforge;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_budget = budget_seconds <= 0.0 || seconds < budget_seconds;
  const bool pass = outcome.ok && in_budget;
  if (!pass) ++failures;
  std::printf("%s  %-28s %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", name, outcome.detail.c_str(), seconds,
              in_budget ? "" : ", over time budget");
  std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

LogBrightnessFrame frame_from(int w, int h, const std::vector<double>& values, Timestamp t) {
  LogBrightnessFrame f{Image<double>(w, h), t};
  std::copy(values.begin(), values.end(), f.values.data());
  return f;
}

// 50 random small sensors: step() against the scalar oracle, with the oracle
// given the noise that step() draws from the same generator state.
Outcome simulator_oracle() {
  Rng meta(2024);
  std::size_t events = 0;
  for (int c = 0; c < 50; ++c) {
    const int w = 1 + static_cast<int>(meta() % 8);
    const int h = 1 + static_cast<int>(meta() % 8);
    const int frames = 1 + static_cast<int>(meta() % 100);
    CameraConfig cam;
    cam.geometry = {w, h};
    cam.threshold = std::uniform_real_distribution<double>(0.05, 1.0)(meta);
    const double p = std::uniform_real_distribution<double>(0.0, 0.2)(meta);
    cam.noise_rate_positive = p * w * h * cam.steps_per_second;
    cam.noise_rate_negative = 0.5 * p * w * h * cam.steps_per_second;
    std::normal_distribution<double> drift(0.0, 0.4);
    std::uniform_real_distribution<double> level(0.0, std::log(256.0));
    std::vector<double> L(static_cast<std::size_t>(w * h));
    for (auto& v : L) v = level(meta);
    MemoryFrame memory{Image<double>(w, h)};
    std::copy(L.begin(), L.end(), memory.values.data());
    std::vector<double> oracle_memory = L;
    Rng rng(meta());
    for (int s = 0; s < frames; ++s) {
      for (auto& v : L) v = std::clamp(v + drift(meta), 0.0, std::log(256.0));
      Rng noise_rng = rng;
      std::vector<NoiseHit> hits;
      sample_noise(cam, noise_rng, hits);
      std::vector<std::pair<std::uint32_t, bool>> noise;
      for (const auto& hit : hits) noise.emplace_back(hit.pixel, hit.polarity == Polarity::Positive);
      const Timestamp t = cam.step_timestamp(s);
      auto result = step(memory, frame_from(w, h, L, t), cam, rng);
      const auto expected = oracle::step(w, h, oracle_memory, L, cam.threshold, noise, t);
      if (result.events != expected)
        return {false, fmt("case %d step %d: %zu events vs oracle %zu", c, s, result.events.size(), expected.size())};
      if (!std::equal(oracle_memory.begin(), oracle_memory.end(), result.memory.values.data()))
        return {false, fmt("case %d step %d: memory frame differs", c, s)};
      memory = std::move(result.memory);
      events += expected.size();
    }
  }
  return {true, fmt("50 cases, %zu events identical", events)};
}

Outcome memory_invariant() {
  CameraConfig cam;
  cam.noise_rate_positive = 0.0;
  cam.noise_rate_negative = 0.0;
  Rng rng(7);
  auto scene = random_scene(cam.geometry, 10, rng);
  double worst_ratio = 0.0;
  std::int64_t bad_step = -1;
  const double threshold = cam.threshold;
  SimulateOptions options;
  options.on_step = [&](std::int64_t s, const LogBrightnessFrame& f, const MemoryFrame& m, std::span<const Event>) {
    double worst = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      worst = std::max(worst, std::abs(f.values.data()[i] - m.values.data()[i]));
    worst_ratio = std::max(worst_ratio, worst / threshold);
    if (worst >= threshold && bad_step < 0) bad_step = s;
  };
  const auto result = simulate(scene, cam, 10.0, rng, options);
  if (result.steps != 10'000) return {false, fmt("ran %lld steps", static_cast<long long>(result.steps))};
  if (bad_step >= 0) return {false, fmt("violated at step %lld", static_cast<long long>(bad_step))};
  return {true, fmt("10^4 steps at 240x180, max|L-M|/C = %.9f, %zu events", worst_ratio, result.events.size())};
}

Outcome format_round_trip() {
  std::mt19937_64 rng(11);
  for (int s = 0; s < 1000; ++s) {
    const std::size_t count = s == 0 ? 0 : (s == 1 ? 1 : rng() % 3000);
    const std::int64_t steps = 1 + static_cast<std::int64_t>(rng() % 500);
    const auto stream = testing_helpers::random_grid_stream(rng, count, 240, 180, steps, 1000);
    const auto encoded = encode_events(stream, steps);
    if (encoded.bytes != oracle::encode(stream, steps, 1000)) return {false, fmt("stream %d: bytes differ", s)};
    const auto decoded = decode_events(encoded.bytes);
    if (decoded.events != stream || decoded.steps != steps) return {false, fmt("stream %d: round trip differs", s)};
    if (encode_events(decoded.events, decoded.steps).bytes != encoded.bytes)
      return {false, fmt("stream %d: re-encode differs", s)};
  }
  // Fuzz: random buffers and mutated valid ones through every decoder.
  std::size_t rejected = 0;
  std::size_t accepted = 0;
  const auto valid = encode_events(testing_helpers::random_grid_stream(rng, 40, 240, 180, 10, 1000), 10).bytes;
  const auto valid_meta = encode_metadata(std::vector<PoseVector>(10));
  std::vector<std::uint8_t> buf;
  std::vector<std::uint8_t> meta;
  for (int i = 0; i < 1'000'000; ++i) {
    if (i % 2 == 0) {
      buf.resize(rng() % 96);
      for (auto& b : buf) b = static_cast<std::uint8_t>(rng());
      meta.resize(rng() % 64);
      for (auto& b : meta) b = static_cast<std::uint8_t>(rng());
    } else {
      buf = valid;
      meta = valid_meta;
      for (int k = 0; k < 3; ++k) buf[rng() % buf.size()] = static_cast<std::uint8_t>(rng());
      meta[rng() % meta.size()] = static_cast<std::uint8_t>(rng());
      if (rng() % 4 == 0) buf.resize(rng() % buf.size());
      if (rng() % 4 == 0) meta.resize(rng() % meta.size());
    }
    try {
      decode_events(buf);
      ++accepted;
    } catch (const DataError&) {
      ++rejected;
    }
    try {
      decode_metadata(meta);
    } catch (const DataError&) {
    }
    try {
      const auto ds = EventDataset::from_buffers(buf, meta);
      (void)ds.slice(0, ds.step_count());
    } catch (const DataError&) {
    }
  }
  return {true, fmt("10^3 streams bit-identical; 10^6 fuzz inputs, %zu accepted, %zu rejected, 0 crashes", accepted,
                    rejected)};
}

Outcome metadata_size() {
  std::vector<PoseVector> poses(37);
  const auto bytes = encode_metadata(poses);
  const bool size_ok = bytes.size() == 4 + 37 * 98 && metadata_record_size(12) == 98;
  bool magic_ok = true;
  for (std::size_t f = 0; f < poses.size(); ++f) {
    const std::size_t at = 4 + f * 98 + 96;
    magic_ok = magic_ok && (bytes[at] | (bytes[at + 1] << 8)) == kMetadataMagic;
  }
  return {size_ok && magic_ok, fmt("37 frames -> %zu bytes (4 + 37 x 98), magic at each record end", bytes.size())};
}

Outcome lnes_correctness() {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const int w = 1 + static_cast<int>(rng() % 32);
    const int h = 1 + static_cast<int>(rng() % 24);
    const std::int64_t span = 1 + static_cast<std::int64_t>(rng() % 5000);
    const auto stream = testing_helpers::random_stream(rng, rng() % 300, w, h, span);
    const Timestamp start = static_cast<Timestamp>(rng() % static_cast<std::uint64_t>(span));
    const Duration length = 1 + static_cast<Duration>(rng() % static_cast<std::uint64_t>(span));
    const auto window = window_at(stream, start, length);
    const SensorGeometry g{w, h};
    const auto lnes = build_lnes(window, g);
    if (lnes.data != oracle::lnes(stream, start, length, w, h)) return {false, fmt("window %d differs", i)};
    for (const float v : lnes.data)
      if (!(v >= 0.0f && v < 1.0f)) return {false, fmt("window %d: value %g outside [0, 1)", i, v)};
    const auto eci = build_eci(window, g);
    const auto eoi = build_eoi(window, g);
    const auto eci_s = build_eci_s(window, g);
    for (std::size_t k = 0; k < eci.data.size(); ++k)
      if (eoi.data[k] != (eci.data[k] > 0.0f ? 1.0f : 0.0f)) return {false, fmt("window %d: EOI != (ECI > 0)", i)};
    for (std::size_t k = 0; k < eci_s.plane(); ++k)
      if (eci_s.data[k] != eci.channel(0)[k] + eci.channel(1)[k])
        return {false, fmt("window %d: ECI-S != channel sum", i)};
  }
  return {true, "10^3 windows equal the brute-force scan; EOI and ECI-S identities hold"};
}

// A black/white checkerboard slides monotonically across the sensor; pixels
// are area-sampled along the motion. Intensity images are exp(log-brightness),
// i.e. luma + epsilon, so the estimator sees the simulator's own log scale.
Outcome calibration_round_trip() {
  const int w = 120;
  const int h = 90;
  const double square = 15.0;
  std::string detail;
  bool ok = true;
  for (const double c : {0.2, 0.5, 1.0}) {
    CameraConfig cam;
    cam.geometry = {w, h};
    cam.threshold = c;
    cam.noise_rate_positive = 0.0;
    cam.noise_rate_negative = 0.0;
    double worst = 0.0;
    double estimate_at_worst = 0.0;
    for (const double speed : {0.05, 0.13, 0.4}) {  // pixels per step
      Rng rng(1);
      const int steps = static_cast<int>(std::lround(4.0 * square / speed));
      MemoryFrame memory;
      CalibrationInput input;
      input.epsilon = 1.0;
      std::vector<Event> events;
      for (int s = 0; s < steps; ++s) {
        const double offset = speed * s;
        RgbImage rgb(w, h);
        for (int y = 0; y < h; ++y) {
          const bool row_phase = static_cast<int>(std::floor(y / square)) % 2 == 1;
          for (int x = 0; x < w; ++x) {
            // Fraction of [x, x+1) that is white, with the board shifted by offset.
            double white = 0.0;
            double a = x - offset;
            const double b = a + 1.0;
            while (a < b - 1e-12) {
              const double cell = std::floor(a / square);
              const double edge = std::min(b, (cell + 1.0) * square);
              const bool is_white = ((static_cast<long long>(cell) % 2 + 2) % 2 == 1) != row_phase;
              if (is_white) white += edge - a;
              a = edge;
            }
            rgb(x, y) = Rgb::Constant(255.0 * std::min(white, 1.0));
          }
        }
        auto frame = to_log_brightness(rgb, cam.epsilon, cam.step_timestamp(s));
        if (s == 0) memory.values = frame.values;
        auto result = step(memory, frame, cam, rng);
        memory = std::move(result.memory);
        events.insert(events.end(), result.events.begin(), result.events.end());
        if (s % 10 == 0 || s == steps - 1) {
          IntensityFrame intensity{Image<double>(w, h), frame.timestamp};
          for (std::size_t i = 0; i < frame.values.size(); ++i)
            intensity.intensity.data()[i] = std::exp(frame.values.data()[i]);
          input.frames.push_back(std::move(intensity));
        }
      }
      input.events = events;
      const auto est = estimate_threshold(input);
      const double rel = std::abs(est.raw - c) / c;
      if (rel >= worst) {
        worst = rel;
        estimate_at_worst = est.raw;
      }
    }
    const bool pass = worst < 0.05;
    ok = ok && pass;
    detail += fmt("%sC=%.1f: worst est %.4f (%.1f%%%s)", detail.empty() ? "" : "; ", c, estimate_at_worst,
                  100.0 * worst, pass ? "" : " > 5%");
  }
  return {ok, detail};
}

Outcome kalman_properties() {
  const auto q = white_noise_cov(0.1, 1.0);
  for (int b = 0; b < kPoseDim; ++b) {
    if (q(2 * b, 2 * b) != 0.025 || q(2 * b, 2 * b + 1) != 0.05 || q(2 * b + 1, 2 * b) != 0.05 ||
        q(2 * b + 1, 2 * b + 1) != 0.1)
      return {false, fmt("block %d differs", b)};
  }
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.01, 5.0);
  KalmanState state = KalmanState::from_observation(PoseVector{});
  double worst_asym = 0.0;
  double worst_eig = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100'000; ++i) {
    const FilterSettings settings{u(rng), u(rng), 1.0};
    PoseVector obs;
    for (auto& v : obs.values) v = 3.0 * n(rng);
    state = update(predict(state, settings), obs, settings).state;
    const auto& P = state.covariance;
    worst_asym = std::max(worst_asym, (P - P.transpose()).cwiseAbs().maxCoeff());
    if (i % 10 == 0 || i == 99'999) {
      Eigen::SelfAdjointEigenSolver<StateMatrix> es(P, Eigen::EigenvaluesOnly);
      worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
    }
  }
  if (worst_asym > 1e-9 || worst_eig < -1e-9)
    return {false, fmt("asymmetry %.3g, min eigenvalue %.3g", worst_asym, worst_eig)};

  // Noisy constant-velocity trajectory.
  PoseFilter filter(FilterSettings::slow());
  std::normal_distribution<double> noise(0.0, 0.5);
  std::array<double, 12> velocity{};
  for (auto& v : velocity) v = 0.02 * n(rng);
  double raw_sq = 0.0;
  double filtered_sq = 0.0;
  std::size_t count = 0;
  for (int t = 0; t < 1100; ++t) {
    PoseVector truth;
    PoseVector obs;
    for (int k = 0; k < 12; ++k) {
      truth.values[k] = velocity[k] * t;
      obs.values[k] = truth.values[k] + noise(rng);
    }
    const auto out = filter.filter(obs);
    if (t < 100) continue;
    for (int k = 0; k < 12; ++k) {
      raw_sq += std::pow(obs.values[k] - truth.values[k], 2);
      filtered_sq += std::pow(out.values[k] - truth.values[k], 2);
      ++count;
    }
  }
  const double raw = std::sqrt(raw_sq / count);
  const double filtered = std::sqrt(filtered_sq / count);
  return {filtered < raw, fmt("blocks exact; 10^5 cycles asym %.2g min eig %.2g; RMSE %.4f -> %.4f", worst_asym,
                              worst_eig, raw, filtered)};
}

WindowImage lnes_with_information(double information) {
  WindowImage img;
  img.kind = RepresentationKind::LNES;
  img.channels = 2;
  img.width = 240;
  img.height = 180;
  img.data.assign(img.plane() * 2, 0.0f);
  const auto halves = static_cast<std::size_t>(information / 0.5);
  for (std::size_t i = 0; i < halves; ++i) img.data[i] = 0.5f;
  img.data[halves] = static_cast<float>(information - 0.5 * static_cast<double>(halves));
  return img;
}

Outcome scheduler_thresholds() {
  const auto busy = lnes_with_information(1000.0);
  SlowMotionScheduler a;
  const bool defer9 = a.schedule(9, busy) == ScheduleAction::Defer;
  SlowMotionScheduler b;
  const bool go10 = b.schedule(10, busy) == ScheduleAction::EmitNewPrediction;

  SlowMotionScheduler c;
  bool repeat = true;
  for (int i = 0; i < 16; ++i) repeat = c.schedule(10, lnes_with_information(299.0)) == ScheduleAction::RepeatLast;
  SlowMotionScheduler d;
  bool emit = true;
  for (int i = 0; i < 16; ++i) emit = d.schedule(10, lnes_with_information(300.0)) == ScheduleAction::EmitNewPrediction;

  const bool flip = mode_for_residual(0.7) == FilterMode::Fast &&
                    mode_for_residual(std::nextafter(0.7, 0.0)) == FilterMode::Slow &&
                    SchedulerThresholds{}.fast_residual == 0.7 && SchedulerThresholds{}.history == 16;
  return {defer9 && go10 && repeat && emit && flip,
          fmt("defer@9 %s, go@10 %s, repeat@avg299 %s, emit@avg300 %s, flip@0.7 %s", defer9 ? "ok" : "NO",
              go10 ? "ok" : "NO", repeat ? "ok" : "NO", emit ? "ok" : "NO", flip ? "ok" : "NO")};
}

Outcome metrics_properties() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-80.0, 80.0);
  const auto t = linear_thresholds(100.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Keypoints3d> pred(10);
    std::vector<Keypoints3d> gt(10);
    for (std::size_t f = 0; f < 10; ++f)
      for (int k = 0; k < 21; ++k) {
        gt[f].points[k] = Eigen::Vector3d(u(rng), u(rng), u(rng));
        pred[f].points[k] = gt[f].points[k] + Eigen::Vector3d(u(rng), u(rng), u(rng)) * 0.5;
      }
    auto shifted = pred;
    const Eigen::Vector3d offset(u(rng), u(rng), u(rng));
    for (auto& f : shifted)
      for (auto& p : f.points) p += offset;
    const auto base = pck3d(pred, gt, t);
    if (pck3d(shifted, gt, t).values != base.values) return {false, fmt("trial %d: translation changed PCK", trial)};
    if (!std::is_sorted(base.values.begin(), base.values.end()))
      return {false, fmt("trial %d: curve decreases", trial)};
    std::vector<Keypoints2d> pred2(10);
    std::vector<Keypoints2d> gt2(10);
    for (std::size_t f = 0; f < 10; ++f)
      for (int k = 0; k < 21; ++k) {
        gt2[f].points[k] = gt[f].points[k].head<2>();
        pred2[f].points[k] = pred[f].points[k].head<2>();
      }
    const auto c2 = pck2d_palm(pred2, gt2, linear_thresholds(1.0));
    if (!std::is_sorted(c2.values.begin(), c2.values.end()))
      return {false, fmt("trial %d: 2D curve decreases", trial)};
  }
  PckCurve ramp{t, {}};
  for (const double x : t) ramp.values.push_back(x / 100.0);
  const double area = auc(ramp);
  return {std::abs(area - 0.5) <= 1e-9,
          fmt("translation invariant, non-decreasing over 200 trials; ramp AUC = %.12f", area)};
}

Outcome throughput() {
  const bool parallel = max_threads() > 1;
  const auto dir = std::filesystem::temp_directory_path() / "eventforge-acceptance";
  std::filesystem::create_directories(dir);
  const auto loader = benchmark_loader(dir, 20'000'000);
  std::filesystem::remove_all(dir);
  const auto sim = benchmark_simulator(2000, parallel);
  const auto lnes = benchmark_lnes(1.2, parallel);
  const bool ok = loader.events_per_second >= 5e7 && sim.frames_per_second >= 2000.0 &&
                  lnes.windows_per_second >= 1000.0;
  return {ok, fmt("%d thread(s): loader %.3g ev/s (ref %.3g), simulator %.0f fps, LNES %.0f windows/s", max_threads(),
                  loader.events_per_second, kReferenceLoaderEventsPerSecond, sim.frames_per_second,
                  lnes.windows_per_second)};
}

}  // namespace

int main() {
  apply_thread_env();
  criterion("simulator-oracle", 10.0, simulator_oracle);
  criterion("memory-frame-invariant", 30.0, memory_invariant);
  criterion("format-round-trip", 60.0, format_round_trip);
  criterion("metadata-record-size", 0.0, metadata_size);
  criterion("lnes-correctness", 10.0, lnes_correctness);
  criterion("calibration-round-trip", 60.0, calibration_round_trip);
  criterion("kalman-properties", 60.0, kalman_properties);
  criterion("scheduler-thresholds", 0.0, scheduler_thresholds);
  criterion("metrics", 0.0, metrics_properties);
  criterion("throughput", 0.0, throughput);
  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
