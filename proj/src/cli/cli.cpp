#include "cli/cli.hpp"

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "eventforge/error.hpp"
#include "eventforge/parallel.hpp"

namespace eventforge::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  apply_thread_env();

  CLI::App app{"eventforge: event-camera simulation, stream format, window representations, filtering, "
               "calibration and evaluation",
                 "eventforge"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate an event stream and pose metadata");
  simulate->add_option("--config", sim.config, "YAML config file");
  simulate->add_option("--duration", sim.duration, "Simulated seconds (overrides config)");
  simulate->add_option("--seed", sim.seed, "RNG seed (overrides config)");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory");
  simulate->add_option("--events-name", sim.events_name, "Event stream file name");
  simulate->add_option("--poses-name", sim.poses_name, "Metadata file name");
  simulate->add_option("--csv", sim.csv, "Also write the events as CSV ('-' for stdout)");

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "CSV events -> binary event stream");
  encode->add_option("-i,--input", enc.input, "CSV input ('-' for stdin)");
  encode->add_option("-o,--output", enc.output, "Binary output ('-' for stdout)");
  encode->add_option("--step-us", enc.step_us, "Step duration in microseconds")->check(CLI::PositiveNumber);
  encode->add_option("--steps", enc.steps, "Minimum number of steps")->check(CLI::NonNegativeNumber);

  DecodeArgs dec;
  auto* decode = app.add_subcommand("decode", "Binary event stream -> CSV events");
  decode->add_option("-i,--input", dec.input, "Binary input ('-' for stdin)");
  decode->add_option("-o,--output", dec.output, "CSV output ('-' for stdout)");
  decode->add_option("--step-us", dec.step_us, "Step duration in microseconds")->check(CLI::PositiveNumber);

  InfoArgs inf;
  auto* info = app.add_subcommand("info", "Summarise an event stream (and metadata)");
  info->add_option("input", inf.input, "Event stream file")->required();
  info->add_option("--metadata", inf.metadata, "Metadata stream file");
  info->add_option("--step-us", inf.step_us, "Step duration in microseconds")->check(CLI::PositiveNumber);

  WindowsArgs win;
  auto* windows = app.add_subcommand("windows", "Build window representations from an event stream");
  windows->add_option("-i,--input", win.input, "Binary event stream ('-' for stdin)");
  windows->add_option("-o,--output", win.output, "EVRW record output ('-' for stdout)");
  windows->add_option("--repr", win.repr, "lnes | eoi | eci | eci-s");
  windows->add_option("--length-ms", win.length_ms, "Window length in ms")->check(CLI::PositiveNumber);
  windows->add_option("--stride-ms", win.stride_ms, "Window stride in ms")->check(CLI::PositiveNumber);
  windows->add_option("--width", win.width, "Sensor width")->check(CLI::PositiveNumber);
  windows->add_option("--height", win.height, "Sensor height")->check(CLI::PositiveNumber);
  windows->add_option("--step-us", win.step_us, "Step duration in microseconds")->check(CLI::PositiveNumber);
  windows->add_option("--png-dir", win.png_dir, "Also write PNG visualisations here");
  windows->add_option("--png-limit", win.png_limit, "Write at most this many PNGs (0 = all)");
  windows->add_flag("--parallel", win.parallel, "Build windows with the OpenMP batch builder");

  FilterArgs fil;
  auto* filter = app.add_subcommand("filter", "Kalman-filter raw pose predictions");
  filter->add_option("-i,--input", fil.input, "Metadata file of raw predictions")->required();
  filter->add_option("-o,--output", fil.output, "Metadata file of filtered poses")->required();
  filter->add_option("--mode", fil.mode, "slow | fast | auto")->check(CLI::IsMember({"slow", "fast", "auto"}));
  filter->add_option("--sigma2", fil.sigma2, "Process noise variance (slow/fast modes)");
  filter->add_option("--obs-noise", fil.obs_noise, "Observation noise (slow/fast modes)");
  filter->add_option("--probe-window", fil.probe_window, "Average probe residuals over N updates (auto)")
      ->check(CLI::PositiveNumber);
  filter->add_option("--fast-residual", fil.fast_residual, "Probe residual that selects the fast setting");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Estimate the event threshold or noise rates");
  calibrate->add_option("--events", cal.events, "Binary event stream")->required();
  calibrate->add_option("--frames", cal.frames, "Frame manifest: lines '<us> <pgm file>'");
  calibrate->add_option("--epsilon", cal.epsilon, "Intensity clamp before the log");
  calibrate->add_option("--noise-positive", cal.noise_positive, "Known positive noise rate (events/s)");
  calibrate->add_option("--noise-negative", cal.noise_negative, "Known negative noise rate (events/s)");
  calibrate->add_flag("--static", cal.static_scene, "Estimate noise rates from a static-scene recording");
  calibrate->add_option("--step-us", cal.step_us, "Step duration in microseconds")->check(CLI::PositiveNumber);

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "PCK curve and AUC of predicted keypoints");
  eval->add_option("--pred", ev.pred, "Predicted keypoints CSV (frame,joint,coords...)")->required();
  eval->add_option("--gt", ev.gt, "Ground-truth keypoints CSV")->required();
  eval->add_option("--max-threshold", ev.max_threshold, "Largest threshold (default 100 mm or 1.0 palm)");
  eval->add_option("--steps", ev.steps, "Threshold intervals")->check(CLI::PositiveNumber);
  eval->add_flag("--per-frame", ev.per_frame, "Average PCK per frame instead of pooling keypoints");
  eval->add_option("-o,--output", ev.output, "Curve CSV output");
  eval->add_option("--png", ev.png, "Curve plot PNG");

  BenchArgs ben;
  auto* bench = app.add_subcommand("bench", "Loader, simulator and window builder throughput");
  bench->add_option("--events", ben.events, "Events in the synthetic loader recording");
  bench->add_option("--frames", ben.frames, "Simulator frames to time");
  bench->add_option("--lnes-seconds", ben.lnes_seconds, "Stream length for the LNES builder");
  bench->add_option("--dir", ben.dir, "Scratch directory (default: system temp)");
  bench->add_flag("--parallel", ben.parallel, "Use the OpenMP kernels");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out, err);
    if (encode->parsed()) return cmd_encode(enc, out, err);
    if (decode->parsed()) return cmd_decode(dec, out, err);
    if (info->parsed()) return cmd_info(inf, out, err);
    if (windows->parsed()) return cmd_windows(win, out, err);
    if (filter->parsed()) return cmd_filter(fil, out, err);
    if (calibrate->parsed()) return cmd_calibrate(cal, out, err);
    if (eval->parsed()) return cmd_eval(ev, out, err);
    if (bench->parsed()) return cmd_bench(ben, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace eventforge::cli
