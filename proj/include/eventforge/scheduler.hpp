#pragma once

#include <cstddef>
#include <deque>

#include "eventforge/kalman.hpp"
#include "eventforge/representations.hpp"

namespace eventforge {

enum class ScheduleAction { EmitNewPrediction, RepeatLast, Defer };
enum class FilterMode { Slow, Fast };

struct SchedulerThresholds {
  /// Defer new windows until at least this many events arrived.
  std::size_t min_new_events = 10;
  /// Length of the information history.
  std::size_t history = 16;
  /// Average information below this means the hand is stationary.
  double stationary_information = 300.0;
  /// Probe residual at or above this switches the main filter to fast.
  double fast_residual = 0.7;
  /// Probe residuals averaged over this many updates (1 = per update).
  std::size_t residual_window = 1;
};

/// Sum of all LNES values over both channels. Throws std::invalid_argument for
/// other representation kinds.
double lnes_information(const WindowImage& image);

constexpr FilterMode mode_for_residual(double residual, double threshold = 0.7) noexcept {
  return residual >= threshold ? FilterMode::Fast : FilterMode::Slow;
}

constexpr FilterSettings settings_for(FilterMode mode) noexcept {
  return mode == FilterMode::Fast ? FilterSettings{3.0, 1.0, 1.0} : FilterSettings{0.1, 5.0, 1.0};
}

/// Decides when to build a new window and predict, and which filter setting
/// the main filter runs, for slow and stationary hands.
class SlowMotionScheduler {
 public:
  explicit SlowMotionScheduler(SchedulerThresholds thresholds = {});

  /// `new_events` counts events that arrived since the previous call. Defers
  /// while fewer than min_new_events accumulated since the last window. When
  /// not deferring, the accumulated count resets, the window's information is
  /// pushed into the history, and RepeatLast is returned if the history
  /// average is below the stationary threshold.
  ScheduleAction schedule(std::size_t new_events, const WindowImage& latest_lnes);

  /// Runs the slow-setting probe filter on a raw prediction and switches the
  /// main filter's settings to match the probe residual.
  FilterMode observe(const PoseVector& raw_prediction, PoseFilter& main_filter);

  std::size_t pending_events() const noexcept { return pending_; }
  FilterMode mode() const noexcept { return mode_; }
  double average_information() const noexcept;
  double probe_residual() const noexcept;
  const SchedulerThresholds& thresholds() const noexcept { return thresholds_; }

 private:
  SchedulerThresholds thresholds_;
  std::size_t pending_ = 0;
  std::deque<double> information_;
  std::deque<double> residuals_;
  PoseFilter probe_{FilterSettings::slow()};
  FilterMode mode_ = FilterMode::Slow;
};

}  // namespace eventforge
