#include "eventforge/scheduler.hpp"

#include <numeric>
#include <stdexcept>

namespace eventforge {

double lnes_information(const WindowImage& image) {
  if (image.kind != RepresentationKind::LNES) {
    throw std::invalid_argument("event information is defined on LNES windows only");
  }
  double sum = 0.0;
  for (float v : image.data) sum += v;
  return sum;
}

SlowMotionScheduler::SlowMotionScheduler(SchedulerThresholds thresholds) : thresholds_(thresholds) {
  if (thresholds_.history < 1) throw std::invalid_argument("information history must hold >= 1 window");
  if (thresholds_.residual_window < 1) throw std::invalid_argument("residual window must be >= 1");
}

ScheduleAction SlowMotionScheduler::schedule(std::size_t new_events, const WindowImage& latest_lnes) {
  pending_ += new_events;
  if (pending_ < thresholds_.min_new_events) return ScheduleAction::Defer;
  pending_ = 0;
  information_.push_back(lnes_information(latest_lnes));
  if (information_.size() > thresholds_.history) information_.pop_front();
  return average_information() < thresholds_.stationary_information ? ScheduleAction::RepeatLast
                                                                    : ScheduleAction::EmitNewPrediction;
}

double SlowMotionScheduler::average_information() const noexcept {
  if (information_.empty()) return 0.0;
  return std::accumulate(information_.begin(), information_.end(), 0.0) /
         static_cast<double>(information_.size());
}

double SlowMotionScheduler::probe_residual() const noexcept {
  if (residuals_.empty()) return 0.0;
  return std::accumulate(residuals_.begin(), residuals_.end(), 0.0) / static_cast<double>(residuals_.size());
}

FilterMode SlowMotionScheduler::observe(const PoseVector& raw_prediction, PoseFilter& main_filter) {
  const bool first = !probe_.state().has_value();
  probe_.filter(raw_prediction);
  if (!first) {
    residuals_.push_back(probe_.last_residual());
    if (residuals_.size() > thresholds_.residual_window) residuals_.pop_front();
  }
  mode_ = mode_for_residual(probe_residual(), thresholds_.fast_residual);
  main_filter.set_settings(settings_for(mode_));
  return mode_;
}

}  // namespace eventforge
