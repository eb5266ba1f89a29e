#include "eventforge/metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "eventforge/error.hpp"

namespace eventforge {

std::vector<double> linear_thresholds(double max, int count) {
  if (count < 1) throw std::invalid_argument("need at least one threshold step");
  std::vector<double> t(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i <= count; ++i) t[static_cast<std::size_t>(i)] = max * i / count;
  return t;
}

namespace {

void check_thresholds(std::span<const double> thresholds) {
  if (thresholds.empty()) throw std::invalid_argument("no thresholds");
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw std::invalid_argument("thresholds must be sorted");
  }
}

/// errors[f][k]: error of keypoint k in frame f, in threshold units.
PckCurve curve_from_errors(const std::vector<std::array<double, kKeypointCount>>& errors,
                           std::span<const double> thresholds, PckAveraging averaging) {
  PckCurve curve;
  curve.thresholds.assign(thresholds.begin(), thresholds.end());
  curve.values.assign(thresholds.size(), 0.0);
  if (errors.empty()) return curve;
  const double frames = static_cast<double>(errors.size());
  for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
    const double tau = thresholds[ti];
    std::size_t correct_total = 0;
    double fraction_sum = 0.0;
    for (const auto& frame : errors) {
      const auto correct =
          static_cast<std::size_t>(std::count_if(frame.begin(), frame.end(), [tau](double e) { return e <= tau; }));
      correct_total += correct;
      fraction_sum += static_cast<double>(correct) / kKeypointCount;
    }
    curve.values[ti] = averaging == PckAveraging::Pooled
                           ? static_cast<double>(correct_total) / (frames * kKeypointCount)
                           : fraction_sum / frames;
  }
  return curve;
}

template <int Dim>
void check_lengths(std::span<const KeypointSet<Dim>> pred, std::span<const KeypointSet<Dim>> gt) {
  if (pred.size() != gt.size()) {
    throw DataError("prediction has " + std::to_string(pred.size()) + " frames but ground truth has " +
                    std::to_string(gt.size()));
  }
}

}  // namespace

PckCurve pck3d(std::span<const Keypoints3d> pred, std::span<const Keypoints3d> gt,
               std::span<const double> thresholds, PckAveraging averaging) {
  check_lengths(pred, gt);
  check_thresholds(thresholds);
  std::vector<std::array<double, kKeypointCount>> errors(pred.size());
  for (std::size_t f = 0; f < pred.size(); ++f) {
    const auto& p_root = pred[f].points[kWristIndex];
    const auto& g_root = gt[f].points[kWristIndex];
    for (int k = 0; k < kKeypointCount; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      errors[f][idx] = ((pred[f].points[idx] - p_root) - (gt[f].points[idx] - g_root)).norm();
    }
  }
  return curve_from_errors(errors, thresholds, averaging);
}

PckCurve pck2d_palm(std::span<const Keypoints2d> pred, std::span<const Keypoints2d> gt,
                    std::span<const double> thresholds, PckAveraging averaging) {
  check_lengths(pred, gt);
  check_thresholds(thresholds);
  if (gt.empty()) throw DataError("palm length is undefined for an empty sequence");
  double palm = 0.0;
  for (const auto& frame : gt) palm += (frame.points[kWristIndex] - frame.points[kMiddleMcpIndex]).norm();
  palm /= static_cast<double>(gt.size());
  if (!(palm > 0.0)) throw DataError("mean palm length is zero");
  std::vector<std::array<double, kKeypointCount>> errors(pred.size());
  for (std::size_t f = 0; f < pred.size(); ++f) {
    for (std::size_t k = 0; k < static_cast<std::size_t>(kKeypointCount); ++k) {
      errors[f][k] = (pred[f].points[k] - gt[f].points[k]).norm() / palm;
    }
  }
  return curve_from_errors(errors, thresholds, averaging);
}

double auc(const PckCurve& curve) {
  const auto& t = curve.thresholds;
  if (t.size() < 2 || curve.values.size() != t.size()) {
    throw std::invalid_argument("AUC needs at least two thresholds with one value each");
  }
  if (!std::is_sorted(t.begin(), t.end())) throw std::invalid_argument("thresholds must be sorted");
  const double range = t.back() - t.front();
  if (!(range > 0.0)) throw std::invalid_argument("threshold range must be positive");
  double area = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    area += 0.5 * (curve.values[i] + curve.values[i - 1]) * (t[i] - t[i - 1]);
  }
  return area / range;
}

}  // namespace eventforge
