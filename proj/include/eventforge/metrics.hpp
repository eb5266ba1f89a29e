#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace eventforge {

inline constexpr int kKeypointCount = 21;
inline constexpr int kWristIndex = 0;
inline constexpr int kMiddleMcpIndex = 9;

template <int Dim>
struct KeypointSet {
  using Point = Eigen::Matrix<double, Dim, 1>;
  std::array<Point, kKeypointCount> points;
};

using Keypoints2d = KeypointSet<2>;
using Keypoints3d = KeypointSet<3>;

struct PckCurve {
  std::vector<double> thresholds;
  std::vector<double> values;
};

enum class PckAveraging {
  /// Fraction over all (frame, keypoint) pairs.
  Pooled,
  /// Per-frame fraction, then mean over frames.
  PerFrame,
};

/// 0, max/count, ..., max (count + 1 values).
std::vector<double> linear_thresholds(double max, int count = 100);

/// Root-aligned 3D PCK: both sets are translated so the wrist sits at the
/// origin; a keypoint is correct when its error is <= threshold (mm).
PckCurve pck3d(std::span<const Keypoints3d> pred, std::span<const Keypoints3d> gt,
               std::span<const double> thresholds, PckAveraging averaging = PckAveraging::Pooled);

/// 2D PCK with errors divided by the sequence's mean ground-truth palm length
/// (wrist to middle MCP). Thresholds are fractions of the palm length.
/// Throws DataError for a zero palm length.
PckCurve pck2d_palm(std::span<const Keypoints2d> pred, std::span<const Keypoints2d> gt,
                    std::span<const double> thresholds, PckAveraging averaging = PckAveraging::Pooled);

/// Trapezoidal area under the curve divided by the threshold range.
/// Throws std::invalid_argument for < 2 thresholds or unsorted thresholds.
double auc(const PckCurve& curve);

}  // namespace eventforge
