#pragma once

#include <vector>

#include "eventforge/event.hpp"
#include "eventforge/image.hpp"
#include "eventforge/pose.hpp"
#include "eventforge/simulator.hpp"

namespace eventforge {

/// Two directional lights plus ambient. Colours are linear RGB in [0, 1].
struct LightingConfig {
  Vec3 l1 = Vec3(0.0, 0.0, 1.0);
  Vec3 l2 = Vec3(0.0, 0.0, 1.0);
  Rgb c1 = Rgb(0.5, 0.5, 0.5);
  Rgb c2 = Rgb(0.0, 0.0, 0.0);
  Rgb ambient = Rgb(0.15, 0.15, 0.15);

  /// Throws std::invalid_argument unless both directions are unit within 1e-6.
  void validate() const;
};

/// Lambertian shading with two lights: (max(<n,l1>,0) c1 + max(<n,l2>,0) c2 + ambient) * albedo,
/// each component clamped to [0, 1]. Throws std::invalid_argument for a non-unit normal.
Rgb shade(const Vec3& normal, const Rgb& albedo, const LightingConfig& lighting);

/// Keyposes one simulated second apart, joined by quadratic Bezier segments.
struct BezierTrajectory {
  std::vector<PoseVector> keyposes;
  /// Middle control point of segment k (keypose k -> k+1).
  std::vector<PoseVector> midpoints;

  double span_seconds() const noexcept {
    return keyposes.empty() ? 0.0 : static_cast<double>(keyposes.size() - 1);
  }
  void validate() const;
};

/// (1-s)^2 P0 + 2(1-s)s Pm + s^2 P1 for the segment containing `time`.
/// time == span evaluates the last segment at s = 1. Throws std::out_of_range
/// outside [0, span].
PoseVector bezier_pose(const BezierTrajectory& trajectory, double time_seconds);

enum class PrimitiveShape { Sphere, Disk };

/// Textured stand-in for the hand. Its centre follows the pose translation,
/// its texture rotates with the pose rotation and the articulation
/// coefficients shift the texture phase.
struct Primitive {
  PrimitiveShape shape = PrimitiveShape::Sphere;
  /// Radius in pixels at zero depth offset.
  double radius_px = 30.0;
  Rgb albedo_a = Rgb(0.9, 0.7, 0.6);
  Rgb albedo_b = Rgb(0.3, 0.2, 0.2);
  /// Checker frequency in cycles per unit radius.
  double texture_frequency = 2.0;
  /// Pixels per metre of translation.
  double pixels_per_meter = 240.0;
};

struct SceneConfig {
  Primitive primitive;
  /// Linear RGB in [0, 1]; at least as large as the sensor.
  RgbImage background;
  int crop_x = 0;
  int crop_y = 0;
  BezierTrajectory trajectory;
  LightingConfig lighting;
  /// Simulated seconds between rerandomisations.
  double rerandomize_period = 50.0;

  /// Throws std::invalid_argument when the background crop does not cover the
  /// sensor or any sub-config is invalid.
  void validate(const SensorGeometry& geometry) const;
};

/// Renders a scene to log-brightness. The background's log-brightness is
/// computed once; each frame copies it and redraws only the primitive's
/// bounding box.
class SceneRenderer {
 public:
  SceneRenderer(const SceneConfig& scene, const CameraConfig& camera);

  /// Fast path.
  void render_log(const PoseVector& pose, Timestamp timestamp, LogBrightnessFrame& out) const;
  /// Reference path: forms the full [0, 255] RGB image. to_log_brightness of
  /// this image equals render_log bit for bit.
  RgbImage render_rgb(const PoseVector& pose) const;

 private:
  struct Placement {
    double cx, cy, radius;
    Eigen::Matrix3d world_to_object;
    double phase[3];
  };
  Placement place(const PoseVector& pose) const;
  /// Linear colour of the primitive at pixel (x, y); false if the pixel is outside it.
  bool primitive_color(const Placement& placement, int x, int y, Rgb& color) const;

  const SceneConfig* scene_;
  SensorGeometry geometry_;
  double epsilon_;
  Image<double> background_log_;
};

/// Pose with articulation U[-2,2], translation x,y U[-0.3,0.3], z U[-0.09,0.09],
/// rotation U[-pi/4, pi/4] per component.
PoseVector random_pose(Rng& rng);
BezierTrajectory random_trajectory(int seconds, Rng& rng);
LightingConfig random_lighting(Rng& rng);
RgbImage random_background(int width, int height, Rng& rng);
Primitive random_primitive(Rng& rng);
/// Full random scene covering `seconds` of motion.
SceneConfig random_scene(const SensorGeometry& geometry, int seconds, Rng& rng);
/// Redraws everything except the trajectory, and draws a new threshold from N(0.5, 0.02^2).
void rerandomize(SceneConfig& scene, CameraConfig& camera, Rng& rng);

}  // namespace eventforge
