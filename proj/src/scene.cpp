#include "eventforge/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>

namespace eventforge {

namespace {

constexpr double kUnitTolerance = 1e-6;
/// Depth at which the primitive has its nominal radius, metres.
constexpr double kReferenceDepth = 0.5;

void check_unit(const Vec3& v, const char* name) {
  if (std::abs(v.norm() - 1.0) > kUnitTolerance) {
    throw std::invalid_argument(std::string(name) + " must be a unit vector (norm " +
                                std::to_string(v.norm()) + ")");
  }
}

Rgb shade_unchecked(const Vec3& n, const Rgb& albedo, const LightingConfig& lighting) {
  const Rgb light = std::max(n.dot(lighting.l1), 0.0) * lighting.c1 +
                    std::max(n.dot(lighting.l2), 0.0) * lighting.c2 + lighting.ambient;
  return (light * albedo).max(0.0).min(1.0);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec3 random_direction(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(normal(rng), normal(rng), normal(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

Rgb random_color(Rng& rng, double lo, double hi) {
  return Rgb(uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi));
}

}  // namespace

void LightingConfig::validate() const {
  check_unit(l1, "light direction l1");
  check_unit(l2, "light direction l2");
}

Rgb shade(const Vec3& normal, const Rgb& albedo, const LightingConfig& lighting) {
  check_unit(normal, "surface normal");
  return shade_unchecked(normal, albedo, lighting);
}

void BezierTrajectory::validate() const {
  if (keyposes.size() < 2) throw std::invalid_argument("trajectory needs at least two keyposes");
  if (midpoints.size() + 1 != keyposes.size()) {
    throw std::invalid_argument("trajectory needs exactly one midpoint per segment");
  }
}

PoseVector bezier_pose(const BezierTrajectory& trajectory, double time_seconds) {
  trajectory.validate();
  const double span = trajectory.span_seconds();
  if (!(time_seconds >= 0.0 && time_seconds <= span)) {
    throw std::out_of_range("time " + std::to_string(time_seconds) + " s is outside the trajectory span [0, " +
                            std::to_string(span) + "] s");
  }
  auto segment = static_cast<std::size_t>(std::floor(time_seconds));
  double s = time_seconds - std::floor(time_seconds);
  if (segment + 1 >= trajectory.keyposes.size()) {
    segment = trajectory.keyposes.size() - 2;
    s = 1.0;
  }
  const PoseVector& p0 = trajectory.keyposes[segment];
  const PoseVector& pm = trajectory.midpoints[segment];
  const PoseVector& p1 = trajectory.keyposes[segment + 1];
  const double w0 = (1.0 - s) * (1.0 - s);
  const double wm = 2.0 * (1.0 - s) * s;
  const double w1 = s * s;
  PoseVector out;
  for (std::size_t i = 0; i < PoseVector::kSize; ++i) out[i] = w0 * p0[i] + wm * pm[i] + w1 * p1[i];
  return out;
}

void SceneConfig::validate(const SensorGeometry& geometry) const {
  geometry.validate();
  lighting.validate();
  trajectory.validate();
  if (crop_x < 0 || crop_y < 0 || background.width() < crop_x + geometry.width ||
      background.height() < crop_y + geometry.height) {
    throw std::invalid_argument("background " + std::to_string(background.width()) + "x" +
                                std::to_string(background.height()) + " with crop (" + std::to_string(crop_x) +
                                ", " + std::to_string(crop_y) + ") does not cover the " +
                                std::to_string(geometry.width) + "x" + std::to_string(geometry.height) +
                                " sensor");
  }
  if (!(primitive.radius_px > 0.0)) throw std::invalid_argument("primitive radius must be > 0");
  if (!(rerandomize_period > 0.0)) throw std::invalid_argument("rerandomize period must be > 0");
}

SceneRenderer::SceneRenderer(const SceneConfig& scene, const CameraConfig& camera)
    : scene_(&scene), geometry_(camera.geometry), epsilon_(camera.epsilon),
      background_log_(camera.geometry.width, camera.geometry.height) {
  scene.validate(geometry_);
  for (int y = 0; y < geometry_.height; ++y) {
    for (int x = 0; x < geometry_.width; ++x) {
      const Rgb f = scene.background(x + scene.crop_x, y + scene.crop_y) * 255.0;
      background_log_(x, y) = log_luma(f, epsilon_);
    }
  }
}

SceneRenderer::Placement SceneRenderer::place(const PoseVector& pose) const {
  const auto t = pose.translation();
  const auto r = pose.rotation();
  const auto a = pose.alpha();
  const Primitive& prim = scene_->primitive;
  const double scale = 1.0 / (1.0 + t[2] / kReferenceDepth);
  Placement p;
  p.cx = 0.5 * geometry_.width + t[0] * prim.pixels_per_meter * scale;
  p.cy = 0.5 * geometry_.height - t[1] * prim.pixels_per_meter * scale;
  p.radius = prim.radius_px * scale;
  const Vec3 axis_angle(r[0], r[1], r[2]);
  const double angle = axis_angle.norm();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  if (angle > 1e-12) rotation = Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix();
  p.world_to_object = rotation.transpose();
  for (int i = 0; i < 3; ++i) p.phase[i] = 0.5 * a[static_cast<std::size_t>(i)] + 0.25 * a[static_cast<std::size_t>(i + 3)];
  return p;
}

bool SceneRenderer::primitive_color(const Placement& placement, int x, int y, Rgb& color) const {
  const Primitive& prim = scene_->primitive;
  const double dx = (x + 0.5 - placement.cx) / placement.radius;
  const double dy = (y + 0.5 - placement.cy) / placement.radius;
  const double r2 = dx * dx + dy * dy;
  if (r2 > 1.0) return false;
  Vec3 normal;
  Vec3 surface;
  if (prim.shape == PrimitiveShape::Sphere) {
    normal = Vec3(dx, -dy, std::sqrt(std::max(0.0, 1.0 - r2))).normalized();
    surface = placement.world_to_object * normal;
  } else {
    normal = placement.world_to_object.transpose().col(2);
    surface = placement.world_to_object * Vec3(dx, -dy, 0.0);
  }
  const double f = prim.texture_frequency;
  const auto cell = static_cast<long long>(std::floor(f * surface[0] + placement.phase[0])) +
                    static_cast<long long>(std::floor(f * surface[1] + placement.phase[1])) +
                    static_cast<long long>(std::floor(f * surface[2] + placement.phase[2]));
  const Rgb& albedo = (cell % 2 == 0) ? prim.albedo_a : prim.albedo_b;
  color = shade_unchecked(normal, albedo, scene_->lighting);
  return true;
}

void SceneRenderer::render_log(const PoseVector& pose, Timestamp timestamp, LogBrightnessFrame& out) const {
  if (!out.values.same_shape(background_log_)) {
    out.values = background_log_;
  } else {
    std::copy(background_log_.pixels().begin(), background_log_.pixels().end(), out.values.pixels().begin());
  }
  out.timestamp = timestamp;
  const Placement placement = place(pose);
  const int x0 = std::max(0, static_cast<int>(std::floor(placement.cx - placement.radius)) - 1);
  const int x1 = std::min(geometry_.width, static_cast<int>(std::ceil(placement.cx + placement.radius)) + 1);
  const int y0 = std::max(0, static_cast<int>(std::floor(placement.cy - placement.radius)) - 1);
  const int y1 = std::min(geometry_.height, static_cast<int>(std::ceil(placement.cy + placement.radius)) + 1);
  Rgb color;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      if (primitive_color(placement, x, y, color)) {
        const Rgb f = color * 255.0;
        out.values(x, y) = log_luma(f, epsilon_);
      }
    }
  }
}

RgbImage SceneRenderer::render_rgb(const PoseVector& pose) const {
  RgbImage image(geometry_.width, geometry_.height);
  const Placement placement = place(pose);
  Rgb color;
  for (int y = 0; y < geometry_.height; ++y) {
    for (int x = 0; x < geometry_.width; ++x) {
      if (primitive_color(placement, x, y, color)) {
        image(x, y) = color * 255.0;
      } else {
        image(x, y) = scene_->background(x + scene_->crop_x, y + scene_->crop_y) * 255.0;
      }
    }
  }
  return image;
}

PoseVector random_pose(Rng& rng) {
  PoseVector pose;
  for (double& a : pose.alpha()) a = uniform(rng, -2.0, 2.0);
  auto t = pose.translation();
  t[0] = uniform(rng, -0.3, 0.3);
  t[1] = uniform(rng, -0.3, 0.3);
  t[2] = uniform(rng, -0.09, 0.09);
  for (double& r : pose.rotation()) r = uniform(rng, -std::numbers::pi / 4.0, std::numbers::pi / 4.0);
  return pose;
}

BezierTrajectory random_trajectory(int seconds, Rng& rng) {
  if (seconds < 1) throw std::invalid_argument("trajectory must cover at least one second");
  BezierTrajectory trajectory;
  trajectory.keyposes.reserve(static_cast<std::size_t>(seconds) + 1);
  trajectory.keyposes.push_back(random_pose(rng));
  for (int k = 0; k < seconds; ++k) {
    trajectory.midpoints.push_back(random_pose(rng));
    trajectory.keyposes.push_back(random_pose(rng));
  }
  return trajectory;
}

LightingConfig random_lighting(Rng& rng) {
  LightingConfig lighting;
  lighting.l1 = random_direction(rng);
  lighting.l2 = random_direction(rng);
  lighting.c1 = Rgb::Constant(0.5 * uniform(rng, 0.9, 1.1));
  lighting.c2 = Rgb::Constant(0.5 * uniform(rng, 0.9, 1.1));
  lighting.ambient = Rgb::Constant(0.15);
  return lighting;
}

RgbImage random_background(int width, int height, Rng& rng) {
  const Rgb base = random_color(rng, 0.2, 0.8);
  struct Wave {
    double kx, ky, phase;
    Rgb weight;
  };
  Wave waves[3];
  for (Wave& w : waves) {
    const double angle = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    const double freq = 2.0 * std::numbers::pi * uniform(rng, 0.01, 0.05);
    w = Wave{freq * std::cos(angle), freq * std::sin(angle), uniform(rng, 0.0, 2.0 * std::numbers::pi),
             random_color(rng, -0.15, 0.15)};
  }
  RgbImage image(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      Rgb c = base;
      for (const Wave& w : waves) c += w.weight * std::sin(w.kx * x + w.ky * y + w.phase);
      image(x, y) = c.max(0.0).min(1.0);
    }
  }
  return image;
}

Primitive random_primitive(Rng& rng) {
  Primitive prim;
  prim.shape = uniform(rng, 0.0, 1.0) < 0.7 ? PrimitiveShape::Sphere : PrimitiveShape::Disk;
  prim.radius_px = uniform(rng, 20.0, 40.0);
  prim.albedo_a = random_color(rng, 0.5, 1.0);
  prim.albedo_b = random_color(rng, 0.0, 0.4);
  prim.texture_frequency = uniform(rng, 1.5, 4.0);
  return prim;
}

SceneConfig random_scene(const SensorGeometry& geometry, int seconds, Rng& rng) {
  constexpr int kMargin = 40;
  SceneConfig scene;
  scene.primitive = random_primitive(rng);
  scene.background = random_background(geometry.width + kMargin, geometry.height + kMargin, rng);
  scene.crop_x = std::uniform_int_distribution<int>(0, kMargin)(rng);
  scene.crop_y = std::uniform_int_distribution<int>(0, kMargin)(rng);
  scene.trajectory = random_trajectory(seconds, rng);
  scene.lighting = random_lighting(rng);
  return scene;
}

void rerandomize(SceneConfig& scene, CameraConfig& camera, Rng& rng) {
  const int margin_x = scene.background.width() - camera.geometry.width;
  const int margin_y = scene.background.height() - camera.geometry.height;
  scene.primitive = random_primitive(rng);
  scene.background = random_background(scene.background.width(), scene.background.height(), rng);
  scene.crop_x = std::uniform_int_distribution<int>(0, std::max(0, margin_x))(rng);
  scene.crop_y = std::uniform_int_distribution<int>(0, std::max(0, margin_y))(rng);
  scene.lighting = random_lighting(rng);
  // Variance 0.0004.
  camera.threshold = std::max(0.05, std::normal_distribution<double>(0.5, 0.02)(rng));
}

}  // namespace eventforge
