#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace eventforge {

/// 12-D hand state. Layout matches the metadata stream: six articulation
/// coefficients, then root translation (m), then root rotation (axis-angle, rad).
struct PoseVector {
  static constexpr std::size_t kSize = 12;
  static constexpr std::size_t kAlphaOffset = 0;
  static constexpr std::size_t kTranslationOffset = 6;
  static constexpr std::size_t kRotationOffset = 9;

  std::array<double, kSize> values{};

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  std::span<double, 6> alpha() { return std::span<double, 6>(values.data() + kAlphaOffset, 6); }
  std::span<const double, 6> alpha() const {
    return std::span<const double, 6>(values.data() + kAlphaOffset, 6);
  }
  std::span<double, 3> translation() {
    return std::span<double, 3>(values.data() + kTranslationOffset, 3);
  }
  std::span<const double, 3> translation() const {
    return std::span<const double, 3>(values.data() + kTranslationOffset, 3);
  }
  std::span<double, 3> rotation() { return std::span<double, 3>(values.data() + kRotationOffset, 3); }
  std::span<const double, 3> rotation() const {
    return std::span<const double, 3>(values.data() + kRotationOffset, 3);
  }

  bool finite() const noexcept;

  friend bool operator==(const PoseVector&, const PoseVector&) = default;
};

}  // namespace eventforge
