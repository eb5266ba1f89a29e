#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace eventforge {

/// Integer microseconds since stream start.
using Timestamp = std::int64_t;
/// Integer microseconds.
using Duration = std::int64_t;

enum class Polarity : std::uint8_t { Positive = 0, Negative = 1 };

/// Channel used by every two-channel representation: Positive -> 0, Negative -> 1.
constexpr std::size_t channel_index(Polarity p) noexcept {
  return static_cast<std::size_t>(p);
}

constexpr Polarity opposite(Polarity p) noexcept {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

struct Event {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Polarity polarity = Polarity::Positive;
  Timestamp t = 0;

  friend bool operator==(const Event&, const Event&) = default;
};

struct SensorGeometry {
  int width = 240;
  int height = 180;

  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool contains(const Event& e) const noexcept {
    return e.x < width && e.y < height;
  }
  /// Throws std::invalid_argument unless width >= 1 and height >= 1.
  void validate() const;

  friend bool operator==(const SensorGeometry&, const SensorGeometry&) = default;
};

/// Violations found by validate_stream. Empty (ok()) iff the stream is valid.
struct StreamReport {
  std::size_t out_of_bounds = 0;
  std::optional<std::size_t> first_out_of_bounds;
  std::size_t regressions = 0;
  std::optional<std::size_t> first_regression;

  bool ok() const noexcept { return out_of_bounds == 0 && regressions == 0; }
  /// Human-readable summary naming first offending indices and bounds.
  std::string describe(const SensorGeometry& geometry) const;
};

StreamReport validate_stream(std::span<const Event> stream, const SensorGeometry& geometry);

/// Index of the first event whose timestamp is smaller than its predecessor's.
std::optional<std::size_t> first_unsorted(std::span<const Event> stream) noexcept;

}  // namespace eventforge
