#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eventforge/event.hpp"
#include "eventforge/image.hpp"
#include "eventforge/windowing.hpp"

namespace eventforge {

/// Byte values are the on-disk kind codes of the EVRW record header.
enum class RepresentationKind : std::uint8_t { LNES = 0, EOI = 1, ECI_S = 2, ECI = 3 };

std::string_view to_string(RepresentationKind kind) noexcept;
/// Accepts "lnes", "eoi", "eci", "eci-s" (case-insensitive).
std::optional<RepresentationKind> parse_representation(std::string_view name) noexcept;
int channel_count(RepresentationKind kind) noexcept;

/// Channel-major float image: data[(c * height + y) * width + x].
struct WindowImage {
  RepresentationKind kind = RepresentationKind::LNES;
  int channels = 0;
  int width = 0;
  int height = 0;
  Timestamp window_start = 0;
  Duration window_length = 0;
  std::vector<float> data;

  float& at(int c, int y, int x) { return data[offset(c, y, x)]; }
  float at(int c, int y, int x) const { return data[offset(c, y, x)]; }
  std::span<float> channel(int c) {
    return {data.data() + static_cast<std::size_t>(c) * plane(), plane()};
  }
  std::span<const float> channel(int c) const {
    return {data.data() + static_cast<std::size_t>(c) * plane(), plane()};
  }
  std::size_t plane() const noexcept {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  friend bool operator==(const WindowImage&, const WindowImage&) = default;

 private:
  std::size_t offset(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * static_cast<std::size_t>(height) + static_cast<std::size_t>(y)) *
               static_cast<std::size_t>(width) +
           static_cast<std::size_t>(x);
  }
};

/// Locally-normalised event surface: per (pixel, polarity), the
/// window-normalised timestamp (t - start) / length of the newest event.
/// Values lie in [0, 1); an event exactly at the window start maps to 0.
WindowImage build_lnes(const EventWindow& window, const SensorGeometry& geometry);
/// 1 where at least one event of that polarity hit the pixel.
WindowImage build_eoi(const EventWindow& window, const SensorGeometry& geometry);
/// Per-polarity event counts.
WindowImage build_eci(const EventWindow& window, const SensorGeometry& geometry);
/// Event counts irrespective of polarity (single channel).
WindowImage build_eci_s(const EventWindow& window, const SensorGeometry& geometry);

WindowImage build_representation(RepresentationKind kind, const EventWindow& window,
                                 const SensorGeometry& geometry);
/// Reuses `out`'s storage. All builders throw DataError naming the first
/// out-of-bounds event.
void build_representation_into(RepresentationKind kind, const EventWindow& window,
                               const SensorGeometry& geometry, WindowImage& out);

/// Serial reference: one window after the other.
std::vector<WindowImage> build_batch_serial(RepresentationKind kind, std::span<const EventWindow> windows,
                                            const SensorGeometry& geometry);
/// OpenMP over windows; identical output to the serial batch.
std::vector<WindowImage> build_batch_parallel(RepresentationKind kind,
                                              std::span<const EventWindow> windows,
                                              const SensorGeometry& geometry);

/// Exchanges the two channels wherever mask(x, y) != 0. Throws
/// std::invalid_argument for single-channel images or a mask of the wrong size.
WindowImage swap_polarity(const WindowImage& image, const Image<std::uint8_t>& mask);

/// Trailing sub-window of duration new_length with the same end time. A
/// window view can only shrink: for new_length > length the bounds widen but
/// no earlier events are added (re-slice the stream with window_at for that).
EventWindow rescale_window_length(const EventWindow& window, Duration new_length);

/// Size of the EVRW record header in bytes.
inline constexpr std::size_t kWindowHeaderSize = 16;

/// Writes one record: "EVRW", kind byte, channels, width, height (uint16 LE
/// each), 5 zero bytes, then channels*height*width float32 LE values.
void write_window_record(std::ostream& out, const WindowImage& image);
/// Reads one record; std::nullopt at clean end of stream. Throws DataError on
/// a bad magic, unknown kind or truncated payload.
std::optional<WindowImage> read_window_record(std::istream& in);

/// PNG visualisation. LNES/EOI: channel 0 -> red, channel 1 -> green, value * 255.
/// ECI/ECI-S are scaled by their maximum count.
void write_window_png(const std::filesystem::path& path, const WindowImage& image);

}  // namespace eventforge
