#include "eventforge/representations.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "eventforge/error.hpp"
#include "eventforge/image_io.hpp"
#include "eventforge/parallel.hpp"

namespace eventforge {

std::string_view to_string(RepresentationKind kind) noexcept {
  switch (kind) {
    case RepresentationKind::LNES: return "lnes";
    case RepresentationKind::EOI: return "eoi";
    case RepresentationKind::ECI_S: return "eci-s";
    case RepresentationKind::ECI: return "eci";
  }
  return "unknown";
}

std::optional<RepresentationKind> parse_representation(std::string_view name) noexcept {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "lnes") return RepresentationKind::LNES;
  if (lower == "eoi") return RepresentationKind::EOI;
  if (lower == "eci") return RepresentationKind::ECI;
  if (lower == "eci-s" || lower == "eci_s") return RepresentationKind::ECI_S;
  return std::nullopt;
}

int channel_count(RepresentationKind kind) noexcept {
  return kind == RepresentationKind::ECI_S ? 1 : 2;
}

namespace {

void prepare(WindowImage& out, RepresentationKind kind, const EventWindow& window,
             const SensorGeometry& geometry) {
  geometry.validate();
  if (window.length < 1) throw std::invalid_argument("window length must be >= 1 us");
  out.kind = kind;
  out.channels = channel_count(kind);
  out.width = geometry.width;
  out.height = geometry.height;
  out.window_start = window.start;
  out.window_length = window.length;
  out.data.assign(static_cast<std::size_t>(out.channels) * out.plane(), 0.0f);
}

void check_event(const Event& e, std::size_t index, const EventWindow& window, const SensorGeometry& geometry) {
  if (!geometry.contains(e)) {
    throw DataError("event " + std::to_string(index) + " at (" + std::to_string(e.x) + ", " + std::to_string(e.y) +
                        ") is outside the " + std::to_string(geometry.width) + "x" +
                        std::to_string(geometry.height) + " sensor",
                    index);
  }
  if (e.t < window.start || e.t >= window.end()) {
    throw DataError("event " + std::to_string(index) + " at t=" + std::to_string(e.t) + " is outside window [" +
                        std::to_string(window.start) + ", " + std::to_string(window.end()) + ")",
                    index);
  }
}

std::size_t cell(const WindowImage& img, int channel, const Event& e) {
  return (static_cast<std::size_t>(channel) * static_cast<std::size_t>(img.height) + e.y) *
             static_cast<std::size_t>(img.width) +
         e.x;
}

}  // namespace

void build_representation_into(RepresentationKind kind, const EventWindow& window,
                               const SensorGeometry& geometry, WindowImage& out) {
  prepare(out, kind, window, geometry);
  const auto events = window.events;
  float* data = out.data.data();
  switch (kind) {
    case RepresentationKind::LNES: {
      const double length = static_cast<double>(window.length);
      for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        check_event(e, i, window, geometry);
        // Oldest to newest, so later events overwrite earlier ones.
        data[cell(out, static_cast<int>(channel_index(e.polarity)), e)] =
            static_cast<float>(static_cast<double>(e.t - window.start) / length);
      }
      break;
    }
    case RepresentationKind::EOI:
      for (std::size_t i = 0; i < events.size(); ++i) {
        check_event(events[i], i, window, geometry);
        data[cell(out, static_cast<int>(channel_index(events[i].polarity)), events[i])] = 1.0f;
      }
      break;
    case RepresentationKind::ECI:
      for (std::size_t i = 0; i < events.size(); ++i) {
        check_event(events[i], i, window, geometry);
        data[cell(out, static_cast<int>(channel_index(events[i].polarity)), events[i])] += 1.0f;
      }
      break;
    case RepresentationKind::ECI_S:
      for (std::size_t i = 0; i < events.size(); ++i) {
        check_event(events[i], i, window, geometry);
        data[cell(out, 0, events[i])] += 1.0f;
      }
      break;
  }
}

WindowImage build_representation(RepresentationKind kind, const EventWindow& window,
                                  const SensorGeometry& geometry) {
  WindowImage out;
  build_representation_into(kind, window, geometry, out);
  return out;
}

WindowImage build_lnes(const EventWindow& window, const SensorGeometry& geometry) {
  return build_representation(RepresentationKind::LNES, window, geometry);
}
WindowImage build_eoi(const EventWindow& window, const SensorGeometry& geometry) {
  return build_representation(RepresentationKind::EOI, window, geometry);
}
WindowImage build_eci(const EventWindow& window, const SensorGeometry& geometry) {
  return build_representation(RepresentationKind::ECI, window, geometry);
}
WindowImage build_eci_s(const EventWindow& window, const SensorGeometry& geometry) {
  return build_representation(RepresentationKind::ECI_S, window, geometry);
}

std::vector<WindowImage> build_batch_serial(RepresentationKind kind, std::span<const EventWindow> windows,
                                            const SensorGeometry& geometry) {
  std::vector<WindowImage> out(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) build_representation_into(kind, windows[i], geometry, out[i]);
  return out;
}

std::vector<WindowImage> build_batch_parallel(RepresentationKind kind, std::span<const EventWindow> windows,
                                              const SensorGeometry& geometry) {
  std::vector<WindowImage> out(windows.size());
  const auto n = static_cast<long long>(windows.size());
  // Exceptions must not escape the parallel region; the first one is rethrown.
  std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8) num_threads(max_threads())
#endif
  for (long long i = 0; i < n; ++i) {
    try {
      build_representation_into(kind, windows[static_cast<std::size_t>(i)], geometry,
                                out[static_cast<std::size_t>(i)]);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(eventforge_batch_failure)
#endif
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

WindowImage swap_polarity(const WindowImage& image, const Image<std::uint8_t>& mask) {
  if (image.channels != 2) throw std::invalid_argument("polarity swap needs a two-channel image");
  if (!mask.same_shape(image.width, image.height)) {
    throw std::invalid_argument("swap mask size does not match the image");
  }
  WindowImage out = image;
  auto positive = out.channel(0);
  auto negative = out.channel(1);
  const auto m = mask.pixels();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] != 0) std::swap(positive[i], negative[i]);
  }
  return out;
}

EventWindow rescale_window_length(const EventWindow& window, Duration new_length) {
  if (new_length < 1) throw std::invalid_argument("window length must be >= 1 us");
  const Timestamp new_start = window.end() - new_length;
  auto first = std::lower_bound(window.events.begin(), window.events.end(), new_start,
                                [](const Event& e, Timestamp t) { return e.t < t; });
  return EventWindow{new_start, new_length, std::span<const Event>(first, window.events.end())};
}

namespace {

constexpr std::array<char, 4> kWindowMagic = {'E', 'V', 'R', 'W'};

void put_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v & 0xFF);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}
std::uint16_t get_u16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint16_t checked_u16(int v, const char* what) {
  if (v < 0 || v > 0xFFFF) throw std::invalid_argument(std::string(what) + " does not fit in 16 bits");
  return static_cast<std::uint16_t>(v);
}

}  // namespace

void write_window_record(std::ostream& out, const WindowImage& image) {
  std::array<std::uint8_t, kWindowHeaderSize> header{};
  std::memcpy(header.data(), kWindowMagic.data(), 4);
  header[4] = static_cast<std::uint8_t>(image.kind);
  put_u16(header.data() + 5, checked_u16(image.channels, "channel count"));
  put_u16(header.data() + 7, checked_u16(image.width, "width"));
  put_u16(header.data() + 9, checked_u16(image.height, "height"));
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(image.data.data()),
              static_cast<std::streamsize>(image.data.size() * sizeof(float)));
  } else {
    for (float v : image.data) {
      auto bits = std::bit_cast<std::uint32_t>(v);
      const std::uint8_t le[4] = {static_cast<std::uint8_t>(bits), static_cast<std::uint8_t>(bits >> 8),
                                  static_cast<std::uint8_t>(bits >> 16), static_cast<std::uint8_t>(bits >> 24)};
      out.write(reinterpret_cast<const char*>(le), 4);
    }
  }
}

std::optional<WindowImage> read_window_record(std::istream& in) {
  std::array<std::uint8_t, kWindowHeaderSize> header{};
  in.read(reinterpret_cast<char*>(header.data()), static_cast<std::streamsize>(header.size()));
  if (in.gcount() == 0) return std::nullopt;
  if (in.gcount() != static_cast<std::streamsize>(header.size())) {
    throw DataError("truncated window record header");
  }
  if (std::memcmp(header.data(), kWindowMagic.data(), 4) != 0) throw DataError("bad window record magic");
  if (header[4] > static_cast<std::uint8_t>(RepresentationKind::ECI)) {
    throw DataError("unknown representation kind " + std::to_string(header[4]));
  }
  WindowImage image;
  image.kind = static_cast<RepresentationKind>(header[4]);
  image.channels = get_u16(header.data() + 5);
  image.width = get_u16(header.data() + 7);
  image.height = get_u16(header.data() + 9);
  image.data.resize(static_cast<std::size_t>(image.channels) * image.plane());
  const auto bytes = static_cast<std::streamsize>(image.data.size() * sizeof(float));
  in.read(reinterpret_cast<char*>(image.data.data()), bytes);
  if (in.gcount() != bytes) throw DataError("truncated window record payload");
  if constexpr (std::endian::native != std::endian::little) {
    for (float& v : image.data) {
      auto bits = std::bit_cast<std::uint32_t>(v);
      bits = ((bits & 0xFF) << 24) | ((bits & 0xFF00) << 8) | ((bits >> 8) & 0xFF00) | (bits >> 24);
      v = std::bit_cast<float>(bits);
    }
  }
  return image;
}

void write_window_png(const std::filesystem::path& path, const WindowImage& image) {
  float scale = 1.0f;
  if (image.kind == RepresentationKind::ECI || image.kind == RepresentationKind::ECI_S) {
    const float peak = image.data.empty() ? 0.0f : *std::max_element(image.data.begin(), image.data.end());
    scale = peak > 0.0f ? 1.0f / peak : 1.0f;
  }
  std::vector<std::uint8_t> rgb(image.plane() * 3, 0);
  auto to_byte = [scale](float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v * scale, 0.0f, 1.0f) * 255.0f));
  };
  for (int c = 0; c < std::min(image.channels, 2); ++c) {
    const auto plane = image.channel(c);
    for (std::size_t i = 0; i < plane.size(); ++i) rgb[i * 3 + static_cast<std::size_t>(c)] = to_byte(plane[i]);
  }
  if (image.channels == 1) {
    // Grey for the polarity-blind count.
    for (std::size_t i = 0; i < image.plane(); ++i) rgb[i * 3 + 1] = rgb[i * 3 + 2] = rgb[i * 3];
  }
  write_png_rgb(path, image.width, image.height, rgb);
}

}  // namespace eventforge
