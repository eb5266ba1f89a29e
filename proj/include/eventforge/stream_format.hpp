#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eventforge/event.hpp"
#include "eventforge/pose.hpp"

namespace eventforge {

// Event stream file: 4-byte blocks {x: uint16 LE, y: uint8, p: uint8}.
// p = 1 positive, p = 0 negative, p = 255 frame tick (x, y ignored on read,
// written as 0). Each step's events are followed by that step's tick.
inline constexpr std::size_t kEventBlockSize = 4;
inline constexpr std::uint8_t kTickByte = 255;
inline constexpr std::uint8_t kPositiveByte = 1;
inline constexpr std::uint8_t kNegativeByte = 0;
inline constexpr Duration kDefaultStepDuration = 1000;

// Metadata stream file: uint32 LE field count N, then records of N float64 LE
// values followed by a uint16 LE magic.
inline constexpr std::uint16_t kMetadataMagic = 0x4D45;
inline constexpr std::size_t kMetadataHeaderSize = 4;

constexpr std::uint64_t metadata_record_size(std::uint32_t fields) noexcept {
  return 8ULL * fields + 2ULL;
}

struct EncodedEvents {
  std::vector<std::uint8_t> bytes;
  std::int64_t steps = 0;
  /// Events whose timestamp was not on the step grid and got rounded down.
  std::size_t quantized = 0;
};

/// Encodes a sorted stream. The step count is max(min_steps, last event's step + 1).
/// Throws DataError for y >= 256 or an unsorted stream, std::invalid_argument
/// for step_duration < 1 or negative timestamps.
EncodedEvents encode_events(std::span<const Event> stream, std::int64_t min_steps = 0,
                            Duration step_duration = kDefaultStepDuration);

struct DecodedEvents {
  std::vector<Event> events;
  /// Number of tick blocks.
  std::int64_t steps = 0;
};

/// Inverse of encode_events; timestamps are step_index * step_duration.
/// Events after the last tick belong to step `steps` (an unterminated step).
/// Throws DataError with the byte offset for a length that is not a multiple
/// of 4 or a polarity byte outside {0, 1, 255}.
DecodedEvents decode_events(std::span<const std::uint8_t> bytes,
                            Duration step_duration = kDefaultStepDuration);

/// Decodes one non-tick block. Caller guarantees p is 0 or 1.
inline Event decode_block(const std::uint8_t* block, Timestamp t) noexcept {
  Event e;
  e.x = static_cast<std::uint16_t>(block[0] | (block[1] << 8));
  e.y = block[2];
  e.polarity = block[3] == kPositiveByte ? Polarity::Positive : Polarity::Negative;
  e.t = t;
  return e;
}

struct MetadataStream {
  std::uint32_t fields = 0;
  std::uint16_t magic = kMetadataMagic;
  std::size_t frames = 0;
  /// frames * fields values, frame-major.
  std::vector<double> values;

  std::span<const double> frame(std::size_t i) const {
    return {values.data() + i * fields, fields};
  }
};

std::vector<std::uint8_t> encode_metadata(const MetadataStream& stream);
std::vector<std::uint8_t> encode_metadata(std::span<const PoseVector> poses,
                                          std::uint16_t magic = kMetadataMagic);
/// Throws DataError for a short header, a magic that differs from the first
/// record's (naming the frame index) or a trailing partial record.
MetadataStream decode_metadata(std::span<const std::uint8_t> bytes);
/// Requires fields == 12.
std::vector<PoseVector> to_poses(const MetadataStream& stream);
MetadataStream from_poses(std::span<const PoseVector> poses, std::uint16_t magic = kMetadataMagic);

}  // namespace eventforge
