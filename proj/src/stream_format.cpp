#include "eventforge/stream_format.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "eventforge/error.hpp"

namespace eventforge {

namespace {

std::uint16_t load_u16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t load_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

double load_f64(const std::uint8_t* p) {
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
  return std::bit_cast<double>(bits);
}

void store_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void store_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void store_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

}  // namespace

EncodedEvents encode_events(std::span<const Event> stream, std::int64_t min_steps, Duration step_duration) {
  if (step_duration < 1) throw std::invalid_argument("step duration must be >= 1 us");
  if (min_steps < 0) throw std::invalid_argument("step count must be >= 0");
  if (auto bad = first_unsorted(stream)) {
    throw DataError("cannot encode an unsorted stream: event " + std::to_string(*bad) + " goes back in time", *bad);
  }
  if (!stream.empty() && stream.front().t < 0) throw std::invalid_argument("timestamps must be >= 0");

  EncodedEvents out;
  out.steps = min_steps;
  if (!stream.empty()) out.steps = std::max(out.steps, stream.back().t / step_duration + 1);
  out.bytes.resize(kEventBlockSize * (stream.size() + static_cast<std::size_t>(out.steps)));

  std::uint8_t* p = out.bytes.data();
  std::size_t i = 0;
  for (std::int64_t step = 0; step < out.steps; ++step) {
    for (; i < stream.size() && stream[i].t / step_duration == step; ++i) {
      const Event& e = stream[i];
      if (e.y > 0xFF) {
        throw DataError("event " + std::to_string(i) + " has y=" + std::to_string(e.y) +
                            ", the stream format holds y < 256",
                        i);
      }
      if (e.t % step_duration != 0) ++out.quantized;
      p[0] = static_cast<std::uint8_t>(e.x & 0xFF);
      p[1] = static_cast<std::uint8_t>(e.x >> 8);
      p[2] = static_cast<std::uint8_t>(e.y);
      p[3] = e.polarity == Polarity::Positive ? kPositiveByte : kNegativeByte;
      p += kEventBlockSize;
    }
    p[0] = 0;
    p[1] = 0;
    p[2] = 0;
    p[3] = kTickByte;
    p += kEventBlockSize;
  }
  return out;
}

DecodedEvents decode_events(std::span<const std::uint8_t> bytes, Duration step_duration) {
  if (step_duration < 1) throw std::invalid_argument("step duration must be >= 1 us");
  if (bytes.size() % kEventBlockSize != 0) {
    const std::size_t offset = bytes.size() - bytes.size() % kEventBlockSize;
    throw DataError("event stream length " + std::to_string(bytes.size()) +
                        " is not a multiple of 4: truncated block at byte offset " + std::to_string(offset),
                    offset);
  }
  DecodedEvents out;
  out.events.reserve(bytes.size() / kEventBlockSize);
  const std::uint8_t* data = bytes.data();
  for (std::size_t offset = 0; offset < bytes.size(); offset += kEventBlockSize) {
    const std::uint8_t p = data[offset + 3];
    if (p == kTickByte) {
      ++out.steps;
    } else if (p <= kPositiveByte) {
      out.events.push_back(decode_block(data + offset, out.steps * step_duration));
    } else {
      throw DataError("invalid polarity byte " + std::to_string(p) + " at byte offset " +
                          std::to_string(offset + 3),
                      offset + 3);
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_metadata(const MetadataStream& stream) {
  if (stream.values.size() != stream.frames * static_cast<std::size_t>(stream.fields)) {
    throw std::invalid_argument("metadata values do not match frames * fields");
  }
  std::vector<std::uint8_t> out;
  out.reserve(kMetadataHeaderSize + stream.frames * metadata_record_size(stream.fields));
  store_u32(out, stream.fields);
  for (std::size_t f = 0; f < stream.frames; ++f) {
    for (double v : stream.frame(f)) store_f64(out, v);
    store_u16(out, stream.magic);
  }
  return out;
}

MetadataStream from_poses(std::span<const PoseVector> poses, std::uint16_t magic) {
  MetadataStream stream;
  stream.fields = PoseVector::kSize;
  stream.magic = magic;
  stream.frames = poses.size();
  stream.values.reserve(poses.size() * PoseVector::kSize);
  for (const PoseVector& pose : poses) stream.values.insert(stream.values.end(), pose.values.begin(), pose.values.end());
  return stream;
}

std::vector<std::uint8_t> encode_metadata(std::span<const PoseVector> poses, std::uint16_t magic) {
  return encode_metadata(from_poses(poses, magic));
}

MetadataStream decode_metadata(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMetadataHeaderSize) {
    throw DataError("metadata stream is " + std::to_string(bytes.size()) +
                        " bytes, shorter than its 4-byte header",
                    0);
  }
  MetadataStream out;
  out.fields = load_u32(bytes.data());
  const std::uint64_t record = metadata_record_size(out.fields);
  const std::uint64_t body = bytes.size() - kMetadataHeaderSize;
  if (body % record != 0) {
    const std::uint64_t offset = kMetadataHeaderSize + body - body % record;
    throw DataError("metadata stream ends with a partial record of " + std::to_string(body % record) +
                        " bytes at byte offset " + std::to_string(offset) + " (records are " +
                        std::to_string(record) + " bytes)",
                    offset);
  }
  out.frames = static_cast<std::size_t>(body / record);
  out.values.reserve(out.frames * out.fields);
  const std::uint8_t* p = bytes.data() + kMetadataHeaderSize;
  for (std::size_t f = 0; f < out.frames; ++f, p += record) {
    for (std::uint32_t i = 0; i < out.fields; ++i) out.values.push_back(load_f64(p + 8ULL * i));
    const std::uint16_t magic = load_u16(p + 8ULL * out.fields);
    if (f == 0) {
      out.magic = magic;
    } else if (magic != out.magic) {
      throw DataError("metadata magic mismatch at frame " + std::to_string(f) + ": expected " +
                          std::to_string(out.magic) + ", found " + std::to_string(magic),
                      f);
    }
  }
  return out;
}

std::vector<PoseVector> to_poses(const MetadataStream& stream) {
  if (stream.fields != PoseVector::kSize) {
    throw DataError("metadata has " + std::to_string(stream.fields) + " fields per frame, poses need 12");
  }
  std::vector<PoseVector> poses(stream.frames);
  for (std::size_t f = 0; f < stream.frames; ++f) {
    const auto frame = stream.frame(f);
    std::copy(frame.begin(), frame.end(), poses[f].values.begin());
  }
  return poses;
}

}  // namespace eventforge
