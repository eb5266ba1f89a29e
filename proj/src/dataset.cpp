#include "eventforge/dataset.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "eventforge/error.hpp"

namespace eventforge {

MappedFile::MappedFile(const std::filesystem::path& path) {
  const int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) throw DataError("cannot open " + path.string() + ": " + std::strerror(errno));
  struct stat st {};
  if (::fstat(fd, &st) != 0) {
    const int err = errno;
    ::close(fd);
    throw DataError("cannot stat " + path.string() + ": " + std::strerror(err));
  }
  size_ = static_cast<std::size_t>(st.st_size);
  if (size_ > 0) {
    void* mapped = ::mmap(nullptr, size_, PROT_READ, MAP_PRIVATE, fd, 0);
    if (mapped == MAP_FAILED) {
      const int err = errno;
      ::close(fd);
      throw DataError("cannot map " + path.string() + ": " + std::strerror(err));
    }
    ::madvise(mapped, size_, MADV_SEQUENTIAL);
    data_ = static_cast<const std::uint8_t*>(mapped);
  }
  ::close(fd);
}

MappedFile::~MappedFile() { release(); }

MappedFile::MappedFile(MappedFile&& other) noexcept : data_(other.data_), size_(other.size_) {
  other.data_ = nullptr;
  other.size_ = 0;
}

MappedFile& MappedFile::operator=(MappedFile&& other) noexcept {
  if (this != &other) {
    release();
    data_ = std::exchange(other.data_, nullptr);
    size_ = std::exchange(other.size_, 0);
  }
  return *this;
}

void MappedFile::release() noexcept {
  if (data_ != nullptr) ::munmap(const_cast<std::uint8_t*>(data_), size_);
  data_ = nullptr;
  size_ = 0;
}

namespace {

double load_f64(const std::uint8_t* p) {
  std::uint64_t bits;
  std::memcpy(&bits, p, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  return std::bit_cast<double>(bits);
}

}  // namespace

EventDataset EventDataset::open(const std::filesystem::path& events_path,
                                const std::filesystem::path& metadata_path, Duration step_duration) {
  EventDataset ds;
  ds.step_duration_ = step_duration;
  ds.event_file_ = std::make_shared<MappedFile>(events_path);
  ds.metadata_file_ = std::make_shared<MappedFile>(metadata_path);
  ds.index(ds.event_file_->bytes(), ds.metadata_file_->bytes());
  return ds;
}

EventDataset EventDataset::from_buffers(std::span<const std::uint8_t> event_bytes,
                                        std::span<const std::uint8_t> metadata_bytes, Duration step_duration) {
  EventDataset ds;
  ds.step_duration_ = step_duration;
  ds.index(event_bytes, metadata_bytes);
  return ds;
}

void EventDataset::index(std::span<const std::uint8_t> event_bytes, std::span<const std::uint8_t> metadata_bytes) {
  if (step_duration_ < 1) throw std::invalid_argument("step duration must be >= 1 us");
  events_ = event_bytes;
  metadata_ = metadata_bytes;

  if (events_.size() % kEventBlockSize != 0) {
    const std::size_t offset = events_.size() - events_.size() % kEventBlockSize;
    throw DataError("event stream length " + std::to_string(events_.size()) +
                        " is not a multiple of 4: truncated block at byte offset " + std::to_string(offset),
                    offset);
  }
  const std::size_t blocks = events_.size() / kEventBlockSize;
  const std::uint8_t* data = events_.data();
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::uint8_t p = data[b * kEventBlockSize + 3];
    if (p == kTickByte) {
      tick_blocks_.push_back(b);
    } else if (p > kPositiveByte) {
      throw DataError("invalid polarity byte " + std::to_string(p) + " at byte offset " +
                          std::to_string(b * kEventBlockSize + 3),
                      b * kEventBlockSize + 3);
    }
  }
  event_count_ = blocks - tick_blocks_.size();
  const std::size_t trailing = tick_blocks_.empty() ? blocks : blocks - 1 - tick_blocks_.back();
  if (trailing > 0) {
    throw DataError(std::to_string(trailing) + " event block(s) after the last frame tick",
                    (blocks - trailing) * kEventBlockSize);
  }

  if (metadata_.size() < kMetadataHeaderSize) {
    throw DataError("metadata stream is shorter than its 4-byte header", 0);
  }
  std::memcpy(&fields_, metadata_.data(), sizeof fields_);
  if constexpr (std::endian::native == std::endian::big) fields_ = __builtin_bswap32(fields_);
  const std::uint64_t record = metadata_record_size(fields_);
  const std::uint64_t body = metadata_.size() - kMetadataHeaderSize;
  if (body % record != 0) {
    throw DataError("metadata stream ends with a partial record", kMetadataHeaderSize + body - body % record);
  }
  const std::uint64_t frames = body / record;
  const std::uint8_t* magic0 = metadata_.data() + kMetadataHeaderSize + 8ULL * fields_;
  for (std::uint64_t f = 1; f < frames; ++f) {
    if (std::memcmp(magic0 + f * record, magic0, 2) != 0) {
      throw DataError("metadata magic mismatch at frame " + std::to_string(f), f);
    }
  }
  if (frames != tick_blocks_.size()) {
    throw DataError("metadata has " + std::to_string(frames) + " frames but the event stream has " +
                    std::to_string(tick_blocks_.size()) + " steps (" + std::to_string(frames) +
                    " ≠ " + std::to_string(tick_blocks_.size()) + ")");
  }
}

std::vector<double> EventDataset::metadata(std::int64_t step) const {
  if (step < 0 || step >= step_count()) throw std::out_of_range("step " + std::to_string(step) + " out of range");
  const std::uint8_t* p = metadata_.data() + kMetadataHeaderSize +
                          static_cast<std::uint64_t>(step) * metadata_record_size(fields_);
  std::vector<double> values(fields_);
  for (std::uint32_t i = 0; i < fields_; ++i) values[i] = load_f64(p + 8ULL * i);
  return values;
}

PoseVector EventDataset::pose(std::int64_t step) const {
  if (fields_ != PoseVector::kSize) {
    throw DataError("metadata has " + std::to_string(fields_) + " fields per frame, poses need 12");
  }
  if (step < 0 || step >= step_count()) throw std::out_of_range("step " + std::to_string(step) + " out of range");
  const std::uint8_t* p = metadata_.data() + kMetadataHeaderSize +
                          static_cast<std::uint64_t>(step) * metadata_record_size(fields_);
  PoseVector pose;
  for (std::size_t i = 0; i < PoseVector::kSize; ++i) pose[i] = load_f64(p + 8 * i);
  return pose;
}

std::size_t EventDataset::step_event_count(std::int64_t step) const {
  if (step < 0 || step >= step_count()) throw std::out_of_range("step " + std::to_string(step) + " out of range");
  const auto s = static_cast<std::size_t>(step);
  const std::uint64_t first = s == 0 ? 0 : tick_blocks_[s - 1] + 1;
  return static_cast<std::size_t>(tick_blocks_[s] - first);
}

void EventDataset::step_events(std::int64_t step, std::vector<Event>& out) const {
  out.clear();
  const std::size_t n = step_event_count(step);
  const auto s = static_cast<std::size_t>(step);
  const std::uint64_t first = s == 0 ? 0 : tick_blocks_[s - 1] + 1;
  const std::uint8_t* p = events_.data() + first * kEventBlockSize;
  const Timestamp t = step * step_duration_;
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i, p += kEventBlockSize) out[i] = decode_block(p, t);
}

EventDataset::Batch EventDataset::slice(std::int64_t first, std::int64_t last) const {
  if (first < 0 || last < first || last > step_count()) {
    throw std::out_of_range("step slice [" + std::to_string(first) + ", " + std::to_string(last) +
                            ") outside [0, " + std::to_string(step_count()) + ")");
  }
  Batch batch;
  if (first == last) return batch;
  const auto a = static_cast<std::size_t>(first);
  const auto b = static_cast<std::size_t>(last);
  const std::uint64_t begin_block = a == 0 ? 0 : tick_blocks_[a - 1] + 1;
  const std::uint64_t end_block = tick_blocks_[b - 1];
  batch.events.reserve(static_cast<std::size_t>(end_block - begin_block) - (b - a - 1));
  std::int64_t step = first;
  for (std::uint64_t blk = begin_block; blk < end_block; ++blk) {
    const std::uint8_t* p = events_.data() + blk * kEventBlockSize;
    if (p[3] == kTickByte) {
      ++step;
    } else {
      batch.events.push_back(decode_block(p, step * step_duration_));
    }
  }
  if (fields_ == PoseVector::kSize) {
    batch.poses.reserve(b - a);
    for (std::int64_t s = first; s < last; ++s) batch.poses.push_back(pose(s));
  }
  return batch;
}

bool EventDataset::Cursor::next(Step& out) {
  if (step_ >= dataset_->step_count()) return false;
  dataset_->step_events(step_, buffer_);
  out.index = step_;
  out.events = buffer_;
  if (dataset_->fields_ == PoseVector::kSize) out.pose = dataset_->pose(step_);
  ++step_;
  return true;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  std::vector<std::uint8_t> bytes(size);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (!in) throw DataError("cannot read " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("cannot write " + path.string());
}

}  // namespace eventforge
