#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "eventforge/event.hpp"
#include "eventforge/pose.hpp"
#include "eventforge/stream_format.hpp"

namespace eventforge {

/// Read-only memory mapping of a whole file.
class MappedFile {
 public:
  MappedFile() = default;
  /// Throws DataError if the file cannot be opened or mapped.
  explicit MappedFile(const std::filesystem::path& path);
  ~MappedFile();
  MappedFile(MappedFile&& other) noexcept;
  MappedFile& operator=(MappedFile&& other) noexcept;
  MappedFile(const MappedFile&) = delete;
  MappedFile& operator=(const MappedFile&) = delete;

  std::span<const std::uint8_t> bytes() const noexcept { return {data_, size_}; }

 private:
  void release() noexcept;
  const std::uint8_t* data_ = nullptr;
  std::size_t size_ = 0;
};

/// A simulated recording: memory-mapped event stream plus its pose metadata.
/// Opening validates every block once and indexes the tick positions; after
/// that, iteration and slicing cannot fail.
class EventDataset {
 public:
  /// Throws DataError for malformed files or when the metadata frame count
  /// differs from the event stream's tick count (the message names both).
  static EventDataset open(const std::filesystem::path& events_path,
                           const std::filesystem::path& metadata_path,
                           Duration step_duration = kDefaultStepDuration);
  /// Same checks over in-memory buffers (the dataset copies nothing; buffers
  /// must outlive it).
  static EventDataset from_buffers(std::span<const std::uint8_t> event_bytes,
                                   std::span<const std::uint8_t> metadata_bytes,
                                   Duration step_duration = kDefaultStepDuration);

  std::int64_t step_count() const noexcept { return static_cast<std::int64_t>(tick_blocks_.size()); }
  std::size_t event_count() const noexcept { return event_count_; }
  Duration step_duration() const noexcept { return step_duration_; }
  std::uint32_t metadata_fields() const noexcept { return fields_; }

  /// Pose of one step (requires 12 metadata fields).
  PoseVector pose(std::int64_t step) const;
  /// Raw metadata values of one step (any field count).
  std::vector<double> metadata(std::int64_t step) const;
  /// Number of events in one step.
  std::size_t step_event_count(std::int64_t step) const;
  /// Decodes the events of one step into `out` (cleared first).
  void step_events(std::int64_t step, std::vector<Event>& out) const;

  struct Batch {
    std::vector<Event> events;
    std::vector<PoseVector> poses;
  };
  /// Steps [first, last). Throws std::out_of_range for a bad range.
  Batch slice(std::int64_t first, std::int64_t last) const;

  struct Step {
    std::int64_t index = 0;
    std::span<const Event> events;
    PoseVector pose;
  };

  /// Sequential, synchronized iteration over (step, events, pose). The span
  /// in a Step is valid until the next call to next().
  class Cursor {
   public:
    explicit Cursor(const EventDataset& dataset) : dataset_(&dataset) {}
    bool next(Step& out);

   private:
    const EventDataset* dataset_;
    std::int64_t step_ = 0;
    std::vector<Event> buffer_;
  };
  Cursor cursor() const { return Cursor(*this); }

 private:
  EventDataset() = default;
  void index(std::span<const std::uint8_t> event_bytes, std::span<const std::uint8_t> metadata_bytes);

  std::shared_ptr<MappedFile> event_file_;
  std::shared_ptr<MappedFile> metadata_file_;
  std::span<const std::uint8_t> events_;
  std::span<const std::uint8_t> metadata_;
  Duration step_duration_ = kDefaultStepDuration;
  std::uint32_t fields_ = 0;
  std::size_t event_count_ = 0;
  /// Block index of each tick.
  std::vector<std::uint64_t> tick_blocks_;
};

/// Synchronized iterator over a paired event/metadata recording.
inline EventDataset load_paired(const std::filesystem::path& events_path,
                                const std::filesystem::path& metadata_path,
                                Duration step_duration = kDefaultStepDuration) {
  return EventDataset::open(events_path, metadata_path, step_duration);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace eventforge
