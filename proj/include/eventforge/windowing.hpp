#pragma once

#include <cstddef>
#include <iterator>
#include <optional>
#include <span>

#include "eventforge/event.hpp"

namespace eventforge {

/// Half-open time window [start, start + length) viewing a contiguous slice of
/// a sorted stream. The window does not own its events; the stream must
/// outlive it.
struct EventWindow {
  Timestamp start = 0;
  Duration length = 0;
  std::span<const Event> events;

  Timestamp end() const noexcept { return start + length; }
};

/// Window over `stream` (sorted) covering [start, start + length). O(log n).
EventWindow window_at(std::span<const Event> stream, Timestamp start, Duration length);

/// Lazily yields windows k = 0, 1, ... with start = k * stride over a sorted
/// stream. Empty windows are yielded, not skipped. Each window is found by
/// advancing two cursors, so iteration is one pass over the stream.
///
/// Two coverage modes:
///   * without a stream end, windows continue until the last event is covered;
///   * with a stream end E, only windows fully inside [0, E) are yielded.
class WindowSlider {
 public:
  /// Throws std::invalid_argument if stride < 1 or length < stride, and
  /// DataError naming the first out-of-order index if the stream is unsorted.
  WindowSlider(std::span<const Event> stream, Duration length, Duration stride);
  WindowSlider(std::span<const Event> stream, Duration length, Duration stride,
               Timestamp stream_end);

  std::size_t window_count() const noexcept { return count_; }
  Duration length() const noexcept { return length_; }
  Duration stride() const noexcept { return stride_; }

  std::optional<EventWindow> next();

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = EventWindow;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(WindowSlider* owner) : owner_(owner) { ++*this; }

    const EventWindow& operator*() const { return current_; }
    const EventWindow* operator->() const { return &current_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return it.owner_ == nullptr;
    }

   private:
    WindowSlider* owner_ = nullptr;
    EventWindow current_;
  };

  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() const { return {}; }

 private:
  std::span<const Event> stream_;
  Duration length_;
  Duration stride_;
  std::size_t count_ = 0;
  std::size_t next_index_ = 0;
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
};

inline WindowSlider slide_windows(std::span<const Event> stream, Duration length,
                                  Duration stride) {
  return WindowSlider(stream, length, stride);
}

}  // namespace eventforge
