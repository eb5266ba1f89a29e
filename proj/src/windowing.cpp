#include "eventforge/windowing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "eventforge/error.hpp"

namespace eventforge {

namespace {

void check_parameters(std::span<const Event> stream, Duration length, Duration stride) {
  if (stride < 1) throw std::invalid_argument("window stride must be >= 1 us");
  if (length < stride) throw std::invalid_argument("window length must be >= stride");
  if (auto bad = first_unsorted(stream)) {
    throw DataError("event stream is not sorted by timestamp: event " + std::to_string(*bad) +
                        " (t=" + std::to_string(stream[*bad].t) + ") precedes event " +
                        std::to_string(*bad - 1) + " (t=" + std::to_string(stream[*bad - 1].t) + ")",
                    *bad);
  }
}

}  // namespace

EventWindow window_at(std::span<const Event> stream, Timestamp start, Duration length) {
  auto before = [](const Event& e, Timestamp t) { return e.t < t; };
  auto first = std::lower_bound(stream.begin(), stream.end(), start, before);
  auto last = std::lower_bound(first, stream.end(), start + length, before);
  return EventWindow{start, length, std::span<const Event>(first, last)};
}

WindowSlider::WindowSlider(std::span<const Event> stream, Duration length, Duration stride)
    : stream_(stream), length_(length), stride_(stride) {
  check_parameters(stream, length, stride);
  if (!stream.empty()) {
    count_ = static_cast<std::size_t>(std::max<Timestamp>(stream.back().t, 0) / stride) + 1;
  }
}

WindowSlider::WindowSlider(std::span<const Event> stream, Duration length, Duration stride,
                           Timestamp stream_end)
    : stream_(stream), length_(length), stride_(stride) {
  check_parameters(stream, length, stride);
  if (stream_end >= length) count_ = static_cast<std::size_t>((stream_end - length) / stride) + 1;
}

std::optional<EventWindow> WindowSlider::next() {
  if (next_index_ >= count_) return std::nullopt;
  const Timestamp start = static_cast<Timestamp>(next_index_) * stride_;
  const Timestamp end = start + length_;
  while (lo_ < stream_.size() && stream_[lo_].t < start) ++lo_;
  if (hi_ < lo_) hi_ = lo_;
  while (hi_ < stream_.size() && stream_[hi_].t < end) ++hi_;
  ++next_index_;
  return EventWindow{start, length_, stream_.subspan(lo_, hi_ - lo_)};
}

WindowSlider::iterator& WindowSlider::iterator::operator++() {
  if (owner_ == nullptr) return *this;
  if (auto w = owner_->next()) {
    current_ = *w;
  } else {
    owner_ = nullptr;
  }
  return *this;
}

}  // namespace eventforge
