#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "eventforge/event.hpp"

namespace testing_helpers {

/// Sorted random stream on a w x h sensor with timestamps in [0, span).
inline std::vector<eventforge::Event> random_stream(std::mt19937_64& rng, std::size_t count, int width, int height,
                                                    std::int64_t span) {
  std::uniform_int_distribution<int> x(0, width - 1);
  std::uniform_int_distribution<int> y(0, height - 1);
  std::uniform_int_distribution<std::int64_t> t(0, span - 1);
  std::bernoulli_distribution positive(0.5);
  std::vector<eventforge::Event> events(count);
  for (auto& e : events) {
    e.x = static_cast<std::uint16_t>(x(rng));
    e.y = static_cast<std::uint16_t>(y(rng));
    e.t = t(rng);
    e.polarity = positive(rng) ? eventforge::Polarity::Positive : eventforge::Polarity::Negative;
  }
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return events;
}

/// Same, with timestamps on a step grid.
inline std::vector<eventforge::Event> random_grid_stream(std::mt19937_64& rng, std::size_t count, int width,
                                                         int height, std::int64_t steps, std::int64_t step_us) {
  auto events = random_stream(rng, count, width, height, steps);
  for (auto& e : events) e.t *= step_us;
  return events;
}

}  // namespace testing_helpers
