#include <doctest.h>

#include <cmath>

#include "eventforge/calibration.hpp"
#include "eventforge/error.hpp"

using namespace eventforge;

namespace {

IntensityFrame flat(int w, int h, double v, Timestamp t) { return {Image<double>(w, h, v), t}; }

}  // namespace

TEST_SUITE("calibration") {
  TEST_CASE("total log change with the epsilon clamp") {
    std::vector<IntensityFrame> frames{flat(2, 1, 100.0, 0), flat(2, 1, 1000.0, 10), flat(2, 1, 1.0, 20)};
    // Per pixel: ln(10) up, then ln(1000 / 10) down (1.0 clamps to 10).
    const double expected = 2 * (std::log(10.0) + std::log(100.0));
    CHECK(total_log_change(frames, 10.0) == doctest::Approx(expected));
  }

  TEST_CASE("threshold estimate counts events inside the frame span") {
    CalibrationInput in;
    in.frames = {flat(1, 1, std::exp(0.0), 0), flat(1, 1, std::exp(2.0), 1000)};
    in.epsilon = 1.0;
    std::vector<Event> events;
    events.push_back({0, 0, Polarity::Positive, 0});  // at the first frame: excluded
    for (int i = 0; i < 4; ++i) events.push_back({0, 0, Polarity::Positive, 1000});
    in.events = events;
    const auto est = estimate_threshold(in);
    CHECK(est.event_count == 4);
    CHECK(est.raw == doctest::Approx(0.5));
    CHECK_FALSE(est.corrected.has_value());
  }

  TEST_CASE("noise correction removes the expected noise count") {
    CalibrationInput in;
    in.frames = {flat(1, 1, 1.0, 0), flat(1, 1, std::exp(3.0), 1'000'000)};
    in.epsilon = 1.0;
    std::vector<Event> events(8, Event{0, 0, Polarity::Positive, 500'000});
    in.events = events;
    const auto est = estimate_threshold(in, NoiseRates{1.5, 0.5});
    REQUIRE(est.corrected.has_value());
    CHECK(est.raw == doctest::Approx(3.0 / 8));
    CHECK(*est.corrected == doctest::Approx(0.5));
  }

  TEST_CASE("errors") {
    CalibrationInput in;
    in.frames = {flat(1, 1, 1.0, 0)};
    CHECK_THROWS_AS(estimate_threshold(in), DataError);
    in.frames.push_back(flat(2, 1, 1.0, 10));
    CHECK_THROWS_AS(estimate_threshold(in), DataError);
    in.frames.back() = flat(1, 1, 5.0, 10);
    CHECK_THROWS_AS(estimate_threshold(in), DataError);  // no events
    CHECK_THROWS_AS(estimate_noise_rates({}, 0.0), std::invalid_argument);
  }

  TEST_CASE("noise rates from a static recording") {
    std::vector<Event> events;
    for (int i = 0; i < 30; ++i) events.push_back({0, 0, Polarity::Positive, i});
    for (int i = 0; i < 6; ++i) events.push_back({0, 0, Polarity::Negative, 40 + i});
    const auto r = estimate_noise_rates(events, 2.0);
    CHECK(r.positive == 15.0);
    CHECK(r.negative == 3.0);
  }
}
