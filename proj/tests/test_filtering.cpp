#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "eventforge/kalman.hpp"
#include "eventforge/scheduler.hpp"

using namespace eventforge;

namespace {

WindowImage lnes_with_information(double information) {
  WindowImage img;
  img.kind = RepresentationKind::LNES;
  img.channels = 2;
  img.width = 100;
  img.height = 10;
  img.data.assign(2000, 0.0f);
  // Cells of 0.5 plus one remainder cell.
  const auto halves = static_cast<std::size_t>(information / 0.5);
  for (std::size_t i = 0; i < halves; ++i) img.data[i] = 0.5f;
  img.data[halves] = static_cast<float>(information - 0.5 * static_cast<double>(halves));
  return img;
}

PoseVector constant(double v) {
  PoseVector p;
  p.values.fill(v);
  return p;
}

}  // namespace

TEST_SUITE("filtering") {
  TEST_CASE("process noise blocks") {
    const auto q = white_noise_cov(0.1, 1.0);
    for (int b = 0; b < kPoseDim; ++b) {
      CHECK(q(2 * b, 2 * b) == 0.025);
      CHECK(q(2 * b, 2 * b + 1) == 0.05);
      CHECK(q(2 * b + 1, 2 * b) == 0.05);
      CHECK(q(2 * b + 1, 2 * b + 1) == 0.1);
    }
    CHECK(q.block(0, 2, 2, 22).isZero());
    const auto q2 = white_noise_cov(3.0, 0.5);
    CHECK(q2(0, 0) == doctest::Approx(3.0 * 0.0625 / 4));
    CHECK(q2(0, 1) == doctest::Approx(3.0 * 0.125 / 2));
    CHECK(q2(1, 1) == doctest::Approx(3.0 * 0.25));
  }

  TEST_CASE("transition matrix") {
    const auto f = transition_matrix(2.0);
    CHECK(f(0, 0) == 1.0);
    CHECK(f(0, 1) == 2.0);
    CHECK(f(1, 0) == 0.0);
    CHECK(f(1, 1) == 1.0);
    CHECK(f(0, 2) == 0.0);
  }

  TEST_CASE("presets") {
    CHECK(FilterSettings::slow().process_sigma2 == 0.1);
    CHECK(FilterSettings::slow().observation_noise == 5.0);
    CHECK(FilterSettings::fast().process_sigma2 == 3.0);
    CHECK(FilterSettings::fast().observation_noise == 1.0);
    CHECK_THROWS_AS((FilterSettings{0.1, 0.0, 1.0}.validate()), std::invalid_argument);
  }

  TEST_CASE("first observation initialises") {
    PoseFilter f;
    const auto p = constant(0.7);
    CHECK(f.filter(p) == p);
    REQUIRE(f.state().has_value());
    CHECK(f.state()->covariance == StateMatrix::Identity() * 10.0);
    CHECK(f.state()->state(1) == 0.0);
  }

  TEST_CASE("filter follows a constant pose and the residual vanishes") {
    PoseFilter f;
    const auto p = constant(1.5);
    PoseVector out;
    for (int i = 0; i < 50; ++i) out = f.filter(p);
    for (const double v : out.values) CHECK(v == doctest::Approx(1.5));
    CHECK(f.last_residual() < 1e-9);
  }

  TEST_CASE("covariance stays symmetric and PSD") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 2.0);
    PoseFilter f(FilterSettings::fast());
    for (int i = 0; i < 500; ++i) {
      PoseVector obs;
      for (auto& v : obs.values) v = n(rng);
      f.filter(obs);
      if (i % 3 == 0) f.set_settings(i % 2 ? FilterSettings::slow() : FilterSettings::fast());
      const auto& P = f.state()->covariance;
      CHECK((P - P.transpose()).cwiseAbs().maxCoeff() == 0.0);
      Eigen::SelfAdjointEigenSolver<StateMatrix> es(P);
      CHECK(es.eigenvalues().minCoeff() > -1e-9);
    }
  }

  TEST_CASE("non-finite observation is rejected") {
    PoseFilter f;
    f.filter(constant(0.0));
    CHECK_THROWS_AS(f.filter(constant(NAN)), std::invalid_argument);
  }
}

TEST_SUITE("scheduler") {
  TEST_CASE("defers below ten new events") {
    SlowMotionScheduler s;
    const auto img = lnes_with_information(500);
    CHECK(s.schedule(9, img) == ScheduleAction::Defer);
    CHECK(s.pending_events() == 9);
    CHECK(s.schedule(1, img) == ScheduleAction::EmitNewPrediction);
    CHECK(s.pending_events() == 0);
    CHECK(s.schedule(10, img) == ScheduleAction::EmitNewPrediction);
  }

  TEST_CASE("repeats the last prediction for a stationary hand") {
    SlowMotionScheduler low;
    CHECK(low.schedule(10, lnes_with_information(299.5)) == ScheduleAction::RepeatLast);
    SlowMotionScheduler edge;
    CHECK(edge.schedule(10, lnes_with_information(300.0)) == ScheduleAction::EmitNewPrediction);
  }

  TEST_CASE("information history holds sixteen windows") {
    SlowMotionScheduler s;
    for (int i = 0; i < 16; ++i) CHECK(s.schedule(10, lnes_with_information(400)) == ScheduleAction::EmitNewPrediction);
    // Average becomes (15 * 400 + 0) / 16 = 375.
    CHECK(s.schedule(10, lnes_with_information(0)) == ScheduleAction::EmitNewPrediction);
    CHECK(s.average_information() == doctest::Approx(375.0));
    for (int i = 0; i < 4; ++i) s.schedule(10, lnes_with_information(0));
    // (11 * 400) / 16 = 275.
    CHECK(s.average_information() == doctest::Approx(275.0));
  }

  TEST_CASE("information requires LNES") {
    WindowImage img;
    img.kind = RepresentationKind::ECI;
    CHECK_THROWS_AS(lnes_information(img), std::invalid_argument);
  }

  TEST_CASE("mode threshold is inclusive at 0.7") {
    CHECK(mode_for_residual(0.7) == FilterMode::Fast);
    CHECK(mode_for_residual(std::nextafter(0.7, 0.0)) == FilterMode::Slow);
    CHECK(settings_for(FilterMode::Fast).process_sigma2 == 3.0);
    CHECK(settings_for(FilterMode::Slow).observation_noise == 5.0);
  }

  TEST_CASE("probe residual drives the main filter's setting") {
    SlowMotionScheduler s;
    PoseFilter main_filter;
    CHECK(s.observe(constant(0.0), main_filter) == FilterMode::Slow);
    CHECK(s.observe(constant(0.0), main_filter) == FilterMode::Slow);
    CHECK(main_filter.settings().process_sigma2 == 0.1);
    CHECK(s.observe(constant(5.0), main_filter) == FilterMode::Fast);
    CHECK(main_filter.settings().process_sigma2 == 3.0);
    CHECK(s.probe_residual() >= 0.7);
  }
}
