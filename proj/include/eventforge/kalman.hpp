#pragma once

#include <optional>

#include <Eigen/Core>

#include "eventforge/pose.hpp"

namespace eventforge {

inline constexpr int kPoseDim = 12;
inline constexpr int kStateDim = 24;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;
using ObservationVector = Eigen::Matrix<double, kPoseDim, 1>;

/// Interleaved position/velocity state [theta_1, dtheta_1, ..., theta_12, dtheta_12].
struct KalmanState {
  StateVector state = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Identity();

  PoseVector positions() const;
  /// Positions from the observation, zero velocity, covariance initial_variance * I.
  static KalmanState from_observation(const PoseVector& observation, double initial_variance = 10.0);
};

struct FilterSettings {
  /// Process noise variance fed to white_noise_cov.
  double process_sigma2 = 0.1;
  /// Isotropic observation noise: R = v * I.
  double observation_noise = 5.0;
  /// Step length in prediction steps.
  double dt = 1.0;

  void validate() const;

  static FilterSettings slow() { return {0.1, 5.0, 1.0}; }
  static FilterSettings fast() { return {3.0, 1.0, 1.0}; }
};

/// Block-diagonal process covariance: 12 blocks of sigma2 * [[dt^4/4, dt^3/2], [dt^3/2, dt^2]].
StateMatrix white_noise_cov(double sigma2, double dt);
/// Constant-velocity transition, per block [[1, dt], [0, 1]].
StateMatrix transition_matrix(double dt);

KalmanState predict(const KalmanState& state, const FilterSettings& settings);

struct UpdateResult {
  KalmanState state;
  /// L2 norm of the 12-D innovation (observation minus predicted positions).
  double residual_norm = 0.0;
};

/// Standard Kalman update observing the 12 positions. Uses the Joseph form and
/// re-symmetrises the covariance. Throws std::invalid_argument for a
/// non-finite observation.
UpdateResult update(const KalmanState& state, const PoseVector& observation,
                    const FilterSettings& settings);

/// Stateful wrapper: the first observation initialises, later ones run predict + update.
class PoseFilter {
 public:
  explicit PoseFilter(FilterSettings settings = FilterSettings::slow()) : settings_(settings) {
    settings_.validate();
  }

  PoseVector filter(const PoseVector& observation);

  const FilterSettings& settings() const noexcept { return settings_; }
  void set_settings(const FilterSettings& settings);
  double last_residual() const noexcept { return last_residual_; }
  const std::optional<KalmanState>& state() const noexcept { return state_; }
  void reset() { state_.reset(); last_residual_ = 0.0; }

 private:
  FilterSettings settings_;
  std::optional<KalmanState> state_;
  double last_residual_ = 0.0;
};

}  // namespace eventforge
