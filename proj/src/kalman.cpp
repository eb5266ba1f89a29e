#include "eventforge/kalman.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace eventforge {

using ObservationMatrix = Eigen::Matrix<double, kPoseDim, kPoseDim>;
using GainMatrix = Eigen::Matrix<double, kStateDim, kPoseDim>;

PoseVector KalmanState::positions() const {
  PoseVector pose;
  for (int i = 0; i < kPoseDim; ++i) pose[static_cast<std::size_t>(i)] = state(2 * i);
  return pose;
}

KalmanState KalmanState::from_observation(const PoseVector& observation, double initial_variance) {
  KalmanState s;
  s.state.setZero();
  for (int i = 0; i < kPoseDim; ++i) s.state(2 * i) = observation[static_cast<std::size_t>(i)];
  s.covariance = initial_variance * StateMatrix::Identity();
  return s;
}

void FilterSettings::validate() const {
  if (!(process_sigma2 >= 0.0)) throw std::invalid_argument("process noise variance must be >= 0");
  if (!(observation_noise > 0.0)) throw std::invalid_argument("observation noise must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
}

StateMatrix white_noise_cov(double sigma2, double dt) {
  StateMatrix q = StateMatrix::Zero();
  const double dt2 = dt * dt;
  const double pp = 0.25 * dt2 * dt2;
  const double pv = 0.5 * dt2 * dt;
  for (int i = 0; i < kPoseDim; ++i) {
    q(2 * i, 2 * i) = sigma2 * pp;
    q(2 * i, 2 * i + 1) = sigma2 * pv;
    q(2 * i + 1, 2 * i) = sigma2 * pv;
    q(2 * i + 1, 2 * i + 1) = sigma2 * dt2;
  }
  return q;
}

StateMatrix transition_matrix(double dt) {
  StateMatrix f = StateMatrix::Identity();
  for (int i = 0; i < kPoseDim; ++i) f(2 * i, 2 * i + 1) = dt;
  return f;
}

KalmanState predict(const KalmanState& state, const FilterSettings& settings) {
  settings.validate();
  const StateMatrix f = transition_matrix(settings.dt);
  KalmanState out;
  out.state = f * state.state;
  out.covariance = f * state.covariance * f.transpose() + white_noise_cov(settings.process_sigma2, settings.dt);
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  return out;
}

UpdateResult update(const KalmanState& state, const PoseVector& observation, const FilterSettings& settings) {
  settings.validate();
  if (!observation.finite()) throw std::invalid_argument("observation contains non-finite values");

  ObservationVector innovation;
  GainMatrix p_ht;  // P * H^T: the position columns of P.
  ObservationMatrix s;
  for (int j = 0; j < kPoseDim; ++j) {
    innovation(j) = observation[static_cast<std::size_t>(j)] - state.state(2 * j);
    p_ht.col(j) = state.covariance.col(2 * j);
  }
  for (int i = 0; i < kPoseDim; ++i) {
    for (int j = 0; j < kPoseDim; ++j) s(i, j) = state.covariance(2 * i, 2 * j);
  }
  s.diagonal().array() += settings.observation_noise;

  // K = P H^T S^-1, solved as S K^T = H P.
  const GainMatrix gain = s.ldlt().solve(p_ht.transpose()).transpose();

  UpdateResult result;
  result.residual_norm = innovation.norm();
  result.state.state = state.state + gain * innovation;

  StateMatrix i_kh = StateMatrix::Identity();
  for (int j = 0; j < kPoseDim; ++j) i_kh.col(2 * j) -= gain.col(j);
  StateMatrix p = i_kh * state.covariance * i_kh.transpose() +
                  settings.observation_noise * gain * gain.transpose();
  result.state.covariance = 0.5 * (p + p.transpose());
  return result;
}

PoseVector PoseFilter::filter(const PoseVector& observation) {
  if (!state_) {
    if (!observation.finite()) throw std::invalid_argument("observation contains non-finite values");
    state_ = KalmanState::from_observation(observation);
    last_residual_ = 0.0;
    return observation;
  }
  UpdateResult r = update(predict(*state_, settings_), observation, settings_);
  state_ = r.state;
  last_residual_ = r.residual_norm;
  return state_->positions();
}

void PoseFilter::set_settings(const FilterSettings& settings) {
  settings.validate();
  settings_ = settings;
}

}  // namespace eventforge
