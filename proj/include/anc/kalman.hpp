#pragma once

// Kalman-filter ANC controller.
//
// State model: the optimal control filter is constant, w(n+1) = w(n) = w_o,
// and the (recovered) disturbance is observed as d(n) = x′ᵀ(n) w_o + e_o(n)
// with observation-noise variance q. With identity transition and zero
// process noise, the recursion below is exactly recursive ridge regression
// with regularization q / p0.

#include "anc/dsp.hpp"
#include "anc/fxlms.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace anc {

template <typename Scalar>
struct BasicKalmanConfig {
  Eigen::Index filter_len = 80;
  Scalar q = Scalar(0.005);
  Scalar p0_scale = Scalar(1);
  /// Optional time-varying observation-noise variance q(n); overrides `q`.
  std::function<Scalar(std::uint64_t)> q_schedule;
};

using KalmanConfig = BasicKalmanConfig<double>;

template <typename Scalar>
struct KalmanOutput {
  Scalar y;  ///< x′ᵀ(n) ŵ(n), the predicted disturbance.
  Scalar e;  ///< d(n) − y, the innovation.
};

template <typename Scalar>
class BasicKalman {
 public:
  explicit BasicKalman(BasicKalmanConfig<Scalar> config)
      : config_(std::move(config)),
        weights_(VectorX<Scalar>::Zero(config_.filter_len > 0 ? config_.filter_len : 1)),
        covariance_(MatrixX<Scalar>::Identity(weights_.size(), weights_.size()) * config_.p0_scale),
        filtref_line_(weights_.size()) {
    if (config_.filter_len < 1) throw std::invalid_argument("kalman: filter length must be >= 1");
    if (!(config_.q > Scalar(0))) throw std::invalid_argument("kalman: q must be positive");
    if (!(config_.p0_scale > Scalar(0))) throw std::invalid_argument("kalman: p0_scale must be positive");
  }

  /// Pushes x′(n) into the regressor line and runs one predict/update cycle.
  KalmanOutput<Scalar> step(Scalar xprime_n, Scalar d_n) {
    if (!std::isfinite(static_cast<double>(xprime_n))) throw std::invalid_argument("kalman: non-finite input");
    filtref_line_.push(xprime_n);
    return update(filtref_line_.contents(), d_n);
  }

  /// One cycle with an explicit regressor vector (does not touch the delay line).
  template <typename Derived>
  KalmanOutput<Scalar> update(const Eigen::MatrixBase<Derived>& xprime, Scalar d_n) {
    if (xprime.size() != weights_.size()) throw std::invalid_argument("kalman: regressor length mismatch");
    if (!xprime.allFinite() || !std::isfinite(static_cast<double>(d_n)))
      throw std::invalid_argument("kalman: non-finite input");

    // Prediction is the identity: ŵ(n) = w(n−1), P(n, n−1) = P(n−1).
    const Scalar y = xprime.dot(weights_);
    const Scalar e = d_n - y;

    const Scalar q = current_q();
    const VectorX<Scalar> px = covariance_ * xprime;
    const Scalar denom = xprime.dot(px) + q;
    if (!(denom > Scalar(0))) throw std::logic_error("kalman: non-positive innovation variance");
    const VectorX<Scalar> gain = px / denom;

    weights_ += gain * e;
    // (I − K x′ᵀ) P = P − K (P x′)ᵀ since P is symmetric.
    covariance_.noalias() -= gain * px.transpose();
    covariance_ = (0.5 * (covariance_ + covariance_.transpose())).eval();
    last_gain_ = gain;
    ++steps_;
    return {y, e};
  }

  const VectorX<Scalar>& weights() const { return weights_; }
  const MatrixX<Scalar>& covariance() const { return covariance_; }
  const VectorX<Scalar>& last_gain() const { return last_gain_; }
  VectorX<Scalar> filtered_reference() const { return filtref_line_.contents(); }
  const BasicKalmanConfig<Scalar>& config() const { return config_; }
  std::uint64_t steps() const { return steps_; }
  Eigen::Index filter_len() const { return weights_.size(); }
  bool diverged() const { return weights_diverged(weights_); }

 private:
  Scalar current_q() const {
    if (!config_.q_schedule) return config_.q;
    const Scalar q = config_.q_schedule(steps_);
    if (!(q > Scalar(0))) throw std::invalid_argument("kalman: q schedule produced a non-positive variance");
    return q;
  }

  BasicKalmanConfig<Scalar> config_;
  VectorX<Scalar> weights_;
  MatrixX<Scalar> covariance_;
  VectorX<Scalar> last_gain_;
  BasicDelayLine<Scalar> filtref_line_;
  std::uint64_t steps_ = 0;
};

using Kalman = BasicKalman<double>;

/// Regularized least squares over the same observations:
/// argmin_w Σ (dᵢ − xᵢᵀ w)² + (q / p0) ‖w‖².
template <typename Scalar>
VectorX<Scalar> kalman_batch_oracle(const MatrixX<Scalar>& regressors, const VectorX<Scalar>& observations, Scalar q,
                                    Scalar p0_scale) {
  if (regressors.rows() < 1) throw std::invalid_argument("batch oracle: need at least one observation");
  if (regressors.rows() != observations.size()) throw std::invalid_argument("batch oracle: row/observation mismatch");
  if (!(q > Scalar(0)) || !(p0_scale > Scalar(0))) throw std::invalid_argument("batch oracle: q and p0 must be positive");
  const Eigen::Index n = regressors.cols();
  MatrixX<Scalar> normal = regressors.transpose() * regressors;
  normal.diagonal().array() += q / p0_scale;
  const Eigen::LLT<MatrixX<Scalar>> llt(normal);
  if (llt.info() != Eigen::Success) throw std::runtime_error("batch oracle: singular normal equations");
  VectorX<Scalar> w = llt.solve(regressors.transpose() * observations);
  if (w.size() != n || !w.allFinite()) throw std::runtime_error("batch oracle: solve failed");
  return w;
}

/// d̂(n) = e(n) + (ŝ ∗ y)(n), with y_history holding recent control outputs
/// newest first.
template <typename Scalar>
Scalar recover_disturbance(Scalar e_n, const BasicDelayLine<Scalar>& y_history,
                           const BasicFirPath<Scalar>& sec_estimate) {
  if (y_history.capacity() < sec_estimate.size())
    throw std::invalid_argument("recover_disturbance: output history shorter than the path estimate");
  return e_n + y_history.convolve(sec_estimate.coefficients);
}

}  // namespace anc
