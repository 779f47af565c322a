#pragma once

// Filtered-x LMS feed-forward controller.

#include "anc/dsp.hpp"

#include <cmath>
#include <stdexcept>

namespace anc {

/// Magnitude above which a weight vector is considered blown up.
inline constexpr double kDivergenceLimit = 1e6;

template <typename Scalar>
bool weights_diverged(const VectorX<Scalar>& w) {
  return !w.allFinite() || (w.size() > 0 && w.cwiseAbs().maxCoeff() > Scalar(kDivergenceLimit));
}

template <typename Scalar>
class BasicFxlms {
 public:
  BasicFxlms(Eigen::Index filter_len, BasicFirPath<Scalar> sec_estimate, Scalar step_size)
      : weights_(VectorX<Scalar>::Zero(filter_len > 0 ? filter_len : 1)),
        ref_line_(filter_len > 0 ? filter_len : 1),
        filtref_line_(filter_len > 0 ? filter_len : 1),
        sec_est_line_(sec_estimate.size()),
        sec_estimate_(std::move(sec_estimate)),
        step_size_(step_size) {
    if (filter_len < 1) throw std::invalid_argument("fxlms: filter length must be >= 1");
    if (!(step_size > Scalar(0))) throw std::invalid_argument("fxlms: step size must be positive");
  }

  /// Consumes the reference sample x(n) and returns y(n) = wᵀ(n) x(n).
  /// Also advances the filtered reference x′(n) = (ŝ ∗ x)(n).
  Scalar control(Scalar x_n) {
    ref_line_.push(x_n);
    sec_est_line_.push(x_n);
    filtref_line_.push(sec_est_line_.convolve(sec_estimate_.coefficients));
    Scalar y = Scalar(0);
    for (Eigen::Index k = 0; k < weights_.size(); ++k) y += weights_[k] * ref_line_.at(k);
    return y;
  }

  /// w(n+1) = w(n) + μ e(n) x′(n), with e(n) = d(n) − (s ∗ y)(n).
  void adapt(Scalar e_n) {
    if (!std::isfinite(static_cast<double>(e_n))) throw std::invalid_argument("fxlms: non-finite error sample");
    const Scalar g = step_size_ * e_n;
    for (Eigen::Index k = 0; k < weights_.size(); ++k) weights_[k] += g * filtref_line_.at(k);
  }

  const VectorX<Scalar>& weights() const { return weights_; }
  VectorX<Scalar>& weights() { return weights_; }
  VectorX<Scalar> reference() const { return ref_line_.contents(); }
  VectorX<Scalar> filtered_reference() const { return filtref_line_.contents(); }
  Scalar current_filtered_reference() const { return filtref_line_.at(0); }
  const BasicFirPath<Scalar>& sec_estimate() const { return sec_estimate_; }
  Scalar step_size() const { return step_size_; }
  Eigen::Index filter_len() const { return weights_.size(); }
  bool diverged() const { return weights_diverged(weights_); }

 private:
  VectorX<Scalar> weights_;
  BasicDelayLine<Scalar> ref_line_;
  BasicDelayLine<Scalar> filtref_line_;
  BasicDelayLine<Scalar> sec_est_line_;
  BasicFirPath<Scalar> sec_estimate_;
  Scalar step_size_;
};

using Fxlms = BasicFxlms<double>;

struct StepBound {
  double lambda_max = 0.0;
  Eigen::Index group_delay_samples = 1;
  double mu_max = 0.0;
};

inline StepBound step_bound_from(double lambda_max, Eigen::Index group_delay) {
  if (!(lambda_max > 0.0)) throw std::invalid_argument("step bound: lambda_max must be positive");
  if (group_delay < 1) throw std::invalid_argument("step bound: group delay must be >= 1");
  return {lambda_max, group_delay, 1.0 / (lambda_max * static_cast<double>(group_delay))};
}

/// 0 < μ < 1 / (λ_max D_s), λ_max from the order×order autocorrelation of x′.
inline StepBound step_size_bound(const Signal& filtered_ref, Eigen::Index order, Eigen::Index group_delay,
                                 double tol = 1e-9) {
  const Matrix r = autocorr_matrix(filtered_ref, order);
  return step_bound_from(max_eigenvalue(r, tol), group_delay);
}

/// Index of the largest-magnitude tap. Ties (within 1e-12 relative) fall back
/// to the rounded energy centroid, which lands between the two central taps of
/// an even-length symmetric design.
inline Eigen::Index group_delay_estimate(const FirPath& path) {
  const auto& c = path.coefficients;
  Eigen::Index peak = 0;
  const double peak_mag = c.cwiseAbs().maxCoeff(&peak);
  if (peak_mag == 0.0) throw std::invalid_argument("group_delay_estimate: all-zero path");
  int ties = 0;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) >= peak_mag * (1.0 - 1e-12)) ++ties;
  if (ties == 1) return peak;
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    num += static_cast<double>(i) * c[i] * c[i];
    den += c[i] * c[i];
  }
  return static_cast<Eigen::Index>(std::llround(num / den));
}

}  // namespace anc
