#pragma once

// Core sample-domain types and FIR/correlation primitives.
//
// Everything here is templated on the scalar type and header-only; the rest
// of the library instantiates it with double.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>

namespace anc {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Uniformly sampled real sequence.
template <typename Scalar>
struct BasicSignal {
  VectorX<Scalar> samples;
  double sample_rate_hz = 1.0;

  BasicSignal() = default;
  BasicSignal(VectorX<Scalar> s, double rate) : samples(std::move(s)), sample_rate_hz(rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("sample rate must be positive");
  }

  Eigen::Index size() const { return samples.size(); }
  bool empty() const { return samples.size() == 0; }
  Scalar operator[](Eigen::Index n) const { return samples[n]; }
  double time_of(Eigen::Index n) const { return static_cast<double>(n) / sample_rate_hz; }
};

/// Finite impulse response, tap 0 first.
template <typename Scalar>
struct BasicFirPath {
  VectorX<Scalar> coefficients;

  BasicFirPath() : coefficients(VectorX<Scalar>::Ones(1)) {}
  explicit BasicFirPath(VectorX<Scalar> c) : coefficients(std::move(c)) {
    if (coefficients.size() < 1) throw std::invalid_argument("FIR path needs at least one tap");
    if (!coefficients.allFinite()) throw std::invalid_argument("FIR path has non-finite taps");
  }

  Eigen::Index size() const { return coefficients.size(); }
  Scalar operator[](Eigen::Index i) const { return coefficients[i]; }

  static BasicFirPath impulse(Eigen::Index delay, Scalar gain = Scalar(1)) {
    VectorX<Scalar> c = VectorX<Scalar>::Zero(delay + 1);
    c[delay] = gain;
    return BasicFirPath(std::move(c));
  }
};

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;
using Signal = BasicSignal<double>;
using FirPath = BasicFirPath<double>;

/// Tapped delay line holding the most recent samples, newest at index 0.
///
/// Backed by a circular buffer; `at(k)` is the sample pushed k steps ago.
/// `contents()` materializes the reverse-chronological vector.
template <typename Scalar>
class BasicDelayLine {
 public:
  explicit BasicDelayLine(Eigen::Index capacity) : buf_(VectorX<Scalar>::Zero(capacity)) {
    if (capacity < 1) throw std::invalid_argument("delay line capacity must be >= 1");
  }

  void push(Scalar sample) {
    head_ = (head_ == 0 ? buf_.size() : head_) - 1;
    buf_[head_] = sample;
  }

  Scalar at(Eigen::Index k) const {
    Eigen::Index i = head_ + k;
    if (i >= buf_.size()) i -= buf_.size();
    return buf_[i];
  }

  Eigen::Index capacity() const { return buf_.size(); }

  VectorX<Scalar> contents() const {
    VectorX<Scalar> out(buf_.size());
    const Eigen::Index tail = buf_.size() - head_;
    out.head(tail) = buf_.segment(head_, tail);
    out.tail(head_) = buf_.head(head_);
    return out;
  }

  /// Σ taps[k] · at(k) over the shorter of the two lengths, k ascending.
  template <typename Derived>
  Scalar convolve(const Eigen::MatrixBase<Derived>& taps) const {
    const Eigen::Index len = std::min<Eigen::Index>(taps.size(), buf_.size());
    Scalar acc = Scalar(0);
    for (Eigen::Index k = 0; k < len; ++k) acc += taps[k] * at(k);
    return acc;
  }

  void clear() {
    buf_.setZero();
    head_ = 0;
  }

 private:
  VectorX<Scalar> buf_;
  Eigen::Index head_ = 0;
};

using DelayLine = BasicDelayLine<double>;

template <typename Scalar>
BasicDelayLine<Scalar> delay_push(BasicDelayLine<Scalar> line, Scalar sample) {
  line.push(sample);
  return line;
}

/// Causal convolution truncated to the input length (MATLAB `filter(b, 1, x)`).
template <typename Scalar>
BasicSignal<Scalar> fir_filter(const BasicFirPath<Scalar>& path, const BasicSignal<Scalar>& input) {
  if (input.empty()) throw std::invalid_argument("empty signal");
  const auto& b = path.coefficients;
  const auto& x = input.samples;
  const Eigen::Index n_taps = b.size();
  VectorX<Scalar> y(x.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const Eigen::Index last = std::min<Eigen::Index>(n, n_taps - 1);
    Scalar acc = Scalar(0);
    for (Eigen::Index i = 0; i <= last; ++i) acc += b[i] * x[n - i];
    y[n] = acc;
  }
  return BasicSignal<Scalar>(std::move(y), input.sample_rate_hz);
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar dot(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return a.dot(b);
}

/// Biased Toeplitz estimate of the order×order autocorrelation matrix.
template <typename Scalar>
MatrixX<Scalar> autocorr_matrix(const BasicSignal<Scalar>& signal, Eigen::Index order) {
  if (order < 1) throw std::invalid_argument("autocorr_matrix: order must be positive");
  const Eigen::Index m = signal.size();
  if (m < order) throw std::invalid_argument("autocorr_matrix: signal shorter than order");
  const auto& x = signal.samples;
  VectorX<Scalar> lag(order);
  for (Eigen::Index k = 0; k < order; ++k) {
    lag[k] = x.tail(m - k).dot(x.head(m - k)) / static_cast<Scalar>(m);
  }
  MatrixX<Scalar> r(order, order);
  for (Eigen::Index i = 0; i < order; ++i)
    for (Eigen::Index j = 0; j < order; ++j) r(i, j) = lag[std::abs(i - j)];
  return r;
}

/// Largest (algebraic) eigenvalue of a symmetric matrix by shifted power
/// iteration.
///
/// The Gershgorin radius is used as the shift so A + σI is positive
/// semidefinite and its dominant eigenvalue is λ_max + σ.
template <typename Derived>
typename Derived::Scalar max_eigenvalue(const Eigen::MatrixBase<Derived>& a, typename Derived::Scalar tol,
                                        int max_iterations = 200000) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n) throw std::invalid_argument("max_eigenvalue: matrix must be square and non-empty");
  const Scalar scale = std::max<Scalar>(a.cwiseAbs().maxCoeff(), std::numeric_limits<Scalar>::min());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("max_eigenvalue: matrix is not symmetric");
  if (n == 1) return a(0, 0);

  const Scalar shift = a.cwiseAbs().rowwise().sum().maxCoeff();
  MatrixX<Scalar> shifted = a;
  shifted.diagonal().array() += shift;

  // Deterministic start vector with components along every axis.
  VectorX<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Scalar(1) + Scalar(i) / Scalar(n);
  v.normalize();

  // Stops once the residual ‖Av − ρv‖ (a bound on the distance from ρ to the
  // spectrum) falls below tol relative to the matrix scale.
  Scalar rho = Scalar(0);
  for (int it = 0; it < max_iterations; ++it) {
    const VectorX<Scalar> w = shifted * v;
    rho = v.dot(w);
    if ((w - rho * v).norm() <= tol * std::max(std::abs(rho - shift), scale)) break;
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) break;
    v = w / norm;
  }
  return rho - shift;
}

}  // namespace anc
