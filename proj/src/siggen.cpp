#include "anc/siggen.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

namespace anc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

Eigen::Index sample_count(double duration_s, double sample_rate_hz) {
  if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0))
    throw std::invalid_argument("duration and sample rate must be positive");
  return static_cast<Eigen::Index>(std::llround(duration_s * sample_rate_hz)) + 1;
}

Signal linear_chirp(const ChirpSpec& spec) {
  if (!(spec.sample_rate_hz > 0.0)) throw std::invalid_argument("chirp: sample rate must be positive");
  if (!(spec.duration_s > 0.0) || spec.duration_s * spec.sample_rate_hz < 1.0)
    throw std::invalid_argument("chirp: duration must cover at least one sample");
  if (spec.f0_hz < 0.0 || !(spec.f1_hz > 0.0)) throw std::invalid_argument("chirp: invalid frequencies");
  const double nyquist = spec.sample_rate_hz / 2.0;
  if (spec.f1_hz >= nyquist || spec.f0_hz >= nyquist) throw std::invalid_argument("chirp: frequency above Nyquist");

  const Eigen::Index n = sample_count(spec.duration_s, spec.sample_rate_hz);
  const double sweep = (spec.f1_hz - spec.f0_hz) / (2.0 * spec.duration_s);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.sample_rate_hz;
    x[i] = std::cos(kTwoPi * (spec.f0_hz * t + sweep * t * t));
  }
  return Signal(std::move(x), spec.sample_rate_hz);
}

Signal tone(double freq_hz, double amplitude, double duration_s, double sample_rate_hz) {
  if (freq_hz < 0.0 || freq_hz >= sample_rate_hz / 2.0) throw std::invalid_argument("tone: frequency above Nyquist");
  const Eigen::Index n = sample_count(duration_s, sample_rate_hz);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate_hz;
    x[i] = amplitude * std::cos(kTwoPi * freq_hz * t);
  }
  return Signal(std::move(x), sample_rate_hz);
}

Signal white_noise(Eigen::Index length, std::uint64_t seed, double variance, double sample_rate_hz) {
  if (length < 1) throw std::invalid_argument("white_noise: length must be >= 1");
  if (variance < 0.0) throw std::invalid_argument("white_noise: variance must be >= 0");
  std::mt19937_64 rng(seed);
  // 53-bit uniform in (0, 1]; avoids log(0) in Box–Muller.
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  const double sigma = std::sqrt(variance);
  Vector x(length);
  for (Eigen::Index i = 0; i < length; i += 2) {
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = kTwoPi * uniform();
    x[i] = sigma * r * std::cos(theta);
    if (i + 1 < length) x[i + 1] = sigma * r * std::sin(theta);
  }
  return Signal(std::move(x), sample_rate_hz);
}

double magnitude_response(const FirPath& path, double freq_hz, double sample_rate_hz) {
  const double omega = kTwoPi * freq_hz / sample_rate_hz;
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index k = 0; k < path.size(); ++k) acc += path[k] * std::polar(1.0, -omega * static_cast<double>(k));
  return std::abs(acc);
}

double hamming_transition_width(int num_taps, double sample_rate_hz) { return 3.3 * sample_rate_hz / num_taps; }

FirPath design_bandpass(const BandpassSpec& spec, double sample_rate_hz) {
  if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("design_bandpass: sample rate must be positive");
  if (spec.num_taps < 1) throw std::invalid_argument("design_bandpass: num_taps must be >= 1");
  if (spec.bulk_delay_samples < 0) throw std::invalid_argument("design_bandpass: negative bulk delay");
  if (!(spec.low_hz >= 0.0 && spec.low_hz < spec.high_hz && spec.high_hz < sample_rate_hz / 2.0))
    throw std::invalid_argument("design_bandpass: band edges must satisfy 0 <= low < high < fs/2");

  const int m = spec.num_taps;
  const double f_lo = spec.low_hz / sample_rate_hz;
  const double f_hi = spec.high_hz / sample_rate_hz;
  const double center = 0.5 * static_cast<double>(m - 1);

  Vector taps(m);
  for (int n = 0; n < m; ++n) {
    const double k = static_cast<double>(n) - center;
    const double ideal = 2.0 * f_hi * sinc(2.0 * f_hi * k) - 2.0 * f_lo * sinc(2.0 * f_lo * k);
    const double window = m == 1 ? 1.0 : 0.54 - 0.46 * std::cos(kTwoPi * n / static_cast<double>(m - 1));
    taps[n] = ideal * window;
  }

  const double ref_hz = spec.low_hz == 0.0 ? 0.0 : 0.5 * (spec.low_hz + spec.high_hz);
  const double gain = magnitude_response(FirPath(taps), ref_hz, sample_rate_hz);
  if (!(gain > 0.0)) throw std::invalid_argument("design_bandpass: degenerate design");
  taps /= gain;

  Vector out = Vector::Zero(spec.bulk_delay_samples + m);
  out.tail(m) = taps;
  return FirPath(std::move(out));
}

BandpassSpec default_primary_spec() { return {20.0, 3200.0, 256, 16}; }
BandpassSpec default_secondary_spec() { return {200.0, 6000.0, 128, 8}; }

}  // namespace anc
