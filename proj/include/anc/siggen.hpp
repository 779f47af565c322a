#pragma once

#include "anc/dsp.hpp"

#include <cstdint>

namespace anc {

struct ChirpSpec {
  double f0_hz = 20.0;
  double f1_hz = 1600.0;
  double duration_s = 0.25;
  double sample_rate_hz = 16000.0;
};

struct BandpassSpec {
  double low_hz = 0.0;
  double high_hz = 0.0;
  int num_taps = 64;
  int bulk_delay_samples = 0;
};

/// Number of samples in `t = 0 : 1/fs : T`, i.e. round(T·fs) + 1.
Eigen::Index sample_count(double duration_s, double sample_rate_hz);

/// Unit-amplitude linear-sweep cosine, phase zero at t = 0.
Signal linear_chirp(const ChirpSpec& spec);

Signal tone(double freq_hz, double amplitude, double duration_s, double sample_rate_hz);

/// Gaussian noise; mt19937_64 seeded with `seed`, Box–Muller transform.
Signal white_noise(Eigen::Index length, std::uint64_t seed, double variance, double sample_rate_hz = 1.0);

/// Hamming-windowed sinc band-pass (low_hz == 0 gives a low-pass), scaled to
/// unit magnitude at the band center and prefixed with bulk-delay zeros.
FirPath design_bandpass(const BandpassSpec& spec, double sample_rate_hz);

/// |H(e^{jω})| of an FIR at frequency `freq_hz`.
double magnitude_response(const FirPath& path, double freq_hz, double sample_rate_hz);

/// Transition width (Hz) of a Hamming-windowed design with `num_taps` taps.
double hamming_transition_width(int num_taps, double sample_rate_hz);

// Default acoustic paths standing in for the measured primary and secondary
// responses: 20–3200 Hz / 256 taps / 16-sample delay and 200–6000 Hz /
// 128 taps / 8-sample delay.
BandpassSpec default_primary_spec();
BandpassSpec default_secondary_spec();

}  // namespace anc
