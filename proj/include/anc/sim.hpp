#pragma once

// Closed-loop single-channel ANC simulation and comparison metrics.

#include "anc/dsp.hpp"
#include "anc/fxlms.hpp"
#include "anc/kalman.hpp"
#include "anc/siggen.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace anc {

struct ChirpSource {
  double f0_hz = 20.0;
  double f1_hz = 1600.0;
};

struct ToneSource {
  double freq_hz = 200.0;
  double amplitude = 1.0;
};

struct NoiseSource {
  double variance = 1.0;
};

using Source = std::variant<ChirpSource, ToneSource, NoiseSource>;

/// Either a band-pass design or explicit taps.
using PathSpec = std::variant<BandpassSpec, FirPath>;

struct FxlmsSettings {
  Eigen::Index filter_len = 80;
  double step_size = 0.0005;
};

/// Where the Kalman update takes its observation from.
///  - ideal: the true disturbance d(n), with e(n) = d(n) − x′ᵀŵ (open loop).
///  - recovered: the anti-noise is applied through the secondary path and
///    d̂(n) = e(n) + (ŝ ∗ y)(n) is reconstructed from the error microphone.
enum class DisturbanceMode { ideal, recovered };

struct KalmanSettings {
  Eigen::Index filter_len = 80;
  double q = 0.005;
  double p0_scale = 1.0;
  DisturbanceMode disturbance_mode = DisturbanceMode::ideal;
  /// Ideal mode only: take x′ from `fir_filter(Ŝ, x)` over the whole record
  /// instead of filtering sample by sample.
  bool precompute_filtered_reference = false;
  std::function<double(std::uint64_t)> q_schedule;
};

using ControllerSpec = std::variant<FxlmsSettings, KalmanSettings>;

struct MetricSettings {
  double final_window_s = 0.05;
  double convergence_window_s = 0.01;
  double convergence_threshold_db = 20.0;
  double hysteresis_db = 3.0;
};

struct SimConfig {
  double sample_rate_hz = 16000.0;
  double duration_s = 0.25;
  std::uint64_t seed = 0;
  Source source = ChirpSource{};
  PathSpec primary_path = default_primary_spec();
  PathSpec secondary_path = default_secondary_spec();
  /// Ŝ = mismatch · S; 1.0 is a perfect estimate.
  double sec_estimate_mismatch = 1.0;
  ControllerSpec controller = KalmanSettings{};
  /// 0-based weight indices recorded every sample.
  std::vector<Eigen::Index> tracked_weights{4, 59};
  MetricSettings metrics;
};

struct Metrics {
  double final_window_mse = 0.0;
  /// Absent when the disturbance is silent over the final window.
  std::optional<double> noise_reduction_db;
  /// Absent ("never") when the threshold is not reached and held.
  std::optional<double> convergence_time_s;
  /// Time at which the cumulative error energy reaches 90% of its total.
  std::optional<double> energy_decay_90_s;
};

struct RunResult {
  Signal reference;
  Signal disturbance;
  Signal error;
  /// Controller a-priori error: e(n) for FxLMS, d(n) − x′ᵀŵ for Kalman.
  Signal innovation;
  /// d̂(n); only filled in recovered Kalman mode.
  Signal recovered_disturbance;
  std::vector<std::pair<Eigen::Index, Signal>> weight_traces;
  Vector final_weights;
  bool diverged = false;
  std::optional<Eigen::Index> diverged_at;
  Metrics metrics;
};

struct SimObserver {
  std::function<void(Eigen::Index, const Kalman&)> on_kalman_step;
  std::function<void(Eigen::Index, const Fxlms&)> on_fxlms_step;
};

FirPath realize_path(const PathSpec& spec, double sample_rate_hz);
Signal generate_source(const SimConfig& config);

/// Checks the config invariants; throws std::invalid_argument naming the problem.
void validate(const SimConfig& config);

RunResult run_simulation(const SimConfig& config, const SimObserver& observer = {});

/// 10·log10(Σ d² / Σ e²) over [begin, end); 120 dB when Σ e² = 0.
double noise_reduction_db(const Signal& d, const Signal& e, Eigen::Index begin, Eigen::Index end);

/// Earliest time (end of a trailing window) from which the windowed noise
/// reduction reaches `threshold_db` and never drops more than `hysteresis_db`
/// below it afterwards.
std::optional<double> convergence_time(const Signal& e, const Signal& d, double threshold_db,
                                       double window_s = 0.01, double hysteresis_db = 3.0);

Metrics compute_metrics(const Signal& d, const Signal& e, const MetricSettings& settings);

}  // namespace anc
