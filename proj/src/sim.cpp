#include "anc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anc {

namespace {

constexpr double kMaxReductionDb = 120.0;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Eigen::Index filter_len_of(const ControllerSpec& c) {
  return std::visit([](const auto& s) { return s.filter_len; }, c);
}

double ratio_db(double num, double den) {
  if (den == 0.0) return kMaxReductionDb;
  if (num == 0.0) return -kMaxReductionDb;
  return std::clamp(10.0 * std::log10(num / den), -kMaxReductionDb, kMaxReductionDb);
}

Eigen::Index window_samples(double seconds, double rate, Eigen::Index len) {
  const auto w = static_cast<Eigen::Index>(std::llround(seconds * rate));
  return std::clamp<Eigen::Index>(w, 1, len);
}

struct Recorder {
  Recorder(const SimConfig& config, Eigen::Index len)
      : error(Vector::Zero(len)), innovation(Vector::Zero(len)) {
    for (auto idx : config.tracked_weights) weights.emplace_back(idx, Vector::Zero(len));
  }

  void record(Eigen::Index n, double e, double innov, const Vector& w) {
    error[n] = e;
    innovation[n] = innov;
    for (auto& [idx, trace] : weights) trace[n] = w[idx];
  }

  Vector error;
  Vector innovation;
  std::vector<std::pair<Eigen::Index, Vector>> weights;
};

void run_fxlms(const FxlmsSettings& settings, const Signal& x, const Signal& d, const FirPath& sec,
               const FirPath& sec_est, const SimObserver& observer, Recorder& rec, RunResult& out) {
  Fxlms ctrl(settings.filter_len, sec_est, settings.step_size);
  DelayLine y_line(sec.size());
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    const double y = ctrl.control(x[n]);
    y_line.push(y);
    const double e = d[n] - y_line.convolve(sec.coefficients);
    if (!out.diverged) {
      ctrl.adapt(e);
      if (ctrl.diverged()) {
        out.diverged = true;
        out.diverged_at = n;
      }
    }
    rec.record(n, e, e, ctrl.weights());
    if (observer.on_fxlms_step) observer.on_fxlms_step(n, ctrl);
  }
  out.final_weights = ctrl.weights();
}

void run_kalman(const KalmanSettings& settings, const Signal& x, const Signal& d, const FirPath& sec,
                const FirPath& sec_est, const SimObserver& observer, Recorder& rec, RunResult& out) {
  KalmanConfig kc;
  kc.filter_len = settings.filter_len;
  kc.q = settings.q;
  kc.p0_scale = settings.p0_scale;
  kc.q_schedule = settings.q_schedule;
  Kalman kf(kc);

  const bool recovered = settings.disturbance_mode == DisturbanceMode::recovered;
  std::optional<Signal> precomputed;
  if (settings.precompute_filtered_reference && !recovered) precomputed = fir_filter(sec_est, x);

  DelayLine sec_line(sec_est.size());
  DelayLine ref_line(settings.filter_len);
  DelayLine y_line(std::max(sec.size(), sec_est.size()));
  DelayLine frozen_line(settings.filter_len);
  Vector d_hat;
  if (recovered) d_hat = Vector::Zero(x.size());

  for (Eigen::Index n = 0; n < x.size(); ++n) {
    sec_line.push(x[n]);
    const double xprime = precomputed ? (*precomputed)[n] : sec_line.convolve(sec_est.coefficients);

    double e_mic = 0.0;
    double observation = d[n];
    if (recovered) {
      ref_line.push(x[n]);
      double y = 0.0;
      for (Eigen::Index k = 0; k < kf.filter_len(); ++k) y += kf.weights()[k] * ref_line.at(k);
      y_line.push(y);
      e_mic = d[n] - y_line.convolve(sec.coefficients);
      observation = recover_disturbance(e_mic, y_line, sec_est);
      d_hat[n] = observation;
    }

    frozen_line.push(xprime);
    if (out.diverged) {
      // Adaptation stopped: report the a-priori error with the last weights.
      const double innov = observation - frozen_line.convolve(kf.weights());
      rec.record(n, recovered ? e_mic : innov, innov, kf.weights());
      continue;
    }

    const auto step = kf.step(xprime, observation);
    if (kf.diverged()) {
      out.diverged = true;
      out.diverged_at = n;
    }
    rec.record(n, recovered ? e_mic : step.e, step.e, kf.weights());
    if (observer.on_kalman_step) observer.on_kalman_step(n, kf);
  }
  out.final_weights = kf.weights();
  if (recovered) out.recovered_disturbance = Signal(std::move(d_hat), x.sample_rate_hz);
}

}  // namespace

FirPath realize_path(const PathSpec& spec, double sample_rate_hz) {
  return std::visit(overloaded{[&](const BandpassSpec& b) { return design_bandpass(b, sample_rate_hz); },
                               [](const FirPath& p) { return p; }},
                    spec);
}

Signal generate_source(const SimConfig& config) {
  return std::visit(
      overloaded{
          [&](const ChirpSource& c) {
            return linear_chirp({c.f0_hz, c.f1_hz, config.duration_s, config.sample_rate_hz});
          },
          [&](const ToneSource& t) { return tone(t.freq_hz, t.amplitude, config.duration_s, config.sample_rate_hz); },
          [&](const NoiseSource& w) {
            return white_noise(sample_count(config.duration_s, config.sample_rate_hz), config.seed, w.variance,
                               config.sample_rate_hz);
          }},
      config.source);
}

void validate(const SimConfig& config) {
  if (!(config.sample_rate_hz > 0.0)) throw std::invalid_argument("sample_rate_hz must be positive");
  if (!(config.duration_s > 0.0)) throw std::invalid_argument("duration_s must be positive");
  const Eigen::Index n_taps = filter_len_of(config.controller);
  if (n_taps < 1) throw std::invalid_argument("controller filter_len must be >= 1");
  if (config.duration_s * config.sample_rate_hz < static_cast<double>(n_taps))
    throw std::invalid_argument("duration_s * sample_rate_hz must be >= filter_len");
  for (auto idx : config.tracked_weights)
    if (idx < 0 || idx >= n_taps) throw std::invalid_argument("tracked weight index out of range");
  if (!std::isfinite(config.sec_estimate_mismatch))
    throw std::invalid_argument("sec_estimate_mismatch must be finite");
  std::visit(overloaded{[](const FxlmsSettings& f) {
                          if (!(f.step_size > 0.0)) throw std::invalid_argument("fxlms step_size must be positive");
                        },
                        [](const KalmanSettings& k) {
                          if (!(k.q > 0.0)) throw std::invalid_argument("kalman q must be positive");
                          if (!(k.p0_scale > 0.0)) throw std::invalid_argument("kalman p0_scale must be positive");
                        }},
             config.controller);
}

RunResult run_simulation(const SimConfig& config, const SimObserver& observer) {
  validate(config);
  RunResult out;
  out.reference = generate_source(config);
  const FirPath primary = realize_path(config.primary_path, config.sample_rate_hz);
  const FirPath secondary = realize_path(config.secondary_path, config.sample_rate_hz);
  const FirPath sec_est(secondary.coefficients * config.sec_estimate_mismatch);
  out.disturbance = fir_filter(primary, out.reference);

  const Eigen::Index len = out.reference.size();
  Recorder rec(config, len);
  std::visit(overloaded{[&](const FxlmsSettings& f) {
                          run_fxlms(f, out.reference, out.disturbance, secondary, sec_est, observer, rec, out);
                        },
                        [&](const KalmanSettings& k) {
                          run_kalman(k, out.reference, out.disturbance, secondary, sec_est, observer, rec, out);
                        }},
             config.controller);

  const double fs = config.sample_rate_hz;
  out.error = Signal(std::move(rec.error), fs);
  out.innovation = Signal(std::move(rec.innovation), fs);
  for (auto& [idx, trace] : rec.weights) out.weight_traces.emplace_back(idx, Signal(std::move(trace), fs));
  out.metrics = compute_metrics(out.disturbance, out.error, config.metrics);
  return out;
}

double noise_reduction_db(const Signal& d, const Signal& e, Eigen::Index begin, Eigen::Index end) {
  if (d.size() != e.size()) throw std::invalid_argument("noise_reduction_db: length mismatch");
  if (begin < 0 || end > d.size() || begin >= end) throw std::invalid_argument("noise_reduction_db: empty window");
  const double pd = d.samples.segment(begin, end - begin).squaredNorm();
  const double pe = e.samples.segment(begin, end - begin).squaredNorm();
  if (pd == 0.0) throw std::invalid_argument("silent disturbance");
  if (pe == 0.0) return kMaxReductionDb;
  return 10.0 * std::log10(pd / pe);
}

std::optional<double> convergence_time(const Signal& e, const Signal& d, double threshold_db, double window_s,
                                       double hysteresis_db) {
  if (d.size() != e.size()) throw std::invalid_argument("convergence_time: length mismatch");
  const Eigen::Index len = e.size();
  if (len == 0) return std::nullopt;
  const Eigen::Index w = window_samples(window_s, e.sample_rate_hz, len);

  // Windowed reduction for each window end, scanned backwards so the
  // "held for the remainder" condition is a single pass.
  std::optional<Eigen::Index> candidate;
  for (Eigen::Index end = len - 1; end >= w - 1; --end) {
    const Eigen::Index begin = end - w + 1;
    const double pd = d.samples.segment(begin, w).squaredNorm();
    const double pe = e.samples.segment(begin, w).squaredNorm();
    const double nr = ratio_db(pd, pe);
    if (nr < threshold_db - hysteresis_db) break;
    if (nr >= threshold_db) candidate = end;
  }
  if (!candidate) return std::nullopt;
  return static_cast<double>(*candidate) / e.sample_rate_hz;
}

Metrics compute_metrics(const Signal& d, const Signal& e, const MetricSettings& settings) {
  if (d.size() != e.size()) throw std::invalid_argument("compute_metrics: length mismatch");
  Metrics m;
  const Eigen::Index len = e.size();
  if (len == 0) return m;
  const double fs = e.sample_rate_hz;
  const Eigen::Index w = window_samples(settings.final_window_s, fs, len);
  const Eigen::Index begin = len - w;
  m.final_window_mse = e.samples.tail(w).squaredNorm() / static_cast<double>(w);
  if (d.samples.tail(w).squaredNorm() > 0.0) m.noise_reduction_db = noise_reduction_db(d, e, begin, len);
  m.convergence_time_s = convergence_time(e, d, settings.convergence_threshold_db, settings.convergence_window_s,
                                          settings.hysteresis_db);

  const double total = e.samples.squaredNorm();
  if (total > 0.0) {
    double acc = 0.0;
    for (Eigen::Index n = 0; n < len; ++n) {
      acc += e[n] * e[n];
      if (acc >= 0.9 * total) {
        m.energy_decay_90_s = static_cast<double>(n) / fs;
        break;
      }
    }
  }
  return m;
}

}  // namespace anc
