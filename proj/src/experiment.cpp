#include "anc/experiment.hpp"

#include "anc/io.hpp"

#include <fstream>
#include <set>

namespace anc {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
  }
}

std::string type_of(const json& obj, const std::string& where) {
  if (!obj.is_object() || !obj.contains("type") || !obj.at("type").is_string())
    throw ConfigError(where + ": missing string key 'type'");
  return obj.at("type").get<std::string>();
}

Source parse_source(const json& j, const std::string& where) {
  const std::string type = type_of(j, where);
  if (type == "chirp") {
    check_keys(j, {"type", "f0_hz", "f1_hz"}, where);
    return ChirpSource{get_or(j, "f0_hz", 20.0, where), get_or(j, "f1_hz", 1600.0, where)};
  }
  if (type == "tone") {
    check_keys(j, {"type", "freq_hz", "amplitude"}, where);
    return ToneSource{get_or(j, "freq_hz", 200.0, where), get_or(j, "amplitude", 1.0, where)};
  }
  if (type == "white_noise") {
    check_keys(j, {"type", "variance"}, where);
    return NoiseSource{get_or(j, "variance", 1.0, where)};
  }
  throw ConfigError(where + ": unknown source type '" + type + "'");
}

PathSpec parse_path(const json& j, const std::string& where, const std::filesystem::path& base_dir) {
  const std::string type = type_of(j, where);
  if (type == "bandpass") {
    check_keys(j, {"type", "low_hz", "high_hz", "num_taps", "bulk_delay_samples"}, where);
    BandpassSpec b;
    b.low_hz = get_or(j, "low_hz", 0.0, where);
    b.high_hz = get_or(j, "high_hz", 0.0, where);
    b.num_taps = get_or(j, "num_taps", 64, where);
    b.bulk_delay_samples = get_or(j, "bulk_delay_samples", 0, where);
    return b;
  }
  if (type == "taps") {
    check_keys(j, {"type", "taps"}, where);
    const auto taps = get_or(j, "taps", std::vector<double>{}, where);
    if (taps.empty()) throw ConfigError(where + ": 'taps' must be a non-empty array");
    try {
      return FirPath(Eigen::Map<const Vector>(taps.data(), static_cast<Eigen::Index>(taps.size())));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  if (type == "csv") {
    check_keys(j, {"type", "file"}, where);
    std::filesystem::path file = get_or(j, "file", std::string{}, where);
    if (file.is_relative()) file = base_dir / file;
    try {
      return load_path_csv(file);
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": unknown path type '" + type + "'");
}

ControllerSpec parse_controller(const json& j, const std::string& where) {
  const std::string type = type_of(j, where);
  if (type == "fxlms") {
    check_keys(j, {"type", "filter_len", "step_size"}, where);
    return FxlmsSettings{get_or<Eigen::Index>(j, "filter_len", 80, where), get_or(j, "step_size", 0.0005, where)};
  }
  if (type == "kalman") {
    check_keys(j, {"type", "filter_len", "q", "p0_scale", "disturbance_mode", "precompute_filtered_reference"}, where);
    KalmanSettings k;
    k.filter_len = get_or<Eigen::Index>(j, "filter_len", 80, where);
    k.q = get_or(j, "q", 0.005, where);
    k.p0_scale = get_or(j, "p0_scale", 1.0, where);
    k.precompute_filtered_reference = get_or(j, "precompute_filtered_reference", false, where);
    const auto mode = get_or(j, "disturbance_mode", std::string("ideal"), where);
    if (mode == "ideal") {
      k.disturbance_mode = DisturbanceMode::ideal;
    } else if (mode == "recovered") {
      k.disturbance_mode = DisturbanceMode::recovered;
    } else {
      throw ConfigError(where + ": disturbance_mode must be 'ideal' or 'recovered'");
    }
    return k;
  }
  throw ConfigError(where + ": unknown controller type '" + type + "'");
}

MetricSettings parse_metrics(const json& j, const std::string& where) {
  check_keys(j, {"final_window_s", "convergence_window_s", "convergence_threshold_db", "hysteresis_db"}, where);
  MetricSettings m;
  m.final_window_s = get_or(j, "final_window_s", m.final_window_s, where);
  m.convergence_window_s = get_or(j, "convergence_window_s", m.convergence_window_s, where);
  m.convergence_threshold_db = get_or(j, "convergence_threshold_db", m.convergence_threshold_db, where);
  m.hysteresis_db = get_or(j, "hysteresis_db", m.hysteresis_db, where);
  if (!(m.final_window_s > 0.0) || !(m.convergence_window_s > 0.0) || m.hysteresis_db < 0.0)
    throw ConfigError(where + ": windows must be positive and hysteresis non-negative");
  return m;
}

/// Merge `overrides` onto `base`; typed sub-objects with a "type" key replace.
json merge_experiment(json base, const json& overrides) {
  for (const auto& [key, value] : overrides.items()) {
    if (value.is_object() && base.contains(key) && base[key].is_object() && !value.contains("type")) {
      for (const auto& [k, v] : value.items()) base[key][k] = v;
    } else {
      base[key] = value;
    }
  }
  return base;
}

json paper_common() {
  return {
      {"sample_rate_hz", 16000.0},
      {"duration_s", 0.25},
      {"seed", 0},
      {"source", {{"type", "chirp"}, {"f0_hz", 20.0}, {"f1_hz", 1600.0}}},
      {"primary_path",
       {{"type", "bandpass"}, {"low_hz", 20.0}, {"high_hz", 3200.0}, {"num_taps", 256}, {"bulk_delay_samples", 16}}},
      {"secondary_path",
       {{"type", "bandpass"}, {"low_hz", 200.0}, {"high_hz", 6000.0}, {"num_taps", 128}, {"bulk_delay_samples", 8}}},
      {"sec_estimate_mismatch", 1.0},
      {"tracked_weights", {4, 59}},
      {"metrics",
       {{"final_window_s", 0.05}, {"convergence_window_s", 0.01}, {"convergence_threshold_db", 20.0}, {"hysteresis_db", 3.0}}},
  };
}

}  // namespace

const Experiment& ExperimentFile::find(const std::string& name) const {
  for (const auto& e : experiments)
    if (e.name == name) return e;
  throw ConfigError("experiment '" + name + "' not found");
}

std::vector<std::string> preset_names() { return {"paper-fxlms", "paper-kalman", "paper"}; }

json preset_experiment_json(const std::string& name) {
  json j = paper_common();
  if (name == "paper-fxlms") {
    j["controller"] = {{"type", "fxlms"}, {"filter_len", 80}, {"step_size", 0.0005}};
  } else if (name == "paper-kalman") {
    j["controller"] = {{"type", "kalman"}, {"filter_len", 80}, {"q", 0.005}, {"p0_scale", 1.0}, {"disturbance_mode", "ideal"}};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  j["name"] = name;
  return j;
}

ExperimentFile preset_file(const std::string& name) {
  json doc;
  if (name == "paper") {
    doc["experiments"] = json::array({preset_experiment_json("paper-fxlms"), preset_experiment_json("paper-kalman")});
    doc["compare"] = {"paper-fxlms", "paper-kalman"};
  } else {
    doc["experiments"] = json::array({preset_experiment_json(name)});
  }
  return parse_experiment_file(doc);
}

SimConfig parse_sim_config(const json& experiment, const std::filesystem::path& base_dir) {
  const std::string name = experiment.value("name", std::string("?"));
  const std::string where = "experiment '" + name + "'";
  check_keys(experiment,
             {"name", "base", "sample_rate_hz", "duration_s", "seed", "source", "primary_path", "secondary_path",
              "sec_estimate_mismatch", "controller", "tracked_weights", "metrics"},
             where);
  json j = experiment;
  if (j.contains("base")) {
    const auto base = get_or(j, "base", std::string{}, where);
    json merged = preset_experiment_json(base);
    j.erase("base");
    j = merge_experiment(std::move(merged), j);
  }

  SimConfig c;
  c.sample_rate_hz = get_or(j, "sample_rate_hz", c.sample_rate_hz, where);
  c.duration_s = get_or(j, "duration_s", c.duration_s, where);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed, where);
  c.sec_estimate_mismatch = get_or(j, "sec_estimate_mismatch", c.sec_estimate_mismatch, where);
  if (j.contains("source")) c.source = parse_source(j.at("source"), where + ".source");
  if (j.contains("primary_path")) c.primary_path = parse_path(j.at("primary_path"), where + ".primary_path", base_dir);
  if (j.contains("secondary_path"))
    c.secondary_path = parse_path(j.at("secondary_path"), where + ".secondary_path", base_dir);
  if (!j.contains("controller")) throw ConfigError(where + ": missing 'controller'");
  c.controller = parse_controller(j.at("controller"), where + ".controller");
  c.tracked_weights = get_or(j, "tracked_weights", c.tracked_weights, where);
  if (j.contains("metrics")) c.metrics = parse_metrics(j.at("metrics"), where + ".metrics");

  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return c;
}

ExperimentFile parse_experiment_file(const json& doc, const std::filesystem::path& base_dir) {
  check_keys(doc, {"experiments", "compare"}, "experiment file");
  ExperimentFile file;
  if (!doc.contains("experiments") || !doc.at("experiments").is_array() || doc.at("experiments").empty())
    throw ConfigError("no experiments");
  std::set<std::string> names;
  for (const auto& e : doc.at("experiments")) {
    if (!e.is_object() || !e.contains("name") || !e.at("name").is_string())
      throw ConfigError("every experiment needs a string 'name'");
    Experiment ex;
    ex.name = e.at("name").get<std::string>();
    if (ex.name.empty() || ex.name.find_first_of("/\\,") != std::string::npos)
      throw ConfigError("invalid experiment name '" + ex.name + "'");
    if (!names.insert(ex.name).second) throw ConfigError("duplicate experiment name '" + ex.name + "'");
    ex.config = parse_sim_config(e, base_dir);
    ex.source_json = e;
    file.experiments.push_back(std::move(ex));
  }
  if (doc.contains("compare")) {
    file.compare = get_or(doc, "compare", std::vector<std::string>{}, "experiment file");
    for (const auto& n : file.compare)
      if (!names.count(n)) throw ConfigError("compare: experiment '" + n + "' not found");
  }
  return file;
}

ExperimentFile load_experiment_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return parse_experiment_file(doc, file.parent_path());
}

json metrics_json(const Metrics& m) {
  json j;
  j["final_window_mse"] = m.final_window_mse;
  j["noise_reduction_db"] = m.noise_reduction_db ? json(*m.noise_reduction_db) : json(nullptr);
  j["convergence_time_s"] = m.convergence_time_s ? json(*m.convergence_time_s) : json("never");
  j["energy_decay_90_s"] = m.energy_decay_90_s ? json(*m.energy_decay_90_s) : json(nullptr);
  return j;
}

json summary_json(const Experiment& experiment, const RunResult& result) {
  const auto& ms = experiment.config.metrics;
  json j;
  j["name"] = experiment.name;
  j["controller"] = std::holds_alternative<FxlmsSettings>(experiment.config.controller) ? "fxlms" : "kalman";
  j["samples"] = result.error.size();
  j["sample_rate_hz"] = result.error.sample_rate_hz;
  j["diverged"] = result.diverged;
  j["diverged_at_sample"] = result.diverged_at ? json(*result.diverged_at) : json(nullptr);
  j["metrics"] = metrics_json(result.metrics);
  j["metric_settings"] = {{"final_window_s", ms.final_window_s},
                          {"convergence_window_s", ms.convergence_window_s},
                          {"convergence_threshold_db", ms.convergence_threshold_db},
                          {"hysteresis_db", ms.hysteresis_db}};
  j["config"] = experiment.source_json;
  return j;
}

}  // namespace anc
