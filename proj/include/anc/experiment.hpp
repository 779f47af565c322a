#pragma once

// JSON experiment files, built-in presets, and run summaries.
//
// An experiment file looks like
//
//   {
//     "experiments": [
//       { "name": "kf", "base": "paper-kalman", "controller": { "q": 0.01 } },
//       { "name": "lms", "base": "paper-fxlms" }
//     ],
//     "compare": ["lms", "kf"]
//   }
//
// `base` starts from a preset and merges the remaining keys over it. Nested
// objects merge key by key, except that an object carrying its own "type"
// (source, paths, controller) replaces the preset's object wholesale.
// Unknown keys are rejected.

#include "anc/sim.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace anc {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Experiment {
  std::string name;
  SimConfig config;
  nlohmann::json source_json;
};

struct ExperimentFile {
  std::vector<Experiment> experiments;
  std::vector<std::string> compare;

  const Experiment& find(const std::string& name) const;
};

/// Names accepted by `preset_file`: paper-fxlms, paper-kalman, paper.
std::vector<std::string> preset_names();

/// JSON of a single-experiment preset (paper-fxlms or paper-kalman).
nlohmann::json preset_experiment_json(const std::string& name);

/// `paper` expands to both paper presets with a compare list.
ExperimentFile preset_file(const std::string& name);

/// `base_dir` resolves relative `file` entries of CSV-backed paths.
ExperimentFile parse_experiment_file(const nlohmann::json& doc, const std::filesystem::path& base_dir = ".");
ExperimentFile load_experiment_file(const std::filesystem::path& file);

SimConfig parse_sim_config(const nlohmann::json& experiment, const std::filesystem::path& base_dir = ".");

nlohmann::json metrics_json(const Metrics& m);
nlohmann::json summary_json(const Experiment& experiment, const RunResult& result);

}  // namespace anc
