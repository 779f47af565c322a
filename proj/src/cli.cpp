#include "anc/cli.hpp"

#include "anc/experiment.hpp"
#include "anc/io.hpp"
#include "anc/svg.hpp"

#include <cstdlib>
#include <future>
#include <ostream>
#include <sstream>

namespace anc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ExperimentFile load(const Invocation& inv) {
  if (inv.config && inv.preset) throw ConfigError("--config and --preset are mutually exclusive");
  ExperimentFile file = inv.config ? load_experiment_file(*inv.config) : preset_file(inv.preset.value_or("paper"));
  if (file.experiments.empty()) throw ConfigError("no experiments");
  if (inv.seed)
    for (auto& e : file.experiments) e.config.seed = *inv.seed;
  return file;
}

fs::path prepare_out_dir(const Invocation& inv) {
  const fs::path dir = resolve_out_dir(inv);
  std::error_code ec;
  if (fs::is_directory(dir, ec)) return dir;
  if (fs::exists(dir, ec)) throw ConfigError("output path exists and is not a directory: " + dir.string());
  const fs::path parent = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
  if (!fs::is_directory(parent, ec)) throw ConfigError("output directory parent does not exist: " + parent.string());
  if (!fs::create_directory(dir, ec) && ec) throw ConfigError("cannot create output directory: " + dir.string());
  return dir;
}

/// Runs each experiment on its own thread; results keep input order.
std::vector<RunResult> run_all(const std::vector<const Experiment*>& experiments) {
  std::vector<std::future<RunResult>> jobs;
  jobs.reserve(experiments.size());
  for (const auto* e : experiments)
    jobs.push_back(std::async(std::launch::async, [e] { return run_simulation(e->config); }));
  std::vector<RunResult> results;
  results.reserve(jobs.size());
  for (auto& j : jobs) results.push_back(j.get());
  return results;
}

std::string table_csv(const Table& t) {
  std::ostringstream os;
  write_table_csv(os, t);
  return os.str();
}

PlotSeries time_series(const std::string& label, const Signal& s) {
  Vector t(s.size());
  for (Eigen::Index n = 0; n < s.size(); ++n) t[n] = s.time_of(n);
  return {label, std::move(t), s.samples};
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace

fs::path resolve_out_dir(const Invocation& inv) {
  if (inv.out_dir) return *inv.out_dir;
  if (const char* env = std::getenv("ANC_OUT"); env && *env) return env;
  return ".";
}

int cmd_run(const Invocation& inv, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentFile file = load(inv);
    const fs::path out = prepare_out_dir(inv);
    std::vector<const Experiment*> todo;
    for (const auto& e : file.experiments) todo.push_back(&e);
    const auto results = run_all(todo);

    bool any_diverged = false;
    for (std::size_t i = 0; i < todo.size(); ++i) {
      const auto& e = *todo[i];
      const auto& r = results[i];
      write_text_file(out / (e.name + ".csv"), table_csv(run_table(r)));
      write_text_file(out / (e.name + ".summary.json"), summary_json(e, r).dump(2) + "\n");
      log << e.name << ": " << r.error.size() << " samples";
      if (r.metrics.noise_reduction_db) log << ", final-window reduction " << *r.metrics.noise_reduction_db << " dB";
      if (r.diverged) log << ", DIVERGED at sample " << *r.diverged_at;
      log << '\n';
      any_diverged = any_diverged || r.diverged;
    }
    if (any_diverged) err << "error: at least one run diverged\n";
    return any_diverged ? kDiverged : kOk;
  });
}

int cmd_compare(const Invocation& inv, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentFile file = load(inv);
    if (file.compare.size() < 2) throw ConfigError("compare needs at least two experiment names");
    std::vector<const Experiment*> todo;
    for (const auto& name : file.compare) todo.push_back(&file.find(name));
    const fs::path out = prepare_out_dir(inv);
    const auto results = run_all(todo);

    const Eigen::Index len = results.front().error.size();
    const double fs_hz = results.front().error.sample_rate_hz;
    for (const auto& r : results)
      if (r.error.size() != len || r.error.sample_rate_hz != fs_hz)
        throw ConfigError("compared experiments must share sample rate and duration");

    Table joint;
    joint.columns.push_back("t");
    Vector t(len);
    for (Eigen::Index n = 0; n < len; ++n) t[n] = static_cast<double>(n) / fs_hz;
    joint.data.push_back(std::move(t));

    PlotSpec plot{"Error signals", "Time (s)", "Amplitude", {}};
    json summary;
    summary["experiments"] = json::array();
    bool any_diverged = false;
    for (std::size_t i = 0; i < todo.size(); ++i) {
      const auto& e = *todo[i];
      const auto& r = results[i];
      joint.columns.push_back("e_" + e.name);
      joint.data.push_back(r.error.samples);
      plot.series.push_back(time_series(e.name, r.error));
      json entry = metrics_json(r.metrics);
      entry["name"] = e.name;
      entry["diverged"] = r.diverged;
      summary["experiments"].push_back(entry);
      log << e.name << ": reduction "
          << (r.metrics.noise_reduction_db ? std::to_string(*r.metrics.noise_reduction_db) : std::string("n/a"))
          << " dB, convergence "
          << (r.metrics.convergence_time_s ? std::to_string(*r.metrics.convergence_time_s) + " s" : std::string("never"))
          << '\n';
      any_diverged = any_diverged || r.diverged;
    }

    write_text_file(out / "compare.csv", table_csv(joint));
    write_text_file(out / "compare.summary.json", summary.dump(2) + "\n");
    write_text_file(out / "compare.svg", render_line_plot(plot));
    if (any_diverged) err << "error: at least one run diverged\n";
    return any_diverged ? kDiverged : kOk;
  });
}

int cmd_paths(const Invocation& inv, std::ostream& log, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentFile file = load(inv);
    const fs::path out = prepare_out_dir(inv);

    struct Realized {
      std::string name;
      FirPath primary;
      FirPath secondary;
    };
    std::vector<Realized> paths;
    for (const auto& e : file.experiments)
      paths.push_back({e.name, realize_path(e.config.primary_path, e.config.sample_rate_hz),
                       realize_path(e.config.secondary_path, e.config.sample_rate_hz)});

    const bool shared = std::all_of(paths.begin(), paths.end(), [&](const Realized& p) {
      return p.primary.coefficients == paths.front().primary.coefficients &&
             p.secondary.coefficients == paths.front().secondary.coefficients;
    });
    const std::size_t count = shared ? 1 : paths.size();

    auto emit = [&](const std::string& stem, const std::string& title, const FirPath& p) {
      save_path_csv(out / (stem + ".csv"), p);
      const Vector taps = Vector::LinSpaced(p.size(), 0.0, static_cast<double>(p.size() - 1));
      write_text_file(out / (stem + ".svg"), render_line_plot({title, "Taps", "Amplitude", {{title, taps, p.coefficients}}}));
      log << stem << ": " << p.size() << " taps\n";
    };
    for (std::size_t i = 0; i < count; ++i) {
      const std::string prefix = shared ? std::string() : paths[i].name + ".";
      emit(prefix + "primary_path", "Primary path", paths[i].primary);
      emit(prefix + "secondary_path", "Secondary path", paths[i].secondary);
    }
    return kOk;
  });
}

}  // namespace anc::cli
