#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace anc::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfigError = 2, kDiverged = 3 };

/// Where experiments come from: a JSON file, a preset, or (neither) the
/// `paper` preset. Setting both is a config error.
struct Invocation {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> preset;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
};

/// `--out`, then $ANC_OUT, then the current directory.
std::filesystem::path resolve_out_dir(const Invocation& inv);

/// Writes <name>.csv and <name>.summary.json per experiment.
int cmd_run(const Invocation& inv, std::ostream& log, std::ostream& err);

/// Writes compare.csv, compare.summary.json and compare.svg for the compare list.
int cmd_compare(const Invocation& inv, std::ostream& log, std::ostream& err);

/// Writes path coefficient CSVs and one SVG per path.
int cmd_paths(const Invocation& inv, std::ostream& log, std::ostream& err);

}  // namespace anc::cli
