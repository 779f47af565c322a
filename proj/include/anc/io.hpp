#pragma once

// CSV import/export for signals, paths, and run traces.
//
// Signals and paths are one value per line after a comment header
// (`# samples,<rate>` or `# taps`). Run traces use a header row
// `n,t,x,d,e[,w_<i>...]`. All values are written with 17 significant
// digits so a re-parse reproduces the doubles exactly.

#include "anc/dsp.hpp"
#include "anc/sim.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace anc {

std::string format_double(double v);

void write_signal_csv(std::ostream& os, const Signal& s);
void write_path_csv(std::ostream& os, const FirPath& p);
Signal read_signal_csv(std::istream& is);
FirPath read_path_csv(std::istream& is);

FirPath load_path_csv(const std::filesystem::path& file);
void save_path_csv(const std::filesystem::path& file, const FirPath& p);

/// Named columns of equal length.
struct Table {
  std::vector<std::string> columns;
  std::vector<Vector> data;

  const Vector& column(const std::string& name) const;
  Eigen::Index rows() const { return data.empty() ? 0 : data.front().size(); }
};

void write_table_csv(std::ostream& os, const Table& t);
Table read_table_csv(std::istream& is);

/// n, t, x, d, e and one w_<i> column per tracked weight (0-based index).
Table run_table(const RunResult& r);

void write_text_file(const std::filesystem::path& file, const std::string& contents);

}  // namespace anc
