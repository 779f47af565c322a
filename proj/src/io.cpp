#include "anc/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace anc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field) {
  const std::string t = trim(field);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::runtime_error("csv: not a number: '" + t + "'");
  }
  if (used != t.size()) throw std::runtime_error("csv: trailing characters in '" + t + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

Vector read_values(std::istream& is) {
  std::vector<double> vals;
  std::string line;
  while (std::getline(is, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    vals.push_back(parse_double(t));
  }
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_signal_csv(std::ostream& os, const Signal& s) {
  os << "# samples," << format_double(s.sample_rate_hz) << '\n';
  for (Eigen::Index n = 0; n < s.size(); ++n) os << format_double(s[n]) << '\n';
}

void write_path_csv(std::ostream& os, const FirPath& p) {
  os << "# taps\n";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << format_double(p[i]) << '\n';
}

Signal read_signal_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("csv: missing '# samples,<rate>' header");
  const std::string t = trim(header);
  const std::string prefix = "# samples,";
  if (t.rfind(prefix, 0) != 0) throw std::runtime_error("csv: expected '# samples,<rate>' header");
  const double rate = parse_double(t.substr(prefix.size()));
  Vector v = read_values(is);
  if (v.size() == 0) throw std::runtime_error("csv: empty signal");
  return Signal(std::move(v), rate);
}

FirPath read_path_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header) || trim(header) != "# taps") throw std::runtime_error("csv: expected '# taps' header");
  Vector v = read_values(is);
  if (v.size() == 0) throw std::runtime_error("csv: path has no taps");
  return FirPath(std::move(v));
}

FirPath load_path_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  return read_path_csv(in);
}

void save_path_csv(const std::filesystem::path& file, const FirPath& p) {
  std::ostringstream os;
  write_path_csv(os, p);
  write_text_file(file, os.str());
}

const Vector& Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column '" + name + "'");
  return data[static_cast<std::size_t>(it - columns.begin())];
}

void write_table_csv(std::ostream& os, const Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
  os << '\n';
  const Eigen::Index rows = t.rows();
  std::string line;
  for (Eigen::Index r = 0; r < rows; ++r) {
    line.clear();
    for (std::size_t c = 0; c < t.data.size(); ++c) {
      if (c) line += ',';
      line += format_double(t.data[c][r]);
    }
    line += '\n';
    os << line;
  }
}

Table read_table_csv(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: missing header row");
  t.columns = split(trim(line), ',');
  std::vector<std::vector<double>> cols(t.columns.size());
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    if (fields.size() != t.columns.size()) throw std::runtime_error("csv: ragged row");
    for (std::size_t c = 0; c < fields.size(); ++c) cols[c].push_back(parse_double(fields[c]));
  }
  for (auto& c : cols) t.data.emplace_back(Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size())));
  return t;
}

Table run_table(const RunResult& r) {
  Table t;
  const Eigen::Index len = r.error.size();
  const double fs = r.error.sample_rate_hz;
  t.columns = {"n", "t", "x", "d", "e"};
  t.data.push_back(Vector::LinSpaced(len, 0.0, static_cast<double>(len - 1)));
  Vector time(len);
  for (Eigen::Index n = 0; n < len; ++n) time[n] = static_cast<double>(n) / fs;
  t.data.push_back(std::move(time));
  t.data.push_back(r.reference.samples);
  t.data.push_back(r.disturbance.samples);
  t.data.push_back(r.error.samples);
  for (const auto& [idx, trace] : r.weight_traces) {
    t.columns.push_back("w_" + std::to_string(idx));
    t.data.push_back(trace.samples);
  }
  return t;
}

void write_text_file(const std::filesystem::path& file, const std::string& contents) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + file.string());
}

}  // namespace anc
