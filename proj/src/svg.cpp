#include "anc/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace anc {

namespace {

constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(const Vector& v) {
    if (v.size() == 0) return;
    lo = std::min(lo, v.minCoeff());
    hi = std::max(hi, v.maxCoeff());
  }

  void finish() {
    if (!std::isfinite(lo) || !std::isfinite(hi)) lo = 0.0, hi = 1.0;
    if (hi == lo) {
      const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
      lo -= pad;
      hi += pad;
    }
  }
};

}  // namespace

std::vector<Eigen::Index> decimation_indices(Eigen::Index len, Eigen::Index max_points) {
  std::vector<Eigen::Index> idx;
  if (len <= 0) return idx;
  if (len <= max_points) {
    for (Eigen::Index i = 0; i < len; ++i) idx.push_back(i);
    return idx;
  }
  const Eigen::Index stride = (len - 2) / (max_points - 1) + 1;
  for (Eigen::Index i = 0; i < len - 1; i += stride) idx.push_back(i);
  idx.push_back(len - 1);
  return idx;
}

std::string render_line_plot(const PlotSpec& spec) {
  Range xr;
  Range yr;
  for (const auto& s : spec.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("plot: x/y length mismatch");
    xr.include(s.x);
    yr.include(s.y);
  }
  xr.finish();
  yr.finish();
  const double yspan = yr.hi - yr.lo;
  yr.lo -= 0.05 * yspan;
  yr.hi += 0.05 * yspan;

  const double pw = kSvgWidth - kLeft - kRight;
  const double ph = kSvgHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kSvgWidth << ' ' << kSvgHeight << "\" width=\""
     << kSvgWidth << "\" height=\"" << kSvgHeight << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kSvgWidth << "\" height=\"" << kSvgHeight << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kSvgWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
     << escape(spec.title) << "</text>\n";

  // Axes frame and ticks.
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / kTicks;
    const double fy = yr.lo + (yr.hi - yr.lo) * i / kTicks;
    os << "<line x1=\"" << fmt("%.2f", px(fx)) << "\" y1=\"" << kTop << "\" x2=\"" << fmt("%.2f", px(fx)) << "\" y2=\""
       << kTop + ph << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    os << "<text x=\"" << fmt("%.2f", px(fx)) << "\" y=\"" << kTop + ph + 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt("%.4g", fx) << "</text>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << fmt("%.2f", py(fy)) << "\" x2=\"" << kLeft + pw << "\" y2=\""
       << fmt("%.2f", py(fy)) << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt("%.2f", py(fy) + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt("%.3g", fy) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kSvgHeight - 14
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(spec.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
     << "transform=\"rotate(-90 18 " << kTop + ph / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& series = spec.series[s];
    const char* color = kPalette[s % kPalette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    bool first = true;
    for (auto i : decimation_indices(series.x.size(), kMaxPolylinePoints)) {
      if (!first) os << ' ';
      first = false;
      os << fmt("%.2f", px(series.x[i])) << ',' << fmt("%.2f", py(series.y[i]));
    }
    os << "\"/>\n";
    const double ly = kTop + 16 + 18.0 * static_cast<double>(s);
    const double lx = kLeft + pw - 170;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly - 4 << "\" stroke=\""
       << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << lx + 30 << "\" y=\"" << ly << "\" font-family=\"sans-serif\" font-size=\"12\">"
       << escape(series.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace anc
