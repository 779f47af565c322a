#pragma once

#include "anc/dsp.hpp"

#include <string>
#include <vector>

namespace anc {

struct PlotSeries {
  std::string label;
  Vector x;
  Vector y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

inline constexpr int kSvgWidth = 900;
inline constexpr int kSvgHeight = 420;
inline constexpr Eigen::Index kMaxPolylinePoints = 4000;

/// Line plot on a fixed 900×420 viewBox: one <polyline> per series, axes,
/// tick labels, and a legend. Series longer than 4000 points are decimated
/// by uniform striding (first and last points kept).
std::string render_line_plot(const PlotSpec& spec);

/// Indices kept when decimating `len` points down to at most `max_points`.
std::vector<Eigen::Index> decimation_indices(Eigen::Index len, Eigen::Index max_points);

}  // namespace anc
