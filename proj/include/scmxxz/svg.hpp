#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace scmxxz::svg {

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> err;  // optional symmetric error bars
};

struct PlotOptions {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_x = false;
  bool markers = false;
};

std::string line_plot(const std::vector<LineSeries>& series, const PlotOptions& options);

/// Time on the horizontal axis, site on the vertical axis; `values` has one
/// row per time and one column per site. Colours are clamped to [vmin, vmax].
std::string heatmap(const std::vector<double>& times, const Eigen::MatrixXd& values, double vmin,
                    double vmax, const PlotOptions& options);

}  // namespace scmxxz::svg
