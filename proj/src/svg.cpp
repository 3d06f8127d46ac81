#include "scmxxz/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace scmxxz::svg {

namespace {

constexpr double kWidth = 760;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 170;
constexpr double kTop = 40;
constexpr double kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

struct Axes {
  double x0, x1, y0, y1;
  bool log_x;

  double px(double x) const {
    const double a = log_x ? std::log10(x0) : x0;
    const double b = log_x ? std::log10(x1) : x1;
    const double v = log_x ? std::log10(x) : x;
    return kLeft + (v - a) / (b - a) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

void header(std::ostringstream& os) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void frame(std::ostringstream& os, const Axes& ax, const PlotOptions& opt, bool y_ticks = true) {
  const double right = kWidth - kRight;
  const double bottom = kHeight - kBottom;
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << right - kLeft
     << "\" height=\"" << bottom - kTop << "\" fill=\"none\" stroke=\"black\"/>\n";

  std::vector<double> xt;
  if (ax.log_x) {
    for (int e = static_cast<int>(std::floor(std::log10(ax.x0)));
         e <= static_cast<int>(std::ceil(std::log10(ax.x1))); ++e) {
      const double v = std::pow(10.0, e);
      if (v >= ax.x0 * (1 - 1e-9) && v <= ax.x1 * (1 + 1e-9)) xt.push_back(v);
    }
  } else {
    xt = nice_ticks(ax.x0, ax.x1);
  }
  for (double t : xt) {
    const double x = ax.px(t);
    os << "<line x1=\"" << num(x) << "\" y1=\"" << bottom << "\" x2=\"" << num(x) << "\" y2=\""
       << bottom + 5 << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(x) << "\" y=\"" << bottom + 18 << "\" text-anchor=\"middle\">"
       << tick_label(t) << "</text>\n";
  }
  if (y_ticks) {
    for (double t : nice_ticks(ax.y0, ax.y1)) {
      const double y = ax.py(t);
      os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << kLeft
         << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n"
         << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
         << tick_label(t) << "</text>\n";
    }
  }
  os << "<text x=\"" << (kLeft + right) / 2 << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\">" << escape(opt.xlabel) << "</text>\n"
     << "<text x=\"18\" y=\"" << (kTop + bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (kTop + bottom) / 2 << ")\">" << escape(opt.ylabel) << "</text>\n"
     << "<text x=\"" << (kLeft + right) / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << escape(opt.title) << "</text>\n";
}

// Diverging blue-white-red map on [0, 1].
std::string diverging(double u) {
  u = std::clamp(u, 0.0, 1.0);
  double r, g, b;
  if (u < 0.5) {
    const double s = u / 0.5;
    r = 0.23 + s * (1.0 - 0.23);
    g = 0.30 + s * (1.0 - 0.30);
    b = 0.75 + s * (1.0 - 0.75);
  } else {
    const double s = (u - 0.5) / 0.5;
    r = 1.0 - s * (1.0 - 0.71);
    g = 1.0 - s * (1.0 - 0.02);
    b = 1.0 - s * (1.0 - 0.15);
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r * 255 + 0.5),
                static_cast<int>(g * 255 + 0.5), static_cast<int>(b * 255 + 0.5));
  return buf;
}

}  // namespace

std::string line_plot(const std::vector<LineSeries>& series, const PlotOptions& opt) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (opt.log_x && !(s.x[i] > 0)) continue;
      const double e = i < s.err.size() ? s.err[i] : 0.0;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i] - e);
      y1 = std::max(y1, s.y[i] + e);
    }
  }
  if (!std::isfinite(x0)) {
    x0 = opt.log_x ? 1.0 : 0.0;
    x1 = opt.log_x ? 10.0 : 1.0;
    y0 = 0.0;
    y1 = 1.0;
  }
  if (x1 <= x0) x1 = opt.log_x ? x0 * 10 : x0 + 1;
  if (y1 <= y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  Axes ax{x0, x1, y0 - pad, y1 + pad, opt.log_x};

  std::ostringstream os;
  header(os);
  frame(os, ax, opt);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* colour = kPalette[si % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (opt.log_x && !(s.x[i] > 0)) continue;
      os << num(ax.px(s.x[i])) << ',' << num(ax.py(s.y[i])) << ' ';
    }
    os << "\"/>\n";
    if (!s.err.empty()) {
      // Thin out error bars on dense grids.
      const std::size_t stride = std::max<std::size_t>(1, s.x.size() / 60);
      for (std::size_t i = 0; i < s.x.size() && i < s.err.size(); i += stride) {
        if (opt.log_x && !(s.x[i] > 0)) continue;
        const double x = ax.px(s.x[i]);
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(ax.py(s.y[i] - s.err[i])) << "\" x2=\""
           << num(x) << "\" y2=\"" << num(ax.py(s.y[i] + s.err[i])) << "\" stroke=\"" << colour
           << "\" stroke-width=\"1\"/>\n";
      }
    }
    if (opt.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (opt.log_x && !(s.x[i] > 0)) continue;
        os << "<circle cx=\"" << num(ax.px(s.x[i])) << "\" cy=\"" << num(ax.py(s.y[i]))
           << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
      }
    }
    const double ly = kTop + 15 + 18 * static_cast<double>(si);
    const double lx = kWidth - kRight + 12;
    os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 20 << "\" y2=\"" << ly
       << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << lx + 26 << "\" y=\"" << ly + 4 << "\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string heatmap(const std::vector<double>& times, const Eigen::MatrixXd& values, double vmin,
                    double vmax, const PlotOptions& opt) {
  const std::size_t nt = times.size();
  const auto ns = static_cast<int>(values.cols());
  const double t0 = nt ? times.front() : 0.0;
  const double t1 = nt > 1 ? times.back() : t0 + 1.0;
  Axes ax{t0, t1, -0.5, ns - 0.5, false};

  std::ostringstream os;
  header(os);
  // At most ~400 columns; each drawn cell spans `stride` grid points.
  const std::size_t stride = std::max<std::size_t>(1, nt / 400);
  const double cell_h = (kHeight - kTop - kBottom) / std::max(ns, 1);
  for (std::size_t k = 0; k < nt; k += stride) {
    const double xa = ax.px(times[k]);
    const std::size_t k_end = std::min(nt - 1, k + stride);
    const double xb = k_end > k ? ax.px(times[k_end]) : kWidth - kRight;
    for (int i = 0; i < ns; ++i) {
      const double v = values(static_cast<Eigen::Index>(k), i);
      os << "<rect x=\"" << num(xa) << "\" y=\"" << num(ax.py(i + 0.5)) << "\" width=\""
         << num(std::max(xb - xa, 0.5)) << "\" height=\"" << num(cell_h + 0.3) << "\" fill=\""
         << diverging((v - vmin) / (vmax - vmin)) << "\"/>\n";
    }
  }
  frame(os, ax, opt);

  // Colour bar.
  const double bx = kWidth - kRight + 30;
  const double bh = kHeight - kTop - kBottom;
  for (int j = 0; j < 50; ++j) {
    const double u = 1.0 - (j + 0.5) / 50.0;
    os << "<rect x=\"" << bx << "\" y=\"" << num(kTop + j * bh / 50) << "\" width=\"18\" height=\""
       << num(bh / 50 + 0.3) << "\" fill=\"" << diverging(u) << "\"/>\n";
  }
  os << "<text x=\"" << bx + 24 << "\" y=\"" << kTop + 10 << "\">" << tick_label(vmax)
     << "</text>\n<text x=\"" << bx + 24 << "\" y=\"" << kTop + bh << "\">" << tick_label(vmin)
     << "</text>\n</svg>\n";
  return os.str();
}

}  // namespace scmxxz::svg
