#include "scmxxz/observables.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "scmxxz/error.hpp"

namespace scmxxz {

void ObservableRecord::check_bounds(std::size_t sector_dimension, double slack) const {
  const std::size_t t = times.size();
  if (static_cast<std::size_t>(magnetization.rows()) != t || ier.size() != t ||
      width.size() != t || (!ipr.empty() && ipr.size() != t)) {
    throw InvariantViolation("observable series do not share the time grid");
  }
  if (t == 0) return;
  if (magnetization.cwiseAbs().maxCoeff() > 1.0 + slack) {
    throw InvariantViolation("magnetization outside [-1, 1]");
  }
  const double n = static_cast<double>(magnetization.cols());
  for (double v : ipr) {
    if (v < 1.0 / n - slack || v > 1.0 + slack) {
      throw InvariantViolation("IPR " + std::to_string(v) + " outside [1/N, 1]");
    }
  }
  const double d = static_cast<double>(sector_dimension);
  for (double v : ier) {
    if (v < 1.0 / d - slack || v > 1.0 + slack) {
      throw InvariantViolation("IER " + std::to_string(v) + " outside [1/d, 1]");
    }
  }
}

Eigen::VectorXd magnetization_from_populations(const SectorBasis& basis,
                                               const Eigen::VectorXd& populations) {
  if (populations.size() != static_cast<Eigen::Index>(basis.dimension())) {
    throw DimensionMismatch("population vector does not match the sector");
  }
  const int n = basis.n_sites();
  // <sigma^z_i> = 2 P(site i occupied) - sum_k p_k
  Eigen::VectorXd occupied = Eigen::VectorXd::Zero(n);
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    const double p = populations[static_cast<Eigen::Index>(k)];
    Mask s = basis.state(k);
    while (s != 0) {
      const int i = std::countr_zero(s);
      occupied[i] += p;
      s &= s - 1;
    }
  }
  const double total = populations.sum();
  return 2.0 * occupied - Eigen::VectorXd::Constant(n, total);
}

Eigen::VectorXd local_magnetization(const DensityMatrix& rho) {
  return magnetization_from_populations(rho.basis(), rho.populations());
}

double ipr_from_populations(const SectorBasis& basis, const Eigen::VectorXd& populations) {
  if (basis.n_excitations() != 1) {
    throw WrongSector("IPR is defined for a single excitation, sector has q = " +
                      std::to_string(basis.n_excitations()));
  }
  if (populations.size() != static_cast<Eigen::Index>(basis.dimension())) {
    throw DimensionMismatch("population vector does not match the sector");
  }
  // For q = 1, sector index k is the localized state on site k.
  return populations.squaredNorm();
}

double ipr(const DensityMatrix& rho) { return ipr_from_populations(rho.basis(), rho.populations()); }

double ier_from_populations(const Eigen::VectorXd& populations) {
  return populations.squaredNorm();
}

double ier(const DensityMatrix& rho) { return ier_from_populations(rho.populations()); }

double spread_width(std::span<const double> magnetization, std::span<const double> positions) {
  if (!positions.empty() && positions.size() != magnetization.size()) {
    throw DimensionMismatch("positions and magnetization differ in length");
  }
  const auto pos = [&](std::size_t i) {
    return positions.empty() ? static_cast<double>(i) : positions[i];
  };
  double q = 0.0;
  double first = 0.0;
  for (std::size_t i = 0; i < magnetization.size(); ++i) {
    const double n = 0.5 * (magnetization[i] + 1.0);
    q += n;
    first += n * pos(i);
  }
  if (!(q > 0.0)) throw InvalidArgument("spread_width needs a positive total occupation");
  const double centre = first / q;
  double second = 0.0;
  for (std::size_t i = 0; i < magnetization.size(); ++i) {
    const double n = 0.5 * (magnetization[i] + 1.0);
    const double dx = pos(i) - centre;
    second += n * dx * dx;
  }
  return second / q;
}

std::size_t Spectrum::peak_index() const {
  std::size_t best = 0;
  double best_amp = -1.0;
  for (std::size_t k = 0; k < amplitudes.size(); ++k) {
    if (frequencies[k] > 0.0 && amplitudes[k] > best_amp) {
      best = k;
      best_amp = amplitudes[k];
    }
  }
  return best;
}

double Spectrum::bin_width() const {
  return frequencies.size() > 1 ? frequencies[1] - frequencies[0] : 0.0;
}

Spectrum fft_difference_spectrum(std::span<const double> series_a,
                                 std::span<const double> series_b, double grid_dt,
                                 const SpectrumOptions& options) {
  if (series_a.size() != series_b.size()) {
    throw DimensionMismatch("series lengths differ: " + std::to_string(series_a.size()) +
                            " vs " + std::to_string(series_b.size()));
  }
  const std::size_t n = series_a.size();
  if (n < 8) throw InvalidArgument("spectrum needs at least 8 samples");
  if (!(grid_dt > 0.0)) throw InvalidArgument("grid_dt must be > 0");

  std::vector<double> diff(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = series_a[i] - series_b[i];
    mean += diff[i];
  }
  mean /= static_cast<double>(n);

  double gain = static_cast<double>(n);
  for (auto& v : diff) v -= mean;
  if (options.window == Window::Hann) {
    gain = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w =
          0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(n - 1));
      diff[i] *= w;
      gain += w;
    }
  }

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> freq;
  fft.fwd(freq, diff);

  const std::size_t half = n / 2;
  const double span_t = static_cast<double>(n) * grid_dt;
  const double unit = options.axis == FrequencyAxis::Angular ? 2.0 * std::numbers::pi : 1.0;

  Spectrum out;
  out.frequencies.resize(half + 1);
  out.amplitudes.resize(half + 1);
  for (std::size_t k = 0; k <= half; ++k) {
    out.frequencies[k] = unit * static_cast<double>(k) / span_t;
    const bool edge = k == 0 || (n % 2 == 0 && k == half);
    out.amplitudes[k] = (edge ? 1.0 : 2.0) * std::abs(freq[k]) / gain;
  }
  return out;
}

std::string to_string(FrequencyAxis axis) {
  return axis == FrequencyAxis::Angular ? "angular" : "ordinary";
}

std::string to_string(Window window) {
  return window == Window::Hann ? "hann" : "rectangular";
}

FrequencyAxis frequency_axis_from_string(const std::string& s) {
  if (s == "angular") return FrequencyAxis::Angular;
  if (s == "ordinary") return FrequencyAxis::Ordinary;
  throw InvalidArgument("unknown frequency axis '" + s + "' (expected angular or ordinary)");
}

Window window_from_string(const std::string& s) {
  if (s == "rectangular" || s == "none") return Window::Rectangular;
  if (s == "hann") return Window::Hann;
  throw InvalidArgument("unknown window '" + s + "' (expected rectangular or hann)");
}

}  // namespace scmxxz
