#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "scmxxz/basis.hpp"
#include "scmxxz/state.hpp"

namespace scmxxz {

/// Observable time series of one trajectory (or an ensemble average).
///
/// `magnetization` holds <sigma^z_i>(t) with one row per grid time and one
/// column per site. `ipr` is only filled for single-excitation sectors.
struct ObservableRecord {
  std::vector<double> times;
  Eigen::MatrixXd magnetization;
  std::vector<double> ipr;
  std::vector<double> ier;
  std::vector<double> width;

  std::size_t n_times() const { return times.size(); }
  int n_sites() const { return static_cast<int>(magnetization.cols()); }
  bool has_ipr() const { return !ipr.empty(); }

  /// Throws InvariantViolation if a series length or a bound is off. Bounds
  /// are checked with `slack`: |m| <= 1, 1/N <= ipr <= 1, 1/d <= ier <= 1.
  void check_bounds(std::size_t sector_dimension, double slack = 1e-9) const;
};

/// <sigma^z_i> for every site from the sector populations rho_kk.
Eigen::VectorXd magnetization_from_populations(const SectorBasis& basis,
                                               const Eigen::VectorXd& populations);
Eigen::VectorXd local_magnetization(const DensityMatrix& rho);

/// sum_i <i|rho|i>^2 over the single-excitation states. Throws WrongSector
/// unless the basis has exactly one excitation.
double ipr_from_populations(const SectorBasis& basis, const Eigen::VectorXd& populations);
double ipr(const DensityMatrix& rho);

/// Inverse ergodicity ratio sum_j <j|rho|j>^2 over the sector basis.
/// Squared weights: the unsquared sum is identically 1 and cannot reach the
/// 1/d (ergodic) to 1 (single configuration) range the quantity is meant to
/// span. Equals ipr() in the single-excitation sector.
double ier_from_populations(const Eigen::VectorXd& populations);
double ier(const DensityMatrix& rho);

/// Variance of the occupation profile n_i = (<sigma^z_i> + 1) / 2 about its
/// centre of mass, normalized by the total occupation. `positions` defaults
/// to 0, 1, ..., N-1.
double spread_width(std::span<const double> magnetization,
                    std::span<const double> positions = {});

enum class FrequencyAxis {
  Angular,   // omega = 2 pi k / (n dt)
  Ordinary,  // f = k / (n dt)
};

enum class Window {
  Rectangular,
  Hann,
};

struct SpectrumOptions {
  FrequencyAxis axis = FrequencyAxis::Angular;
  Window window = Window::Rectangular;
};

struct Spectrum {
  std::vector<double> frequencies;
  std::vector<double> amplitudes;

  /// Index of the largest amplitude with frequency > 0.
  std::size_t peak_index() const;
  /// Spacing of the frequency grid.
  double bin_width() const;
};

/// One-sided amplitude spectrum of (a - b) after removing its mean. A unit
/// sine sitting on a bin reads amplitude 1. Throws DimensionMismatch on
/// unequal lengths and InvalidArgument for fewer than 8 samples.
Spectrum fft_difference_spectrum(std::span<const double> series_a,
                                 std::span<const double> series_b, double grid_dt,
                                 const SpectrumOptions& options = {});

std::string to_string(FrequencyAxis axis);
std::string to_string(Window window);
FrequencyAxis frequency_axis_from_string(const std::string& s);
Window window_from_string(const std::string& s);

}  // namespace scmxxz
