#include <doctest.h>

#include <cmath>
#include <numbers>

#include "scmxxz/error.hpp"
#include "scmxxz/dynamics.hpp"
#include "scmxxz/model.hpp"
#include "scmxxz/observables.hpp"
#include "support/oracles.hpp"

using namespace scmxxz;
using doctest::Approx;

TEST_CASE("local magnetization") {
  const auto b = build_sector(7, 1);
  const Eigen::VectorXd m = local_magnetization(DensityMatrix::basis_projector(b, 4));
  for (int i = 0; i < 7; ++i) CHECK(m(i) == (i == 4 ? 1.0 : -1.0));
  const Eigen::VectorXd mixed = local_magnetization(DensityMatrix::maximally_mixed(build_sector(2, 1)));
  CHECK(mixed(0) == Approx(0.0));
  CHECK(mixed(1) == Approx(0.0));

  const auto b2 = build_sector(2, 1);
  const SpectralHamiltonian H = build_hamiltonian(b2, {});
  const double t = 0.83;
  const Eigen::VectorXd two = local_magnetization(propagate(H, DensityMatrix::basis_projector(b2, 0), t));
  CHECK(two(0) == Approx(std::cos(4 * t)).epsilon(1e-12));
  CHECK(two(1) == Approx(-std::cos(4 * t)).epsilon(1e-12));

  // Multi-excitation: compare with explicit per-site sums.
  const auto b3 = build_sector(6, 3);
  const DensityMatrix rho(b3, oracle::random_density(20, 5));
  const Eigen::VectorXd mz = local_magnetization(rho);
  for (int i = 0; i < 6; ++i) {
    CHECK(mz(i) == Approx(sigma_z_diagonal(*b3, i).dot(rho.populations())).epsilon(1e-14));
  }
}

TEST_CASE("IPR") {
  const auto b = build_sector(41, 1);
  CHECK(ipr(DensityMatrix::basis_projector(b, 3)) == 1.0);
  CHECK(ipr(DensityMatrix::maximally_mixed(b)) == Approx(1.0 / 41).epsilon(1e-14));
  CHECK(ipr(DensityMatrix::maximally_mixed(build_sector(2, 1))) == Approx(0.5));
  CHECK_THROWS_AS(ipr(DensityMatrix::maximally_mixed(build_sector(5, 2))), WrongSector);
}

TEST_CASE("IER") {
  CHECK(ier(DensityMatrix::basis_projector(build_sector(20, 2), 17)) == 1.0);
  CHECK(ier(DensityMatrix::maximally_mixed(build_sector(20, 2))) == Approx(1.0 / 190).epsilon(1e-13));
  const auto b = build_sector(12, 1);
  for (unsigned s = 0; s < 5; ++s) {
    const DensityMatrix rho(b, oracle::random_density(12, s));
    CHECK(std::abs(ier(rho) - ipr(rho)) < 1e-14);
    CHECK(ier(apply_collision(rho, 4)) == ier(rho));
    CHECK(ipr(apply_collision(rho, 7)) == ipr(rho));
  }
}

TEST_CASE("spreading width") {
  std::vector<double> m(9, -1.0);
  m[4] = 1.0;
  CHECK(spread_width(m) == 0.0);
  std::vector<double> two(9, -1.0);
  two[2] = 0.0;  // occupation 1/2 at distance 2 apart
  two[4] = 0.0;
  CHECK(spread_width(two) == Approx(1.0));
  CHECK_THROWS_AS(spread_width(std::vector<double>(4, -1.0)), InvalidArgument);
}

TEST_CASE("noiseless width grows ballistically") {
  std::vector<double> lt, lw;
  for (double t = 0.5; t <= 6.0; t += 0.25) {
    const std::vector<double> mz = oracle::xx_single_magnetization(81, 40, 1.0, t);
    lt.push_back(std::log(t));
    lw.push_back(std::log(spread_width(mz)));
  }
  CHECK(oracle::linear_fit(lt, lw).first == Approx(2.0).epsilon(0.05));
  // Same through the library on a 61-site chain, up to its boundary.
  const auto b = build_sector(61, 1);
  TrajectoryConfig tc;
  tc.initial_sites = {30};
  tc.t_final = 10.0;
  const TrajectoryResult r = run_trajectory(build_hamiltonian(b, {}), NoiseConfig::disabled(61), tc, {0, 0});
  std::vector<double> x, y;
  for (std::size_t k = 0; k < r.record.n_times(); ++k) {
    const double t = r.record.times[k];
    if (t < 0.5 || t > r.stop_time) continue;
    x.push_back(std::log(t));
    y.push_back(std::log(r.record.width[k]));
  }
  CHECK(oracle::linear_fit(x, y).first == Approx(2.0).epsilon(0.05));
}

TEST_CASE("record bounds") {
  ObservableRecord r;
  r.times = {0.0, 0.1};
  r.magnetization = Eigen::MatrixXd::Constant(2, 3, -1.0 / 3);
  r.ipr = {1.0 / 3, 0.5};
  r.ier = r.ipr;
  r.width = {0.0, 0.5};
  CHECK_NOTHROW(r.check_bounds(3));
  r.ipr[1] = 1.1;
  CHECK_THROWS_AS(r.check_bounds(3), InvariantViolation);
  r.ipr[1] = 0.5;
  r.magnetization(1, 2) = 1.5;
  CHECK_THROWS_AS(r.check_bounds(3), InvariantViolation);
}

TEST_CASE("difference spectrum") {
  const std::size_t n = 512;
  const double dt = 0.02;
  std::vector<double> a(n), b(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) a[k] = 0.3 + std::sin(7.0 * k * dt) + 0.2 * std::cos(1.0 + 3.1 * k * dt);

  SUBCASE("identical inputs give zero") {
    const Spectrum s = fft_difference_spectrum(a, a, dt);
    for (double v : s.amplitudes) CHECK(v == 0.0);
  }
  SUBCASE("DC removed and bins on the angular axis") {
    const Spectrum s = fft_difference_spectrum(a, b, dt);
    REQUIRE(s.frequencies.size() == n / 2 + 1);
    CHECK(s.amplitudes[0] < 1e-12);
    CHECK(s.bin_width() == Approx(2 * std::numbers::pi / (n * dt)));
    CHECK(std::abs(s.frequencies[s.peak_index()] - 7.0) <= s.bin_width());
  }
  SUBCASE("ordinary axis and Hann window") {
    const Spectrum s = fft_difference_spectrum(a, b, dt, {FrequencyAxis::Ordinary, Window::Hann});
    CHECK(s.bin_width() == Approx(1.0 / (n * dt)));
    CHECK(std::abs(s.frequencies[s.peak_index()] - 7.0 / (2 * std::numbers::pi)) <= s.bin_width());
  }
  SUBCASE("amplitudes agree with a direct DFT") {
    std::vector<double> d(n);
    double mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) mean += (a[k] - b[k]) / n;
    for (std::size_t k = 0; k < n; ++k) d[k] = a[k] - b[k] - mean;
    const std::vector<double> ref = oracle::dft_magnitudes(d);
    const Spectrum s = fft_difference_spectrum(a, b, dt);
    for (std::size_t k = 1; k < n / 2; ++k) CHECK(s.amplitudes[k] == Approx(2 * ref[k] / n).epsilon(1e-9));
  }
  SUBCASE("unit-amplitude tone on an exact bin") {
    std::vector<double> tone(n);
    const double w = 2 * std::numbers::pi * 20 / (n * dt);
    for (std::size_t k = 0; k < n; ++k) tone[k] = std::sin(w * k * dt);
    const Spectrum s = fft_difference_spectrum(tone, b, dt);
    CHECK(s.peak_index() == 20);
    CHECK(s.amplitudes[20] == Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(fft_difference_spectrum(a, std::vector<double>(n - 1), dt), DimensionMismatch);
  CHECK_THROWS_AS(fft_difference_spectrum(a, b, 0.0), InvalidArgument);
}

TEST_CASE("spectrum option names") {
  CHECK(frequency_axis_from_string(to_string(FrequencyAxis::Ordinary)) == FrequencyAxis::Ordinary);
  CHECK(window_from_string(to_string(Window::Hann)) == Window::Hann);
  CHECK_THROWS_AS(window_from_string("blackman"), InvalidArgument);
}
