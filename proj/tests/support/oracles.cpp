#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

Eigen::MatrixXcd taylor_expm(const Eigen::MatrixXcd& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXcd x = a / std::ldexp(1.0, squarings);
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd term = result;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Eigen::MatrixXcd ancilla_collision(const Eigen::MatrixXcd& rho, const Eigen::VectorXd& z,
                                   const Eigen::Matrix2cd& rho_a) {
  const Eigen::Index d = rho.rows();
  Eigen::Matrix2cd sx;
  sx << 0, 1, 1, 0;
  const Eigen::MatrixXcd zm = z.cast<Complex>().asDiagonal();
  Eigen::MatrixXcd gen(2 * d, 2 * d);
  Eigen::MatrixXcd full(2 * d, 2 * d);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      gen.block(r * d, c * d, d, d) = sx(r, c) * zm;
      full.block(r * d, c * d, d, d) = rho_a(r, c) * rho;
    }
  }
  const Eigen::MatrixXcd u = taylor_expm(Complex(0.0, -std::numbers::pi / 2) * gen);
  const Eigen::MatrixXcd out = u * full * u.adjoint();
  return out.block(0, 0, d, d) + out.block(d, d, d, d);
}

std::vector<unsigned long long> sector_masks(int n_sites, int q) {
  std::vector<unsigned long long> out;
  for (unsigned long long m = 0; m < (1ULL << n_sites); ++m) {
    if (std::popcount(m) == q) out.push_back(m);
  }
  return out;
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Operator on the full chain with `op` at the listed sites. Site 0 is the
// least significant bit, i.e. the last Kronecker factor. Excited (bit = 1)
// is the sigma^z = +1 eigenstate, stored as basis vector 1 of each factor.
Eigen::MatrixXcd site_operator(int n_sites, const std::vector<std::pair<int, Eigen::Matrix2cd>>& ops) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int site = n_sites - 1; site >= 0; --site) {
    Eigen::MatrixXcd f = Eigen::Matrix2cd::Identity();
    for (const auto& [s, m] : ops) {
      if (s == site) f = m;
    }
    out = kron(out, f);
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd dense_xxz_sector(int n_sites, int q, double J, double Delta, double h) {
  Eigen::Matrix2cd sx, sy, sz;
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, 1), Complex(0, -1), 0;  // in the (|0>, |1>) = (down, up) ordering
  sz << -1, 0, 0, 1;
  const auto dim = static_cast<Eigen::Index>(1) << n_sites;
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i + 1 < n_sites; ++i) {
    full += J * site_operator(n_sites, {{i, sx}, {i + 1, sx}});
    full += J * site_operator(n_sites, {{i, sy}, {i + 1, sy}});
    full += J * Delta * site_operator(n_sites, {{i, sz}, {i + 1, sz}});
  }
  for (int i = 0; i < n_sites; ++i) full += h * site_operator(n_sites, {{i, sz}});
  const auto masks = sector_masks(n_sites, q);
  const auto d = static_cast<Eigen::Index>(masks.size());
  Eigen::MatrixXcd out(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      out(a, b) = full(static_cast<Eigen::Index>(masks[a]), static_cast<Eigen::Index>(masks[b]));
    }
  }
  return out;
}

std::vector<double> xx_single_magnetization(int n_sites, int start, double J, double t) {
  const double L = n_sites + 1;
  std::vector<Complex> psi(n_sites, 0.0);
  for (int k = 1; k <= n_sites; ++k) {
    const double energy = 4.0 * J * std::cos(std::numbers::pi * k / L);
    const double phi0 = std::sqrt(2.0 / L) * std::sin(std::numbers::pi * k * (start + 1) / L);
    const Complex phase = std::exp(Complex(0.0, -energy * t));
    for (int j = 0; j < n_sites; ++j) {
      const double phij = std::sqrt(2.0 / L) * std::sin(std::numbers::pi * k * (j + 1) / L);
      psi[j] += phij * phase * phi0;
    }
  }
  std::vector<double> mz(n_sites);
  for (int j = 0; j < n_sites; ++j) mz[j] = 2.0 * std::norm(psi[j]) - 1.0;
  return mz;
}

std::vector<Eigen::VectorXd> dephasing_populations(const Eigen::MatrixXcd& H,
                                                   const std::vector<Eigen::VectorXd>& z_diagonals,
                                                   const Eigen::MatrixXcd& rho0, double rate,
                                                   const std::vector<double>& times, double step) {
  const Eigen::Index d = H.rows();
  // Z_i rho Z_i - rho multiplies element (k, l) by (z_k z_l - 1).
  Eigen::MatrixXd damp = Eigen::MatrixXd::Zero(d, d);
  for (const auto& z : z_diagonals) damp += z * z.transpose() - Eigen::MatrixXd::Ones(d, d);
  const Complex mi(0.0, -1.0);
  auto rhs = [&](const Eigen::MatrixXcd& r) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd out = mi * (H * r - r * H);
    out += rate * damp.cast<Complex>().cwiseProduct(r);
    return out;
  };
  std::vector<Eigen::VectorXd> out;
  Eigen::MatrixXcd rho = rho0;
  double t = 0.0;
  for (double target : times) {
    while (t < target - 1e-12) {
      const double h = std::min(step, target - t);
      const Eigen::MatrixXcd k1 = rhs(rho);
      const Eigen::MatrixXcd k2 = rhs(rho + 0.5 * h * k1);
      const Eigen::MatrixXcd k3 = rhs(rho + 0.5 * h * k2);
      const Eigen::MatrixXcd k4 = rhs(rho + h * k3);
      rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      t += h;
    }
    out.push_back(rho.diagonal().real());
  }
  return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) { return 1.62762 / std::sqrt(static_cast<double>(n)); }

std::vector<double> dft_magnitudes(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc += x[j] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * j % n) /
                                        static_cast<double>(n));
    }
    out[k] = std::abs(acc);
  }
  return out;
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

Eigen::MatrixXcd random_density(int d, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = Complex(g(gen), g(gen));
  }
  Eigen::MatrixXcd rho = m * m.adjoint();
  return rho / rho.trace();
}

}  // namespace oracle
