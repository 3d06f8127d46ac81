#include <doctest.h>

#include <cmath>

#include "scmxxz/dynamics.hpp"
#include "scmxxz/error.hpp"
#include "scmxxz/model.hpp"
#include "scmxxz/observables.hpp"
#include "support/oracles.hpp"

using namespace scmxxz;
using doctest::Approx;

TEST_CASE("two-site XX matrix and spectrum") {
  const auto b = build_sector(2, 1);
  const Eigen::MatrixXd m = xxz_matrix(*b, {1.0, 0.0, 0.0});
  Eigen::Matrix2d expected;
  expected << 0, 2, 2, 0;
  CHECK(m == expected);
  const SpectralHamiltonian H(b, m);
  CHECK(H.eigenvalues()(0) == Approx(-2.0));
  CHECK(H.eigenvalues()(1) == Approx(2.0));
}

TEST_CASE("anisotropy and saturated sector") {
  const Eigen::MatrixXd m = xxz_matrix(SectorBasis(2, 1), {1.0, 1.0, 0.0});
  CHECK(m(0, 0) == -1.0);
  CHECK(m(1, 1) == -1.0);
  CHECK(m(0, 1) == 2.0);
  const Eigen::MatrixXd s = xxz_matrix(SectorBasis(3, 3), {1.0, 1.0, 0.0});
  REQUIRE(s.size() == 1);
  CHECK(s(0, 0) == 2.0);
}

TEST_CASE("sector matrix matches the dense Pauli construction") {
  struct Case { int n, q; double J, Delta, h; };
  for (const Case c : {Case{4, 1, 1.0, 0.0, 0.0}, Case{5, 2, 0.7, 2.5, 0.3}, Case{6, 3, 1.3, -1.1, -0.4},
                       Case{7, 2, 1.0, 5.0, 0.0}, Case{3, 0, 1.0, 1.0, 0.5}}) {
    const Eigen::MatrixXd m = xxz_matrix(SectorBasis(c.n, c.q), {c.J, c.Delta, c.h});
    const Eigen::MatrixXcd ref = oracle::dense_xxz_sector(c.n, c.q, c.J, c.Delta, c.h);
    CHECK((m.cast<Complex>() - ref).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("spectral decomposition reconstructs H") {
  const auto b = build_sector(20, 2);
  const SpectralHamiltonian H = build_hamiltonian(b, {1.0, 5.0, 0.0});
  CHECK(H.reconstruction_error() < 1e-12);
  const Eigen::MatrixXd& V = H.eigenvectors();
  const auto d = static_cast<Eigen::Index>(b->dimension());
  CHECK((V.transpose() * V - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("non-symmetric or mis-sized matrices are rejected") {
  const auto b = build_sector(3, 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(SpectralHamiltonian(b, m), InvalidArgument);
  CHECK_THROWS_AS(SpectralHamiltonian(b, Eigen::MatrixXd::Zero(2, 2)), DimensionMismatch);
}

TEST_CASE("model parameters must be finite") {
  CHECK_THROWS_AS((ModelParams{NAN, 0, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ModelParams{1, INFINITY, 0}.validate()), InvalidArgument);
  CHECK_NOTHROW((ModelParams{1, -3, 2}.validate()));
}

TEST_CASE("two-site oscillation") {
  const auto b = build_sector(2, 1);
  const SpectralHamiltonian H = build_hamiltonian(b, {});
  const DensityMatrix rho0 = DensityMatrix::basis_projector(b, 1);  // site 1 excited
  for (double t : {0.0, 0.1, 0.37, 1.0, 2.5, 10.0}) {
    const DensityMatrix rho = propagate(H, rho0, t);
    CHECK(rho.populations()(1) == Approx(std::pow(std::cos(2 * t), 2)).epsilon(1e-12));
    const Eigen::VectorXd mz = local_magnetization(rho);
    CHECK(std::abs(mz(0) + std::cos(4 * t)) < 1e-12);
    CHECK(std::abs(mz(1) - std::cos(4 * t)) < 1e-12);
  }
}

TEST_CASE("propagation invariants") {
  const auto b = build_sector(7, 2);
  const SpectralHamiltonian H = build_hamiltonian(b, {1.0, 1.5, 0.2});
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(b);
  CHECK((propagate(H, mixed, 3.7).elements() - mixed.elements()).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix rho(b, oracle::random_density(static_cast<int>(b->dimension()), 7));
  CHECK(propagate(H, rho, 0.0).elements() == rho.elements());
  const DensityMatrix a = propagate(H, propagate(H, rho, 0.4), 0.9);
  const DensityMatrix c = propagate(H, rho, 1.3);
  CHECK((a.elements() - c.elements()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(c.trace() - Complex(1.0)) < 1e-12);
  CHECK(c.hermiticity_error() < 1e-13);

  // Against an independent dense matrix exponential.
  const Eigen::MatrixXcd U = oracle::taylor_expm(Complex(0, -1.3) * H.matrix().cast<Complex>());
  const Eigen::MatrixXcd ref = U * rho.elements() * U.adjoint();
  CHECK((c.elements() - ref).cwiseAbs().maxCoeff() < 1e-11);

  CHECK_THROWS_AS(propagate(H, rho, -1.0), InvalidArgument);
  CHECK_THROWS_AS(propagate(H, rho, NAN), InvalidArgument);
  CHECK_THROWS_AS(propagate(H, DensityMatrix::maximally_mixed(build_sector(7, 3)), 1.0), DimensionMismatch);
}

TEST_CASE("unitary invariants: purity, spectrum and energy") {
  const auto b = build_sector(8, 3);
  const SpectralHamiltonian H = build_hamiltonian(b, {1.0, 0.8, 0.4});
  const DensityMatrix rho(b, oracle::random_density(static_cast<int>(b->dimension()), 21));
  const DensityMatrix out = propagate(H, rho, 5.3);
  const Eigen::MatrixXcd h = H.matrix().cast<Complex>();
  CHECK(std::abs((out.elements() * out.elements()).trace() - (rho.elements() * rho.elements()).trace()) < 1e-9);
  CHECK(std::abs((h * out.elements()).trace() - (h * rho.elements()).trace()) < 1e-9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(rho.elements()), eb(out.elements());
  CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("state-vector propagation agrees with density propagation") {
  const auto b = build_sector(8, 2);
  const SpectralHamiltonian H = build_hamiltonian(b, {1.0, 2.5, 0.0});
  const StateVector psi = initial_state_vector(b, {3, 4});
  const StateVector out = propagate(H, psi, 2.2);
  const DensityMatrix rho = propagate(H, psi.to_density(), 2.2);
  CHECK((out.to_density().elements() - rho.elements()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(out.norm_squared() == Approx(1.0).epsilon(1e-13));
  Eigen::VectorXcd in_place = psi.amplitudes();
  propagate_in_place(H, in_place, 2.2);
  CHECK((in_place - out.amplitudes()).cwiseAbs().maxCoeff() < 1e-14);
}
