#include "scmxxz/model.hpp"

#include <cmath>
#include <string>

#include "scmxxz/error.hpp"

namespace scmxxz {

namespace {

// Interleaved (re, im) storage of a complex vector viewed as a d x 2 real matrix.
using ReImView = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, 2>, 0, Eigen::Stride<1, 2>>;

ReImView re_im_view(Eigen::VectorXcd& v) {
  return ReImView(reinterpret_cast<double*>(v.data()), v.size(), 2, Eigen::Stride<1, 2>(1, 2));
}

void check_same_sector(const SectorBasis& a, const SectorBasis& b) {
  if (&a == &b) return;
  if (a.n_sites() != b.n_sites() || a.n_excitations() != b.n_excitations()) {
    throw DimensionMismatch("state and Hamiltonian live on different sectors");
  }
}

void check_duration(double duration) {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw InvalidArgument("propagation duration must be finite and non-negative");
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(J) || !std::isfinite(Delta) || !std::isfinite(h)) {
    throw InvalidArgument("model parameters J, Delta, h must be finite");
  }
}

Eigen::MatrixXd xxz_matrix(const SectorBasis& basis, const ModelParams& params) {
  params.validate();
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  const int n = basis.n_sites();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);

  for (Eigen::Index k = 0; k < d; ++k) {
    double zz = 0.0;
    double z_total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double zi = basis.occupied(static_cast<std::size_t>(k), i) ? 1.0 : -1.0;
      z_total += zi;
      if (i + 1 < n) {
        const double zj = basis.occupied(static_cast<std::size_t>(k), i + 1) ? 1.0 : -1.0;
        zz += zi * zj;
      }
    }
    m(k, k) = params.J * params.Delta * zz + params.h * z_total;
  }
  for (int left = 0; left + 1 < n; ++left) {
    for (const auto& [k, l] : hop_elements(basis, left)) {
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) += 2.0 * params.J;
    }
  }
  return m;
}

SpectralHamiltonian::SpectralHamiltonian(BasisPtr basis, Eigen::MatrixXd matrix)
    : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(basis_->dimension());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw DimensionMismatch("Hamiltonian matrix does not match the sector dimension");
  }
  if ((matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw InvalidArgument("Hamiltonian matrix must be exactly symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(matrix_);
  if (solver.info() != Eigen::Success) {
    throw DecompositionFailure("symmetric eigensolver did not converge");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();

  const Eigen::MatrixXd rebuilt =
      eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose();
  const double scale = std::max(matrix_.norm(), 1.0);
  reconstruction_error_ = (rebuilt - matrix_).norm() / scale;
  if (reconstruction_error_ > kReconstructionTolerance) {
    throw DecompositionFailure("eigendecomposition reconstruction error " +
                               std::to_string(reconstruction_error_) + " exceeds tolerance");
  }
}

SpectralHamiltonian build_hamiltonian(BasisPtr basis, const ModelParams& params) {
  Eigen::MatrixXd m = xxz_matrix(*basis, params);
  return SpectralHamiltonian(std::move(basis), std::move(m));
}

DensityMatrix propagate(const SpectralHamiltonian& H, const DensityMatrix& rho, double duration) {
  check_same_sector(H.basis(), rho.basis());
  check_duration(duration);
  if (duration == 0.0) return rho;

  const Eigen::MatrixXd& V = H.eigenvectors();
  const Eigen::VectorXd& lambda = H.eigenvalues();
  const auto d = V.rows();

  // Move to the eigenbasis with real GEMMs on the real and imaginary parts.
  const Eigen::MatrixXd re = V.transpose() * rho.elements().real() * V;
  const Eigen::MatrixXd im = V.transpose() * rho.elements().imag() * V;

  Eigen::VectorXcd phase(d);
  for (Eigen::Index k = 0; k < d; ++k) phase[k] = std::polar(1.0, -lambda[k] * duration);

  Eigen::MatrixXd out_re(d, d);
  Eigen::MatrixXd out_im(d, d);
  for (Eigen::Index l = 0; l < d; ++l) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const Complex v = phase[k] * std::conj(phase[l]) * Complex(re(k, l), im(k, l));
      out_re(k, l) = v.real();
      out_im(k, l) = v.imag();
    }
  }
  Eigen::MatrixXcd result(d, d);
  result.real() = V * out_re * V.transpose();
  result.imag() = V * out_im * V.transpose();
  return {rho.basis_ptr(), std::move(result)};
}

void propagate_in_place(const SpectralHamiltonian& H, Eigen::VectorXcd& psi, double duration) {
  check_duration(duration);
  if (duration == 0.0) return;
  const Eigen::MatrixXd& V = H.eigenvectors();
  const Eigen::VectorXd& lambda = H.eigenvalues();
  if (psi.size() != V.rows()) throw DimensionMismatch("state vector dimension mismatch");

  auto view = re_im_view(psi);
  Eigen::Matrix<double, Eigen::Dynamic, 2> c = V.transpose() * view;
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    const double angle = -lambda[k] * duration;
    const double cs = std::cos(angle);
    const double sn = std::sin(angle);
    const double re = c(k, 0);
    const double im = c(k, 1);
    c(k, 0) = cs * re - sn * im;
    c(k, 1) = sn * re + cs * im;
  }
  view.noalias() = V * c;
}

StateVector propagate(const SpectralHamiltonian& H, const StateVector& psi, double duration) {
  check_same_sector(H.basis(), psi.basis());
  StateVector out = psi;
  propagate_in_place(H, out.amplitudes(), duration);
  return out;
}

}  // namespace scmxxz
