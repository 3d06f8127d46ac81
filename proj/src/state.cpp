#include "scmxxz/state.hpp"

#include <string>

#include "scmxxz/error.hpp"

namespace scmxxz {

DensityMatrix::DensityMatrix(BasisPtr basis, Eigen::MatrixXcd elements)
    : basis_(std::move(basis)), elements_(std::move(elements)) {
  const auto d = static_cast<Eigen::Index>(basis_->dimension());
  if (elements_.rows() != d || elements_.cols() != d) {
    throw DimensionMismatch("density matrix is " + std::to_string(elements_.rows()) + "x" +
                            std::to_string(elements_.cols()) + " but the sector has dimension " +
                            std::to_string(d));
  }
}

DensityMatrix DensityMatrix::basis_projector(BasisPtr basis, std::size_t k) {
  const auto d = static_cast<Eigen::Index>(basis->dimension());
  if (k >= basis->dimension()) throw IndexOutOfRange("basis index out of range");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
  return {std::move(basis), std::move(m)};
}

DensityMatrix DensityMatrix::maximally_mixed(BasisPtr basis) {
  const auto d = static_cast<Eigen::Index>(basis->dimension());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
  return {std::move(basis), std::move(m)};
}

double DensityMatrix::hermiticity_error() const {
  return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  // Symmetrize so round-off asymmetry does not leak into the spectrum.
  const Eigen::MatrixXcd sym = 0.5 * (elements_ + elements_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw DecompositionFailure("eigenvalue solver failed on density matrix");
  }
  return solver.eigenvalues().minCoeff();
}

StateVector::StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != static_cast<Eigen::Index>(basis_->dimension())) {
    throw DimensionMismatch("state vector has " + std::to_string(amplitudes_.size()) +
                            " amplitudes but the sector has dimension " +
                            std::to_string(basis_->dimension()));
  }
}

StateVector StateVector::basis_state(BasisPtr basis, std::size_t k) {
  if (k >= basis->dimension()) throw IndexOutOfRange("basis index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
  v[static_cast<Eigen::Index>(k)] = 1.0;
  return {std::move(basis), std::move(v)};
}

DensityMatrix StateVector::to_density() const {
  return {basis_, amplitudes_ * amplitudes_.adjoint()};
}

}  // namespace scmxxz
