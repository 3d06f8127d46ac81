#pragma once

#include <Eigen/Dense>

#include "scmxxz/basis.hpp"
#include "scmxxz/state.hpp"

namespace scmxxz {

/// XXZ couplings in the Pauli convention:
///   H = J sum_i [sx_i sx_{i+1} + sy_i sy_{i+1} + Delta sz_i sz_{i+1}] + h sum_i sz_i
/// with open boundaries. J sets the frequency unit.
struct ModelParams {
  double J = 1.0;
  double Delta = 0.0;
  double h = 0.0;

  void validate() const;
  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Sector Hamiltonian together with its eigendecomposition
/// H = V diag(lambda) V^T, used for exact propagation between collisions.
class SpectralHamiltonian {
 public:
  static constexpr double kReconstructionTolerance = 1e-10;

  /// Takes a real symmetric matrix on `basis` and diagonalizes it. Throws
  /// DecompositionFailure if the solver fails or the reconstruction error
  /// exceeds kReconstructionTolerance (relative, Frobenius).
  SpectralHamiltonian(BasisPtr basis, Eigen::MatrixXd matrix);

  const SectorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  std::size_t dimension() const { return basis_->dimension(); }

  const Eigen::MatrixXd& matrix() const { return matrix_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  double reconstruction_error() const { return reconstruction_error_; }

 private:
  BasisPtr basis_;
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  double reconstruction_error_ = 0.0;
};

/// Dense XXZ matrix on the sector (no diagonalization).
Eigen::MatrixXd xxz_matrix(const SectorBasis& basis, const ModelParams& params);

SpectralHamiltonian build_hamiltonian(BasisPtr basis, const ModelParams& params);

/// U rho U^dagger with U = exp(-i H duration). Throws DimensionMismatch when
/// rho lives on a different sector and InvalidArgument for negative durations.
DensityMatrix propagate(const SpectralHamiltonian& H, const DensityMatrix& rho, double duration);

/// U |psi>
StateVector propagate(const SpectralHamiltonian& H, const StateVector& psi, double duration);

/// In-place variant used on the trajectory hot path.
void propagate_in_place(const SpectralHamiltonian& H, Eigen::VectorXcd& psi, double duration);

}  // namespace scmxxz
