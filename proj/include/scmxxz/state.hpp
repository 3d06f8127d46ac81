#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

#include "scmxxz/basis.hpp"

namespace scmxxz {

using Complex = std::complex<double>;

/// Density matrix on a sector Hilbert space.
///
/// Invariants (checked, not enforced): Hermitian, unit trace, positive
/// semidefinite. Use the diagnostics below to measure how far a state has
/// drifted.
class DensityMatrix {
 public:
  DensityMatrix(BasisPtr basis, Eigen::MatrixXcd elements);

  /// |k><k| for sector index k.
  static DensityMatrix basis_projector(BasisPtr basis, std::size_t k);
  /// I / d.
  static DensityMatrix maximally_mixed(BasisPtr basis);

  const SectorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  std::size_t dimension() const { return basis_->dimension(); }

  const Eigen::MatrixXcd& elements() const { return elements_; }
  Eigen::MatrixXcd& elements() { return elements_; }

  /// Occupation probabilities rho_kk (real part of the diagonal).
  Eigen::VectorXd populations() const { return elements_.diagonal().real(); }

  Complex trace() const { return elements_.trace(); }
  /// max |rho_kl - conj(rho_lk)|
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  BasisPtr basis_;
  Eigen::MatrixXcd elements_;
};

/// Pure state |psi> on a sector Hilbert space. Trajectories started from a
/// basis configuration stay pure, so the state-vector path reproduces the
/// density-matrix path at O(d^2) cost per event instead of O(d^3).
class StateVector {
 public:
  StateVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

  static StateVector basis_state(BasisPtr basis, std::size_t k);

  const SectorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  std::size_t dimension() const { return basis_->dimension(); }

  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }

  Eigen::VectorXd populations() const { return amplitudes_.cwiseAbs2(); }
  double norm_squared() const { return amplitudes_.squaredNorm(); }

  /// |psi><psi|
  DensityMatrix to_density() const;

 private:
  BasisPtr basis_;
  Eigen::VectorXcd amplitudes_;
};

}  // namespace scmxxz
