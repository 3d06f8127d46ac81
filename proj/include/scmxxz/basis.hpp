#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace scmxxz {

/// Spin configuration of the chain. Bit i (LSB = site 0) set means site i
/// carries an excitation (spin up).
using Mask = std::uint64_t;

/// Fixed-magnetization sector: every configuration of `n_sites` spins with
/// exactly `n_excitations` up spins, sorted by ascending bitmask.
///
/// Immutable once built and shared between trajectory workers through
/// `std::shared_ptr<const SectorBasis>`.
class SectorBasis {
 public:
  static constexpr int kMaxSites = 63;

  SectorBasis(int n_sites, int n_excitations);

  int n_sites() const { return n_sites_; }
  int n_excitations() const { return n_excitations_; }
  std::size_t dimension() const { return states_.size(); }

  const std::vector<Mask>& states() const { return states_; }
  Mask state(std::size_t k) const { return states_.at(k); }

  /// Sector index of `mask`, or nullopt if it is not in the sector.
  std::optional<std::size_t> index_of(Mask mask) const;

  /// True if site `site` is excited in configuration `k`. No bounds checks.
  bool occupied(std::size_t k, int site) const {
    return (states_[k] >> site) & Mask{1};
  }

 private:
  int n_sites_;
  int n_excitations_;
  std::vector<Mask> states_;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

/// Throws InvalidArgument when q > N, q < 0 or N is outside [2, 63].
BasisPtr build_sector(int n_sites, int n_excitations);

/// Diagonal of sigma^z_site in the sector: +1 where the site is excited, -1 otherwise.
Eigen::VectorXd sigma_z_diagonal(const SectorBasis& basis, int site);

/// Ordered index pairs (k, l) connected by moving one excitation across the
/// bond (left, left + 1). Both orientations are listed. In the Pauli
/// convention each pair carries a sigma^x sigma^x + sigma^y sigma^y matrix
/// element of 2.
std::vector<std::pair<std::size_t, std::size_t>> hop_elements(const SectorBasis& basis,
                                                              int left);

/// Binomial coefficient; throws InvalidArgument on overflow.
std::uint64_t binomial(int n, int k);

}  // namespace scmxxz
