#include "scmxxz/basis.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "scmxxz/error.hpp"

namespace scmxxz {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      throw InvalidArgument("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                            ") overflows");
    }
    result = result * num / static_cast<std::uint64_t>(i);
  }
  return result;
}

SectorBasis::SectorBasis(int n_sites, int n_excitations)
    : n_sites_(n_sites), n_excitations_(n_excitations) {
  if (n_sites < 2 || n_sites > kMaxSites) {
    throw InvalidArgument("n_sites must lie in [2, " + std::to_string(kMaxSites) + "], got " +
                          std::to_string(n_sites));
  }
  if (n_excitations < 0 || n_excitations > n_sites) {
    throw InvalidArgument("n_excitations must lie in [0, n_sites], got " +
                          std::to_string(n_excitations));
  }
  const std::uint64_t dim = binomial(n_sites, n_excitations);
  // Dense d x d complex matrices are allocated downstream.
  if (dim > (std::uint64_t{1} << 20)) {
    throw InvalidArgument("sector dimension " + std::to_string(dim) + " is too large");
  }
  states_.reserve(static_cast<std::size_t>(dim));

  if (n_excitations == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack walks the fixed-popcount masks in increasing order.
  const Mask limit = Mask{1} << n_sites;
  Mask v = (Mask{1} << n_excitations) - 1;
  while (v < limit) {
    states_.push_back(v);
    const Mask t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
}

std::optional<std::size_t> SectorBasis::index_of(Mask mask) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), mask);
  if (it == states_.end() || *it != mask) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

BasisPtr build_sector(int n_sites, int n_excitations) {
  return std::make_shared<const SectorBasis>(n_sites, n_excitations);
}

Eigen::VectorXd sigma_z_diagonal(const SectorBasis& basis, int site) {
  if (site < 0 || site >= basis.n_sites()) {
    throw IndexOutOfRange("site " + std::to_string(site) + " outside chain of " +
                          std::to_string(basis.n_sites()));
  }
  Eigen::VectorXd z(static_cast<Eigen::Index>(basis.dimension()));
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    z[static_cast<Eigen::Index>(k)] = basis.occupied(k, site) ? 1.0 : -1.0;
  }
  return z;
}

std::vector<std::pair<std::size_t, std::size_t>> hop_elements(const SectorBasis& basis,
                                                              int left) {
  if (left < 0 || left >= basis.n_sites() - 1) {
    throw IndexOutOfRange("bond (" + std::to_string(left) + ", " + std::to_string(left + 1) +
                          ") outside chain of " + std::to_string(basis.n_sites()));
  }
  const Mask pair = Mask{3} << left;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    const Mask s = basis.state(k);
    const Mask bits = s & pair;
    // Exactly one of the two sites occupied.
    if (bits == 0 || bits == pair) continue;
    const auto l = basis.index_of(s ^ pair);
    pairs.emplace_back(k, *l);
  }
  return pairs;
}

}  // namespace scmxxz
