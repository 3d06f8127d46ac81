#include <doctest.h>

#include <algorithm>

#include "scmxxz/basis.hpp"
#include "scmxxz/error.hpp"
#include "support/oracles.hpp"

using namespace scmxxz;

TEST_CASE("sector dimensions") {
  CHECK(SectorBasis(41, 1).dimension() == 41);
  CHECK(SectorBasis(20, 2).dimension() == 190);
  CHECK(SectorBasis(3, 3).dimension() == 1);
  CHECK(SectorBasis(4, 0).dimension() == 1);
}

TEST_CASE("two-site single excitation enumerates 01 then 10") {
  const SectorBasis b(2, 1);
  REQUIRE(b.dimension() == 2);
  CHECK(b.state(0) == 0b01);
  CHECK(b.state(1) == 0b10);
}

TEST_CASE("enumeration matches brute force and index_of round-trips") {
  for (auto [n, q] : {std::pair{6, 0}, {6, 1}, {6, 3}, {8, 4}, {10, 2}, {7, 7}}) {
    const SectorBasis b(n, q);
    const auto masks = oracle::sector_masks(n, q);
    REQUIRE(b.dimension() == masks.size());
    for (std::size_t k = 0; k < masks.size(); ++k) {
      CHECK(b.state(k) == masks[k]);
      CHECK(b.index_of(b.state(k)) == k);
    }
  }
  const SectorBasis b(6, 2);
  CHECK_FALSE(b.index_of(0b111).has_value());
  CHECK_FALSE(b.index_of(0).has_value());
}

TEST_CASE("invalid sectors are rejected") {
  CHECK_THROWS_AS(SectorBasis(1, 1), InvalidArgument);
  CHECK_THROWS_AS(SectorBasis(5, 6), InvalidArgument);
  CHECK_THROWS_AS(SectorBasis(5, -1), InvalidArgument);
  CHECK_THROWS_AS(SectorBasis(64, 1), InvalidArgument);
  CHECK_THROWS_AS(SectorBasis(40, 20), InvalidArgument);  // dimension cap
}

TEST_CASE("sigma_z diagonal follows the bit convention") {
  const SectorBasis b(2, 1);
  const Eigen::VectorXd z0 = sigma_z_diagonal(b, 0);
  // State 0 is mask 01: site 0 excited.
  CHECK(z0(0) == 1.0);
  CHECK(z0(1) == -1.0);
  CHECK(sigma_z_diagonal(SectorBasis(3, 3), 1) == Eigen::VectorXd::Ones(1));
  CHECK_THROWS_AS(sigma_z_diagonal(b, 2), IndexOutOfRange);
  CHECK_THROWS_AS(sigma_z_diagonal(b, -1), IndexOutOfRange);
}

TEST_CASE("total sigma_z is 2q - N in every configuration") {
  const SectorBasis b(9, 4);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.dimension()));
  for (int i = 0; i < 9; ++i) {
    const Eigen::VectorXd z = sigma_z_diagonal(b, i);
    CHECK(((z.array() == 1.0) || (z.array() == -1.0)).all());
    total += z;
  }
  CHECK((total.array() == 2.0 * 4 - 9).all());
}

TEST_CASE("hop elements") {
  using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;
  CHECK(hop_elements(SectorBasis(2, 1), 0) == Pairs{{0, 1}, {1, 0}});
  CHECK(hop_elements(SectorBasis(3, 3), 0).empty());
  CHECK(hop_elements(SectorBasis(3, 3), 1).empty());
  CHECK(hop_elements(SectorBasis(3, 1), 0).size() == 2);
  CHECK_THROWS_AS(hop_elements(SectorBasis(3, 1), 2), IndexOutOfRange);

  const SectorBasis b(8, 3);
  for (int bond = 0; bond < 7; ++bond) {
    const Pairs pairs = hop_elements(b, bond);
    for (const auto& [k, l] : pairs) {
      CHECK(std::find(pairs.begin(), pairs.end(), std::pair{l, k}) != pairs.end());
      const Mask diff = b.state(k) ^ b.state(l);
      CHECK(diff == (Mask{3} << bond));
    }
  }
}

TEST_CASE("binomial") {
  CHECK(binomial(41, 1) == 41);
  CHECK(binomial(20, 2) == 190);
  CHECK(binomial(62, 31) == 465428353255261088ULL);
  CHECK(binomial(5, 7) == 0);
}
