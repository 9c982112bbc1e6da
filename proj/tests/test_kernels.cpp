#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "inside/error.hpp"
#include "inside/kernels.hpp"
#include "oracles/energy_oracle.hpp"

using namespace inside;

namespace {

RowMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto v = fixtures::random_unit(cols, rng);
    std::copy(v.begin(), v.end(), m.row(i).begin());
  }
  return m;
}

}  // namespace

TEST_CASE("rank_neighbors: parallel equals serial") {
  for (auto [n, d, k] : {std::tuple{2u, 3u, 1u}, {33u, 4u, 32u}, {300u, 16u, 10u}, {513u, 8u, 40u}}) {
    const auto m = random_matrix(n, d, n * 7 + d);
    CHECK(kernels::rank_neighbors(m, k) == kernels::serial::rank_neighbors(m, k));
  }
}

TEST_CASE("rank_neighbors: ties break by index") {
  RowMatrix m(4, 2);
  const double pts[4][2] = {{1, 0}, {0, 1}, {0, -1}, {-1, 0}};
  for (std::size_t i = 0; i < 4; ++i) std::copy(pts[i], pts[i] + 2, m.row(i).begin());
  const auto lists = kernels::rank_neighbors(m, 3);
  CHECK(lists[0][0].index == 1);
  CHECK(lists[0][1].index == 2);
  CHECK(lists[0][2].index == 3);
  CHECK(lists[3][0].index == 1);
}

TEST_CASE("rank_neighbors: rank must be below row count") {
  const auto m = random_matrix(5, 3, 1);
  CHECK_THROWS_AS(kernels::rank_neighbors(m, 5), Error);
  CHECK_THROWS_AS(kernels::serial::rank_neighbors(m, 5), Error);
}

TEST_CASE("energy distance against the definition") {
  const auto x = random_matrix(40, 6, 2);
  const auto y = random_matrix(55, 6, 3);
  const double want = static_cast<double>(oracle::energy_distance(x, y));
  CHECK(kernels::energy_distance(x, y) == doctest::Approx(want).epsilon(1e-12));
  CHECK(kernels::serial::energy_distance(x, y) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("energy distance properties") {
  const auto x = random_matrix(30, 5, 4);
  CHECK(kernels::energy_distance(x, x) == 0.0);
  CHECK(kernels::serial::energy_distance(x, x) == 0.0);
  for (std::uint64_t s = 0; s < 20; ++s) {
    CHECK(kernels::energy_distance(random_matrix(10, 3, s), random_matrix(12, 3, s + 100)) >= 0.0);
  }
  CHECK_THROWS_AS(kernels::energy_distance(RowMatrix(0, 3), x), Error);
  CHECK_THROWS_AS(kernels::energy_distance(random_matrix(3, 4, 1), x), Error);
}

TEST_CASE("nearest distance") {
  const auto probes = random_matrix(200, 8, 5);
  const auto bank = random_matrix(150, 8, 6);
  const auto got = kernels::nearest_distance(probes, bank);
  CHECK(got == kernels::serial::nearest_distance(probes, bank));
  for (std::size_t p = 0; p < probes.rows(); ++p) {
    double best = 2.0;
    for (std::size_t b = 0; b < bank.rows(); ++b) best = std::min(best, cosine_distance(probes.row(p), bank.row(b)));
    CHECK(got[p] == best);
  }
  CHECK(std::isinf(kernels::nearest_distance(probes, RowMatrix(0, 8))[0]));
  CHECK(kernels::nearest_distance(probes, probes)[7] == 0.0);
}
