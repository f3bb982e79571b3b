#include <doctest.h>

#include <cmath>

#include "gmlkm/dataset.hpp"
#include "gmlkm/kernels.hpp"
#include "gmlkm/linalg.hpp"
#include "helpers.hpp"
#include "oracles/jacobi.hpp"

namespace kernels = gmlkm::kernels;
using gmlkm::Matrix;
using gmlkm::SimplexWeights;

TEST_SUITE("kernels") {

TEST_CASE("exponential kernel: unit diagonal and scalar recomputation") {
  gmlkm::Rng rng(21);
  const Matrix x = testutil::random_matrix(3, 2, rng);
  const auto k = kernels::exponential_kernel(x, 1.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(k.values()(i, i) == 1.0);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double dx = x(i, 0) - x(j, 0), dy = x(i, 1) - x(j, 1);
      const double want = std::exp(-std::sqrt(dx * dx + dy * dy));
      CHECK(k.values()(i, j) == doctest::Approx(want).epsilon(1e-15));
    }

  // huge bandwidth flattens everything to 1
  const auto flat = kernels::exponential_kernel(x, 1e12);
  for (std::size_t i = 0; i < flat.values().size(); ++i)
    CHECK(flat.values().data()[i] == doctest::Approx(1.0).epsilon(1e-6));

  CHECK_THROWS_AS(kernels::exponential_kernel(x, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(kernels::exponential_kernel(x, -1.0), std::invalid_argument);
}

TEST_CASE("kernel bank: grid size, median bandwidth, duplicates, degenerate input") {
  CHECK(kernels::default_kernel_grid().size() == 12);

  gmlkm::Rng rng(22);
  const Matrix x = testutil::random_matrix(10, 3, rng);
  const auto bank = kernels::kernel_bank(x, kernels::default_kernel_grid());
  CHECK(bank.size() == 12);

  // two points at distance 2, grid {1}: sigma = 2 so K01 = exp(-1)
  Matrix pair(2, 1);
  pair(1, 0) = 2.0;
  const auto single = kernels::kernel_bank(pair, {1.0});
  REQUIRE(single.size() == 1);
  CHECK(single[0].values()(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  const auto dup = kernels::kernel_bank(x, {0.7, 0.7, 2.0});
  CHECK(dup[0].values() == dup[1].values());
  CHECK(dup[0].values() != dup[2].values());

  const Matrix same(5, 2, 1.25);
  CHECK_THROWS_WITH_AS(kernels::kernel_bank(same, {1.0}), doctest::Contains("identical"),
                       std::invalid_argument);
  CHECK_THROWS_AS(kernels::kernel_bank(x, {}), std::invalid_argument);
}

TEST_CASE("median pairwise distance: single pair and even count") {
  Matrix pair(2, 1);
  pair(1, 0) = 2.0;
  CHECK(kernels::median_pairwise_distance(pair) == 2.0);

  // 4 collinear points 0,1,2,4: six distances {1,1,2,2,3,4} -> median 2
  Matrix line(4, 1);
  line(1, 0) = 1.0;
  line(2, 0) = 2.0;
  line(3, 0) = 4.0;
  CHECK(kernels::median_pairwise_distance(line) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("bank kernels satisfy the PSD invariant") {
  gmlkm::Rng rng(23);
  const Matrix x = testutil::random_matrix(12, 3, rng);
  const auto bank = kernels::kernel_bank(x, {0.25, 1.0, 4.0});
  for (const auto& k : bank) {
    CHECK_NOTHROW(k.validate_psd());
    const auto eig = oracle::jacobi_eigenvalues(k.values());
    CHECK(eig.back() >= -1e-8 * gmlkm::la::trace(k.values()));
  }
}

TEST_CASE("spectral shift and centering options") {
  gmlkm::Rng rng(29);
  const Matrix x = testutil::random_matrix(8, 2, rng);
  const auto plain = kernels::kernel_bank(x, {1.0});
  const auto shifted = kernels::kernel_bank(x, {1.0}, {0.5, false});
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(shifted[0].values()(i, i) == plain[0].values()(i, i) + 0.5);
    for (std::size_t j = i + 1; j < 8; ++j)
      CHECK(shifted[0].values()(i, j) == plain[0].values()(i, j));
  }

  const auto centered = kernels::center_kernel(plain[0]);
  for (std::size_t i = 0; i < 8; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < 8; ++j) row_sum += centered.values()(i, j);
    CHECK(std::abs(row_sum) < 1e-12);
  }
}

TEST_CASE("combine_kernels: one-hot, uniform over copies, dense-sum oracle") {
  gmlkm::Rng rng(24);
  const Matrix x = testutil::random_matrix(9, 2, rng);
  const auto bank = kernels::kernel_bank(x, {0.5, 1.0, 2.0});

  const auto onehot = kernels::combine_kernels(bank, SimplexWeights({0.0, 1.0, 0.0}));
  CHECK(onehot.values() == bank[1].values());

  const std::vector<kernels::KernelMatrix> copies{bank[0], bank[0], bank[0]};
  const auto avg = kernels::combine_kernels(copies, SimplexWeights::uniform(3));
  for (std::size_t i = 0; i < avg.values().size(); ++i)
    CHECK(avg.values().data()[i] ==
          doctest::Approx(bank[0].values().data()[i] / 3.0).epsilon(1e-14));

  const auto gamma = testutil::random_simplex(3, rng);
  const auto mixed = kernels::combine_kernels(bank, SimplexWeights(gamma));
  double want_trace = 0.0;
  for (std::size_t p = 0; p < 3; ++p)
    want_trace += gamma[p] * gamma[p] * gmlkm::la::trace(bank[p].values());
  CHECK(gmlkm::la::trace(mixed.values()) == doctest::Approx(want_trace).epsilon(1e-9));
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) {
      double want = 0.0;
      for (std::size_t p = 0; p < 3; ++p)
        want += gamma[p] * gamma[p] * bank[p].values()(i, j);
      CHECK(mixed.values()(i, j) == doctest::Approx(want).epsilon(1e-13));
    }

  CHECK_THROWS_AS(kernels::combine_kernels(bank, SimplexWeights::uniform(2)),
                  std::invalid_argument);
}

TEST_CASE("kernel csv export uses the dataset convention") {
  gmlkm::Rng rng(26);
  const auto bank = kernels::kernel_bank(testutil::random_matrix(6, 2, rng), {1.0});
  testutil::TempDir dir("kernelcsv");
  kernels::write_kernel_csv(bank[0], dir.path() / "k.csv");
  CHECK(gmlkm::data::read_csv_matrix(dir.path() / "k.csv") == bank[0].values());
}

TEST_CASE("KernelMatrix invariants are enforced") {
  Matrix asym(2, 2);
  asym(0, 0) = 1.0;
  asym(1, 1) = 1.0;
  asym(0, 1) = 0.5;
  asym(1, 0) = 0.5 + 1e-6;
  CHECK_THROWS_AS((void)kernels::KernelMatrix{asym}, std::invalid_argument);

  CHECK_THROWS_AS((void)kernels::KernelMatrix{Matrix(3, 3)}, std::invalid_argument);  // zero trace
}

}  // TEST_SUITE
