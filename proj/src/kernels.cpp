#include "gmlkm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gmlkm/dataset.hpp"
#include "gmlkm/linalg.hpp"
#include "gmlkm/simd/kernels.hpp"

namespace gmlkm::kernels {

KernelMatrix::KernelMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() == 0 || values_.rows() != values_.cols())
    throw std::invalid_argument("KernelMatrix: matrix must be square and non-empty");
  if (!la::is_symmetric(values_, 1e-10))
    throw std::invalid_argument("KernelMatrix: matrix not symmetric within 1e-10");
  if (!(la::trace(values_) > 0.0))
    throw std::invalid_argument("KernelMatrix: trace must be positive");
}

void KernelMatrix::validate_psd() const {
  const auto eigenvalues = la::symmetric_eigenvalues(values_);
  const double floor = -1e-8 * la::trace(values_);
  if (eigenvalues.back() < floor)
    throw std::invalid_argument("KernelMatrix: not PSD within tolerance");
}

KernelMatrix exponential_kernel(const Matrix& x, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("exponential_kernel: sigma must be > 0");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x.data()[i]))
      throw std::invalid_argument("exponential_kernel: non-finite input");

  const std::size_t n = x.rows(), d = x.cols();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = std::sqrt(simd::sumsq_diff(x.row(i), x.row(j), d));
      const double v = std::exp(-dist / sigma);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return KernelMatrix(std::move(k));
}

double median_pairwise_distance(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  if (n < 2) throw std::invalid_argument("median_pairwise_distance: need at least 2 rows");
  std::vector<double> dists;
  dists.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dists.push_back(std::sqrt(simd::sumsq_diff(x.row(i), x.row(j), d)));
  std::sort(dists.begin(), dists.end());
  const std::size_t count = dists.size();
  if (count % 2 == 1) return dists[count / 2];
  return 0.5 * (dists[count / 2 - 1] + dists[count / 2]);
}

std::vector<double> default_kernel_grid() {
  std::vector<double> grid;
  for (int e = -5; e <= 6; ++e) grid.push_back(std::ldexp(1.0, e));
  return grid;
}

std::vector<KernelMatrix> kernel_bank(const Matrix& x, const std::vector<double>& grid,
                                      const KernelBankOptions& options) {
  if (grid.empty()) throw std::invalid_argument("kernel_bank: empty grid");
  for (const double tau : grid)
    if (!(tau > 0.0)) throw std::invalid_argument("kernel_bank: grid values must be > 0");
  if (!(options.spectral_shift >= 0.0))
    throw std::invalid_argument("kernel_bank: spectral shift must be >= 0");

  const double median = median_pairwise_distance(x);
  if (!(median > 0.0))
    throw std::invalid_argument("kernel_bank: all samples identical (median distance 0)");

  std::vector<KernelMatrix> bank;
  bank.reserve(grid.size());
  for (const double tau : grid) {
    KernelMatrix k = exponential_kernel(x, tau * median);
    if (options.center) k = center_kernel(k);
    if (options.spectral_shift > 0.0) {
      Matrix shifted = k.values();
      for (std::size_t i = 0; i < shifted.rows(); ++i)
        shifted(i, i) += options.spectral_shift;
      k = KernelMatrix(std::move(shifted));
    }
    bank.push_back(std::move(k));
  }
  return bank;
}

KernelMatrix center_kernel(const KernelMatrix& k) {
  const Matrix& src = k.values();
  const std::size_t n = src.rows();
  std::vector<double> row_mean(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    row_mean[i] = simd::sum(src.row(i), n) / static_cast<double>(n);
    total += row_mean[i];
  }
  total /= static_cast<double>(n);
  Matrix centered(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      centered(i, j) = src(i, j) - row_mean[i] - row_mean[j] + total;
  la::symmetrize(centered);
  return KernelMatrix(std::move(centered));
}

KernelMatrix combine_kernels(const std::vector<KernelMatrix>& bank, const SimplexWeights& gamma) {
  if (bank.empty()) throw std::invalid_argument("combine_kernels: empty bank");
  if (bank.size() != gamma.size())
    throw std::invalid_argument("combine_kernels: bank and gamma lengths differ");
  const std::size_t n = bank.front().size();
  for (const auto& k : bank)
    if (k.size() != n) throw std::invalid_argument("combine_kernels: kernel sizes differ");

  Matrix combined(n, n);
  for (std::size_t p = 0; p < bank.size(); ++p)
    la::add_scaled(combined, gamma[p] * gamma[p], bank[p].values());
  return KernelMatrix(std::move(combined));
}

void write_kernel_csv(const KernelMatrix& k, const std::filesystem::path& path) {
  data::write_csv_matrix(k.values(), path);
}

}  // namespace gmlkm::kernels
