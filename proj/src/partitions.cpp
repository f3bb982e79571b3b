#include "gmlkm/partitions.hpp"

#include <cmath>
#include <stdexcept>

#include "gmlkm/linalg.hpp"
#include "gmlkm/simd/kernels.hpp"

namespace gmlkm::partitions {

Partition::Partition(Matrix h) : h_(std::move(h)) {
  if (h_.rows() == 0 || h_.cols() == 0)
    throw std::invalid_argument("Partition: empty embedding");
  if (h_.cols() > h_.rows())
    throw std::invalid_argument("Partition: more columns than rows");
  const std::size_t n = h_.rows(), r = h_.cols();
  double err_sq = 0.0;
  for (std::size_t a = 0; a < r; ++a) {
    for (std::size_t b = a; b < r; ++b) {
      double g = 0.0;
      for (std::size_t i = 0; i < n; ++i) g += h_(i, a) * h_(i, b);
      const double target = (a == b) ? 1.0 : 0.0;
      const double diff = g - target;
      err_sq += (a == b) ? diff * diff : 2.0 * diff * diff;
    }
  }
  if (std::sqrt(err_sq) > 1e-8)
    throw std::invalid_argument("Partition: columns not orthonormal within 1e-8");
}

Partition kernel_kmeans_embedding(const kernels::KernelMatrix& k, std::size_t r) {
  const std::size_t n = k.size();
  if (r < 1 || r > n)
    throw std::invalid_argument("kernel_kmeans_embedding: need 1 <= r <= n");

  const la::SymEig eig = la::symmetric_eig(k.values());
  Matrix h(n, r);
  for (std::size_t j = 0; j < r; ++j) {
    // first strictly-largest magnitude wins, so ties resolve to the lowest row
    std::size_t pivot = 0;
    double best = std::abs(eig.vectors(0, j));
    for (std::size_t i = 1; i < n; ++i) {
      const double mag = std::abs(eig.vectors(i, j));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    const double sign = eig.vectors(pivot, j) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) h(i, j) = sign * eig.vectors(i, j);
  }
  return Partition(std::move(h));
}

Matrix stack_weighted(const std::vector<Partition>& parts, const SimplexWeights& gamma,
                      const Matrix& g) {
  if (parts.empty()) throw std::invalid_argument("stack_weighted: no partitions");
  if (parts.size() != gamma.size())
    throw std::invalid_argument("stack_weighted: partition and gamma counts differ");
  const std::size_t n = parts.front().samples();
  for (const auto& part : parts)
    if (part.samples() != n)
      throw std::invalid_argument("stack_weighted: partitions have different row counts");
  if (g.rows() != n || g.cols() != n)
    throw std::invalid_argument("stack_weighted: G must be n x n");

  std::size_t total_r = 0;
  for (const auto& part : parts) total_r += part.r();

  Matrix stacked(n, total_r);
  std::size_t offset = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const Matrix& h = parts[p].embedding();
    const double w = gamma[p];
    for (std::size_t i = 0; i < n; ++i) {
      double* dst = stacked.row(i) + offset;
      const double* src = h.row(i);
      for (std::size_t j = 0; j < h.cols(); ++j) dst[j] = w * src[j];
    }
    offset += h.cols();
  }
  return la::matmul(g, stacked);
}

}  // namespace gmlkm::partitions
