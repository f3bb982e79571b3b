#ifndef GMLKM_PARTITIONS_HPP
#define GMLKM_PARTITIONS_HPP

#include <vector>

#include "gmlkm/kernels.hpp"
#include "gmlkm/matrix.hpp"
#include "gmlkm/simplex.hpp"

namespace gmlkm::partitions {

// Orthonormal n x r view embedding, columns ordered by descending eigenvalue
// of the originating kernel. Orthonormality (||H^T H - I||_F <= 1e-8) is
// checked at construction.
class Partition {
 public:
  explicit Partition(Matrix h);

  const Matrix& embedding() const { return h_; }
  std::size_t samples() const { return h_.rows(); }
  std::size_t r() const { return h_.cols(); }

 private:
  Matrix h_;
};

// Spectral relaxation: the top-r eigenvectors of K. Deterministic sign
// convention: the largest-magnitude entry of each column is positive, ties
// broken by the lowest row index.
Partition kernel_kmeans_embedding(const kernels::KernelMatrix& k, std::size_t r);

// G * [gamma_1 H_1, ..., gamma_m H_m], an n x (sum r_p) matrix.
Matrix stack_weighted(const std::vector<Partition>& parts, const SimplexWeights& gamma,
                      const Matrix& g);

}  // namespace gmlkm::partitions

#endif
