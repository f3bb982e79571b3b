#ifndef GMLKM_KERNELS_HPP
#define GMLKM_KERNELS_HPP

#include <filesystem>
#include <vector>

#include "gmlkm/matrix.hpp"
#include "gmlkm/simplex.hpp"

namespace gmlkm::kernels {

// Symmetric positive-semidefinite similarity matrix. Symmetry (1e-10
// entrywise) and positive trace are checked at construction; the PSD check is
// an O(n^3) eigensolve and is available separately via validate_psd().
class KernelMatrix {
 public:
  explicit KernelMatrix(Matrix values);

  const Matrix& values() const { return values_; }
  std::size_t size() const { return values_.rows(); }

  // Throws std::invalid_argument when the smallest eigenvalue is below
  // -1e-8 * trace.
  void validate_psd() const;

 private:
  Matrix values_;
};

// K_ij = exp(-||x_i - x_j|| / sigma), diagonal exactly 1.
KernelMatrix exponential_kernel(const Matrix& x, double sigma);

// Median of the n(n-1)/2 pairwise Euclidean distances (mean of the two middle
// values for even counts).
double median_pairwise_distance(const Matrix& x);

// tau in {2^-5, ..., 2^6}: twelve bandwidth multipliers.
std::vector<double> default_kernel_grid();

struct KernelBankOptions {
  double spectral_shift = 0.0;  // adds shift * I to every kernel
  bool center = false;
};

// One kernel per grid value tau with sigma = tau * median pairwise distance,
// in grid order. Throws when all samples coincide (median distance zero).
std::vector<KernelMatrix> kernel_bank(const Matrix& x, const std::vector<double>& grid,
                                      const KernelBankOptions& options = {});

// (I - 11^T/n) K (I - 11^T/n)
KernelMatrix center_kernel(const KernelMatrix& k);

// sum_p gamma_p^2 K_p  (squared simplex weights)
KernelMatrix combine_kernels(const std::vector<KernelMatrix>& bank, const SimplexWeights& gamma);

// Debug export in the dataset CSV convention.
void write_kernel_csv(const KernelMatrix& k, const std::filesystem::path& path);

}  // namespace gmlkm::kernels

#endif
