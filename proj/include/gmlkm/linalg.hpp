#ifndef GMLKM_LINALG_HPP
#define GMLKM_LINALG_HPP

#include <vector>

#include "gmlkm/matrix.hpp"

namespace gmlkm::la {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// acc += w * x, shapes must match
void add_scaled(Matrix& acc, double w, const Matrix& x);
void scale(Matrix& a, double s);

double frobenius_sq(const Matrix& a);
double frobenius_inner(const Matrix& a, const Matrix& b);
double trace(const Matrix& a);
double max_abs(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

bool is_symmetric(const Matrix& a, double tol);
// a <- (a + a^T)/2
void symmetrize(Matrix& a);

// All-pairs squared Euclidean distances between the rows of x.
Matrix pairwise_sq_dists(const Matrix& x);

struct SymEig {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
};

// Dense symmetric eigendecomposition (descending eigenvalue order).
// Throws std::invalid_argument if s is not square or not symmetric within
// 1e-8 * max|s|, std::runtime_error if the solver fails to converge.
SymEig symmetric_eig(const Matrix& s);
std::vector<double> symmetric_eigenvalues(const Matrix& s);

// Euclidean projection onto the probability simplex {w : w >= 0, sum w = 1}.
std::vector<double> project_to_simplex(std::vector<double> v);

}  // namespace gmlkm::la

#endif
