#include "gmlkm/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gmlkm/simd/kernels.hpp"

namespace gmlkm::la {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), "matmul: inner dimensions differ");
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  Matrix c(n, m);
  if (m < 16) {
    // tall-skinny right factor: transpose once so each output entry is a
    // contiguous dot product
    const Matrix bt = transpose(b);
    for (std::size_t i = 0; i < n; ++i) {
      double* ci = c.row(i);
      const double* ai = a.row(i);
      for (std::size_t j = 0; j < m; ++j) ci[j] = simd::dot(ai, bt.row(j), k);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double* ci = c.row(i);
      const double* ai = a.row(i);
      for (std::size_t l = 0; l < k; ++l) {
        if (ai[l] != 0.0) simd::axpy(ai[l], b.row(l), ci, m);
      }
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

void add_scaled(Matrix& acc, double w, const Matrix& x) {
  require(acc.rows() == x.rows() && acc.cols() == x.cols(), "add_scaled: shape mismatch");
  simd::axpy(w, x.data(), acc.data(), x.size());
}

void scale(Matrix& a, double s) { simd::scal(s, a.data(), a.size()); }

double frobenius_sq(const Matrix& a) { return simd::sumsq(a.data(), a.size()); }

double frobenius_inner(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "frobenius_inner: shape mismatch");
  return simd::dot(a.data(), b.data(), a.size());
}

double trace(const Matrix& a) {
  require(a.rows() == a.cols(), "trace: matrix not square");
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), "max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol) return false;
  return true;
}

void symmetrize(Matrix& a) {
  require(a.rows() == a.cols(), "symmetrize: matrix not square");
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
}

Matrix pairwise_sq_dists(const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  Matrix dist(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = simd::sumsq_diff(x.row(i), x.row(j), d);
      dist(i, j) = v;
      dist(j, i) = v;
    }
  }
  return dist;
}

SymEig symmetric_eig(const Matrix& s) {
  require(s.rows() == s.cols() && s.rows() > 0, "symmetric_eig: matrix not square");
  const double scale = std::max(1.0, max_abs(s));
  require(is_symmetric(s, 1e-8 * scale), "symmetric_eig: matrix not symmetric");

  const auto n = static_cast<Eigen::Index>(s.rows());
  // row-major data of a symmetric matrix reads identically as column-major
  Eigen::Map<const Eigen::MatrixXd> mapped(s.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mapped);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eig: eigensolver did not converge");

  // Eigen sorts ascending; flip to descending.
  SymEig out;
  out.values.resize(s.rows());
  out.vectors = Matrix(s.rows(), s.rows());
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = n - 1 - j;
    out.values[static_cast<std::size_t>(j)] = solver.eigenvalues()(src);
    for (Eigen::Index i = 0; i < n; ++i)
      out.vectors(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          solver.eigenvectors()(i, src);
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(const Matrix& s) {
  require(s.rows() == s.cols() && s.rows() > 0, "symmetric_eigenvalues: matrix not square");
  const double scale = std::max(1.0, max_abs(s));
  require(is_symmetric(s, 1e-8 * scale), "symmetric_eigenvalues: matrix not symmetric");

  const auto n = static_cast<Eigen::Index>(s.rows());
  Eigen::Map<const Eigen::MatrixXd> mapped(s.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mapped, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eigenvalues: eigensolver did not converge");

  std::vector<double> values(s.rows());
  for (Eigen::Index j = 0; j < n; ++j)
    values[static_cast<std::size_t>(j)] = solver.eigenvalues()(n - 1 - j);
  return values;
}

std::vector<double> project_to_simplex(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("project_to_simplex: empty input");
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double running = 0.0;
  double tau = 0.0;
  std::size_t support = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    running += u[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) {
      tau = candidate;
      support = j + 1;
    }
  }
  (void)support;
  for (double& x : v) x = std::max(x - tau, 0.0);
  // renormalize so the sum is exactly 1 up to one final rounding
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total > 0.0)
    for (double& x : v) x /= total;
  return v;
}

}  // namespace gmlkm::la
