#ifndef GMLKM_TESTS_ORACLES_JACOBI_HPP
#define GMLKM_TESTS_ORACLES_JACOBI_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "gmlkm/matrix.hpp"

// Cyclic Jacobi eigensolver. Test-only oracle, independent of the
// tridiagonalization path used by the library.
namespace oracle {

struct JacobiEig {
  std::vector<double> values;  // descending
  gmlkm::Matrix vectors;       // column j pairs with values[j]
};

inline JacobiEig jacobi_eig(gmlkm::Matrix a, int max_sweeps = 100) {
  const std::size_t n = a.rows();
  gmlkm::Matrix v = gmlkm::Matrix::identity(n);

  double frob = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) frob += a.data()[i] * a.data()[i];
  frob = std::sqrt(frob);
  const double stop = 1e-14 * std::max(frob, 1.0);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off) <= stop) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = {a(i, i), i};
  std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });

  JacobiEig out;
  out.values.resize(n);
  out.vectors = gmlkm::Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = order[j].first;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j].second);
  }
  return out;
}

inline std::vector<double> jacobi_eigenvalues(const gmlkm::Matrix& a, int max_sweeps = 100) {
  return jacobi_eig(a, max_sweeps).values;
}

}  // namespace oracle

#endif
