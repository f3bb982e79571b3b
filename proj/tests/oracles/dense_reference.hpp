#ifndef GMLKM_TESTS_ORACLES_DENSE_REFERENCE_HPP
#define GMLKM_TESTS_ORACLES_DENSE_REFERENCE_HPP

#include <cstddef>
#include <vector>

#include "gmlkm/matrix.hpp"

// From-the-formula reference evaluations with plain loops, materializing every
// intermediate matrix. Deliberately independent of the library's stacked
// embedding path and its simd kernels.
namespace oracle {

inline gmlkm::Matrix mul(const gmlkm::Matrix& a, const gmlkm::Matrix& b) {
  gmlkm::Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < a.cols(); ++l) acc += a(i, l) * b(l, j);
      c(i, j) = acc;
    }
  return c;
}

inline gmlkm::Matrix transpose(const gmlkm::Matrix& a) {
  gmlkm::Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double trace(const gmlkm::Matrix& a) {
  double t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// sum_i mu_i G_i
inline gmlkm::Matrix weighted_sum(const std::vector<gmlkm::Matrix>& mats,
                                  const std::vector<double>& w) {
  gmlkm::Matrix out(mats.front().rows(), mats.front().cols());
  for (std::size_t p = 0; p < mats.size(); ++p)
    for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += w[p] * mats[p].data()[i];
  return out;
}

// projector Y (Y^T Y)^{-1} Y^T as an explicit n x n matrix
inline gmlkm::Matrix cluster_projector(const std::vector<int>& assign, int k) {
  const std::size_t n = assign.size();
  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  for (const int c : assign) counts[static_cast<std::size_t>(c)] += 1.0;
  gmlkm::Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (assign[i] == assign[j]) p(i, j) = 1.0 / counts[static_cast<std::size_t>(assign[i])];
  return p;
}

// tr(S) - tr(P S) for S = sum_p gamma_p^2 Gt H_p H_p^T Gt, Gt = sum_i mu_i G_i
inline double dense_objective(const std::vector<int>& assign, int k,
                              const std::vector<double>& gamma, const std::vector<double>& mu,
                              const std::vector<gmlkm::Matrix>& embeddings,
                              const std::vector<gmlkm::Matrix>& filters) {
  const gmlkm::Matrix gt = weighted_sum(filters, mu);
  const std::size_t n = gt.rows();
  gmlkm::Matrix s(n, n);
  for (std::size_t p = 0; p < embeddings.size(); ++p) {
    const gmlkm::Matrix gh = mul(gt, embeddings[p]);
    const gmlkm::Matrix ghg = mul(gh, transpose(gh));
    const double w = gamma[p] * gamma[p];
    for (std::size_t i = 0; i < s.size(); ++i) s.data()[i] += w * ghg.data()[i];
  }
  const gmlkm::Matrix proj = cluster_projector(assign, k);
  return trace(s) - trace(mul(proj, s));
}

// tr(Gt H_p H_p^T Gt) - tr(P Gt H_p H_p^T Gt)
inline double dense_alpha(std::size_t p, const std::vector<int>& assign, int k,
                          const std::vector<double>& mu,
                          const std::vector<gmlkm::Matrix>& embeddings,
                          const std::vector<gmlkm::Matrix>& filters) {
  const gmlkm::Matrix gt = weighted_sum(filters, mu);
  const gmlkm::Matrix gh = mul(gt, embeddings[p]);
  const gmlkm::Matrix s = mul(gh, transpose(gh));
  const gmlkm::Matrix proj = cluster_projector(assign, k);
  return trace(s) - trace(mul(proj, s));
}

// M_ij = tr(G_i P G_j) - tr(Proj G_i P G_j), P = sum_p gamma_p^2 H_p H_p^T
inline gmlkm::Matrix dense_m_matrix(const std::vector<int>& assign, int k,
                                    const std::vector<double>& gamma,
                                    const std::vector<gmlkm::Matrix>& embeddings,
                                    const std::vector<gmlkm::Matrix>& filters) {
  const std::size_t n = filters.front().rows();
  gmlkm::Matrix p_mat(n, n);
  for (std::size_t p = 0; p < embeddings.size(); ++p) {
    const gmlkm::Matrix hh = mul(embeddings[p], transpose(embeddings[p]));
    const double w = gamma[p] * gamma[p];
    for (std::size_t i = 0; i < p_mat.size(); ++i) p_mat.data()[i] += w * hh.data()[i];
  }
  const gmlkm::Matrix proj = cluster_projector(assign, k);
  const std::size_t mf = filters.size();
  gmlkm::Matrix m(mf, mf);
  for (std::size_t i = 0; i < mf; ++i)
    for (std::size_t j = 0; j < mf; ++j) {
      const gmlkm::Matrix gpg = mul(filters[i], mul(p_mat, filters[j]));
      m(i, j) = trace(gpg) - trace(mul(proj, gpg));
    }
  for (std::size_t i = 0; i < mf; ++i)
    for (std::size_t j = i + 1; j < mf; ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

// trace objective the coordinate-descent step maximizes:
// tr(Y^T (R R^T) Y (Y^T Y)^{-1}) for the rows R of the stacked embedding
inline double dense_cluster_trace(const gmlkm::Matrix& rows, const std::vector<int>& assign,
                                  int k) {
  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  for (const int c : assign) counts[static_cast<std::size_t>(c)] += 1.0;
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < rows.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows.rows(); ++i)
        if (assign[i] == c) s += rows(i, j);
      total += s * s / counts[static_cast<std::size_t>(c)];
    }
  }
  return total;
}

}  // namespace oracle

#endif
