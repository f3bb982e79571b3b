#include "gmlkm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gmlkm/linalg.hpp"
#include "gmlkm/rng.hpp"
#include "gmlkm/simd/kernels.hpp"

namespace gmlkm::opt {

IndicatorMatrix::IndicatorMatrix(std::vector<int> assignment, int k)
    : assignment_(std::move(assignment)), k_(k) {
  if (k_ < 1) throw std::invalid_argument("IndicatorMatrix: k must be >= 1");
  if (assignment_.size() < static_cast<std::size_t>(k_))
    throw std::invalid_argument("IndicatorMatrix: fewer samples than clusters");
  std::vector<std::size_t> counts(static_cast<std::size_t>(k_), 0);
  for (const int c : assignment_) {
    if (c < 0 || c >= k_)
      throw std::invalid_argument("IndicatorMatrix: assignment out of range");
    ++counts[static_cast<std::size_t>(c)];
  }
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] == 0)
      throw std::invalid_argument("IndicatorMatrix: cluster " + std::to_string(c) + " is empty");
}

std::vector<std::size_t> IndicatorMatrix::cluster_sizes() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(k_), 0);
  for (const int c : assignment_) ++counts[static_cast<std::size_t>(c)];
  return counts;
}

namespace {

// per-cluster column sums of the rows of m (k x cols)
Matrix cluster_sums(const Matrix& m, const IndicatorMatrix& y) {
  Matrix sums(static_cast<std::size_t>(y.k()), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    simd::axpy(1.0, m.row(i), sums.row(static_cast<std::size_t>(y[i])), m.cols());
  return sums;
}

// tr(Y^T (M M^T) Y (Y^T Y)^{-1}) = sum_c ||colsum_c(M)||^2 / n_c
double projected_trace(const Matrix& m, const IndicatorMatrix& y) {
  const Matrix sums = cluster_sums(m, y);
  const auto counts = y.cluster_sizes();
  double total = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c)
    total += simd::sumsq(sums.row(c), sums.cols()) / static_cast<double>(counts[c]);
  return total;
}

double objective_of(const Matrix& stacked, const IndicatorMatrix& y) {
  return la::frobenius_sq(stacked) - projected_trace(stacked, y);
}

// B_p = sum_i mu_i G_i H_p without forming the combined filter
Matrix filtered_embedding(const Matrix& h, const std::vector<Matrix>& filters,
                          const SimplexWeights& mu) {
  Matrix b(h.rows(), h.cols());
  for (std::size_t i = 0; i < filters.size(); ++i)
    la::add_scaled(b, mu[i], la::matmul(filters[i], h));
  return b;
}

Matrix concat_scaled(const std::vector<Matrix>& blocks, const std::vector<double>& weights) {
  const std::size_t n = blocks.front().rows();
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.cols();
  Matrix out(n, total);
  std::size_t offset = 0;
  for (std::size_t p = 0; p < blocks.size(); ++p) {
    const Matrix& b = blocks[p];
    for (std::size_t i = 0; i < n; ++i) {
      double* dst = out.row(i) + offset;
      const double* src = b.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j) dst[j] = weights[p] * src[j];
    }
    offset += b.cols();
  }
  return out;
}

std::vector<Matrix> embeddings_of(const std::vector<partitions::Partition>& parts) {
  std::vector<Matrix> h;
  h.reserve(parts.size());
  for (const auto& p : parts) h.push_back(p.embedding());
  return h;
}

std::vector<Matrix> matrices_of(const std::vector<graph::GraphFilter>& filters) {
  std::vector<Matrix> g;
  g.reserve(filters.size());
  for (const auto& f : filters) g.push_back(f.values);
  return g;
}

void check_engine_inputs(const std::vector<Matrix>& embeddings, const std::vector<Matrix>& filters,
                         int k) {
  if (embeddings.empty()) throw std::invalid_argument("optimizer: no base embeddings");
  if (filters.empty()) throw std::invalid_argument("optimizer: no graph filters");
  const std::size_t n = embeddings.front().rows();
  for (const auto& h : embeddings)
    if (h.rows() != n || h.cols() == 0)
      throw std::invalid_argument("optimizer: embedding shape mismatch");
  for (const auto& g : filters)
    if (g.rows() != n || g.cols() != n)
      throw std::invalid_argument("optimizer: filter shape mismatch");
  if (k < 1) throw std::invalid_argument("optimizer: k must be >= 1");
  if (n < static_cast<std::size_t>(k))
    throw std::invalid_argument("optimizer: fewer samples than clusters");
}

// k-means++-style seeding on the rows of the stacked embedding, then nearest
// assignment with seed rows pinned to their own clusters so none start empty.
IndicatorMatrix seed_assignment(const Matrix& rows, int k, Rng& rng) {
  const std::size_t n = rows.rows(), d = rows.cols();
  const auto kk = static_cast<std::size_t>(k);

  std::vector<std::size_t> seeds;
  seeds.reserve(kk);
  std::vector<char> is_seed(n, 0);
  std::vector<double> dist2(n, 0.0);

  const std::size_t first = rng.uniform_below(n);
  seeds.push_back(first);
  is_seed[first] = 1;
  for (std::size_t i = 0; i < n; ++i)
    dist2[i] = simd::sumsq_diff(rows.row(i), rows.row(first), d);

  while (seeds.size() < kk) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (!is_seed[i]) total += dist2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (is_seed[i]) continue;
        acc += dist2[i];
        if (acc > u) {
          pick = i;
          break;
        }
        if (dist2[i] > 0.0) pick = i;  // guards against rounding at the top end
      }
    } else {
      // all remaining rows coincide with a seed; pick uniformly among them
      std::size_t target = rng.uniform_below(n - seeds.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (is_seed[i]) continue;
        if (target == 0) {
          pick = i;
          break;
        }
        --target;
      }
    }
    seeds.push_back(pick);
    is_seed[pick] = 1;
    for (std::size_t i = 0; i < n; ++i)
      dist2[i] = std::min(dist2[i], simd::sumsq_diff(rows.row(i), rows.row(pick), d));
  }

  std::vector<int> assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double best = simd::sumsq_diff(rows.row(i), rows.row(seeds[0]), d);
    int best_c = 0;
    for (std::size_t c = 1; c < kk; ++c) {
      const double v = simd::sumsq_diff(rows.row(i), rows.row(seeds[c]), d);
      if (v < best) {
        best = v;
        best_c = static_cast<int>(c);
      }
    }
    assign[i] = best_c;
  }
  for (std::size_t c = 0; c < kk; ++c) assign[seeds[c]] = static_cast<int>(c);
  return IndicatorMatrix(std::move(assign), k);
}

}  // namespace

IndicatorMatrix update_y(const Matrix& stacked, const IndicatorMatrix& init, int k,
                         int max_sweeps) {
  const std::size_t n = stacked.rows(), d = stacked.cols();
  if (init.size() != n) throw std::invalid_argument("update_y: init size mismatch");
  if (init.k() != k) throw std::invalid_argument("update_y: init built for different k");
  if (max_sweeps < 1) throw std::invalid_argument("update_y: max_sweeps must be >= 1");
  const auto kk = static_cast<std::size_t>(k);

  std::vector<int> assign = init.assignment();
  std::vector<double> row_sq(n);
  for (std::size_t i = 0; i < n; ++i) row_sq[i] = simd::sumsq(stacked.row(i), d);

  std::vector<std::size_t> counts(kk);
  Matrix sums(kk, d);
  std::vector<double> sums_sq(kk);
  std::vector<double> dots(kk);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    // rebuild the bookkeeping each sweep so incremental rounding cannot drift
    std::fill(counts.begin(), counts.end(), 0);
    std::fill(sums.data(), sums.data() + sums.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[static_cast<std::size_t>(assign[i])];
      simd::axpy(1.0, stacked.row(i), sums.row(static_cast<std::size_t>(assign[i])), d);
    }
    for (std::size_t c = 0; c < kk; ++c) sums_sq[c] = simd::sumsq(sums.row(c), d);

    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto a = static_cast<std::size_t>(assign[i]);
      if (counts[a] == 1) continue;  // moving would empty cluster a
      const double* h = stacked.row(i);
      const double hh = row_sq[i];

      for (std::size_t c = 0; c < kk; ++c) dots[c] = simd::dot(sums.row(c), h, d);
      const double source_after = sums_sq[a] - 2.0 * dots[a] + hh;
      const double removal = source_after / static_cast<double>(counts[a] - 1) -
                             sums_sq[a] / static_cast<double>(counts[a]);

      double best_delta = 0.0;
      std::size_t best_c = a;
      for (std::size_t c = 0; c < kk; ++c) {
        if (c == a) continue;
        const double target_after = sums_sq[c] + 2.0 * dots[c] + hh;
        const double addition = target_after / static_cast<double>(counts[c] + 1) -
                                sums_sq[c] / static_cast<double>(counts[c]);
        const double delta = addition + removal;
        // strictly improving moves only; ties keep the earlier (lower) index
        if (delta > best_delta) {
          best_delta = delta;
          best_c = c;
        }
      }
      if (best_c == a) continue;

      simd::axpy(-1.0, h, sums.row(a), d);
      simd::axpy(1.0, h, sums.row(best_c), d);
      sums_sq[a] = source_after;
      sums_sq[best_c] = sums_sq[best_c] + 2.0 * dots[best_c] + hh;
      --counts[a];
      ++counts[best_c];
      assign[i] = static_cast<int>(best_c);
      moved = true;
    }
    if (!moved) break;
  }
  return IndicatorMatrix(std::move(assign), k);
}

SimplexWeights update_gamma(const std::vector<double>& alpha) {
  if (alpha.empty()) throw std::invalid_argument("update_gamma: empty alpha");
  std::vector<double> inverse(alpha.size());
  for (std::size_t p = 0; p < alpha.size(); ++p) {
    if (!(alpha[p] >= 0.0))
      throw std::invalid_argument("update_gamma: alpha entries must be >= 0");
    inverse[p] = 1.0 / std::max(alpha[p], 1e-12);
  }
  return SimplexWeights::normalized(std::move(inverse));
}

MuResult update_mu(const Matrix& m, const SimplexWeights& init, double tol, int max_iterations) {
  const std::size_t dim = m.rows();
  if (dim == 0 || m.cols() != dim) throw std::invalid_argument("update_mu: M must be square");
  if (init.size() != dim) throw std::invalid_argument("update_mu: init size mismatch");
  if (!la::is_symmetric(m, 1e-8 * std::max(1.0, la::max_abs(m))))
    throw std::invalid_argument("update_mu: M must be symmetric");
  if (dim == 1) return {SimplexWeights::uniform(1), true, 0};

  const auto apply_m = [&](const std::vector<double>& v) {
    std::vector<double> out(dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) out[i] = simd::dot(m.row(i), v.data(), dim);
    return out;
  };
  const auto quad = [&](const std::vector<double>& v) {
    const std::vector<double> mv = apply_m(v);
    return simd::dot(v.data(), mv.data(), dim);
  };

  std::vector<double> mu = init.values();
  double f = quad(mu);
  std::vector<double> best_mu = mu;
  double best_f = f;

  // Fixed step below 1/L with L = 2 * spectral radius <= 2 ||M||_F. The
  // descent lemma then makes every projected step non-increasing for any
  // symmetric M, and the iterate contracts to the fixed point without the
  // rounding stalls a value-based line search hits near the optimum.
  const double step = 1.0 / std::max(2.0 * std::sqrt(la::frobenius_sq(m)), 1e-12);

  bool converged = false;
  int it = 0;
  for (; it < max_iterations; ++it) {
    std::vector<double> candidate(dim);
    const std::vector<double> mv = apply_m(mu);
    for (std::size_t i = 0; i < dim; ++i) candidate[i] = mu[i] - step * 2.0 * mv[i];
    candidate = la::project_to_simplex(std::move(candidate));

    double residual = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      residual = std::max(residual, std::abs(candidate[i] - mu[i]));

    mu = std::move(candidate);
    f = quad(mu);
    if (f < best_f) {
      best_f = f;
      best_mu = mu;
    }
    if (residual <= tol) {
      converged = true;
      ++it;
      break;
    }
  }

  // rounding can leave the final iterate a hair above the best one seen
  if (f > best_f) mu = best_mu;
  return {SimplexWeights(std::move(mu)), converged, it};
}

double compute_alpha(std::size_t p, const IndicatorMatrix& y, const SimplexWeights& mu,
                     const std::vector<partitions::Partition>& parts,
                     const std::vector<graph::GraphFilter>& filters) {
  if (p >= parts.size()) throw std::invalid_argument("compute_alpha: view index out of range");
  if (mu.size() != filters.size())
    throw std::invalid_argument("compute_alpha: mu and filter counts differ");
  const Matrix b = filtered_embedding(parts[p].embedding(), matrices_of(filters), mu);
  if (b.rows() != y.size()) throw std::invalid_argument("compute_alpha: Y size mismatch");
  return la::frobenius_sq(b) - projected_trace(b, y);
}

double objective(const IndicatorMatrix& y, const SimplexWeights& gamma, const SimplexWeights& mu,
                 const std::vector<partitions::Partition>& parts,
                 const std::vector<graph::GraphFilter>& filters) {
  if (gamma.size() != parts.size())
    throw std::invalid_argument("objective: gamma and partition counts differ");
  if (mu.size() != filters.size())
    throw std::invalid_argument("objective: mu and filter counts differ");
  const std::vector<Matrix> g = matrices_of(filters);
  std::vector<Matrix> filtered;
  filtered.reserve(parts.size());
  for (const auto& part : parts) filtered.push_back(filtered_embedding(part.embedding(), g, mu));
  const Matrix stacked = concat_scaled(filtered, gamma.values());
  if (stacked.rows() != y.size()) throw std::invalid_argument("objective: Y size mismatch");
  return objective_of(stacked, y);
}

Matrix build_m_matrix(const IndicatorMatrix& y, const SimplexWeights& gamma,
                      const std::vector<partitions::Partition>& parts,
                      const std::vector<graph::GraphFilter>& filters) {
  if (gamma.size() != parts.size())
    throw std::invalid_argument("build_m_matrix: gamma and partition counts differ");
  if (filters.empty()) throw std::invalid_argument("build_m_matrix: no filters");
  const std::size_t mf = filters.size();
  const auto counts = y.cluster_sizes();

  Matrix m(mf, mf);
  std::vector<Matrix> w(mf);
  std::vector<Matrix> sums(mf);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const double weight = gamma[p] * gamma[p];
    for (std::size_t i = 0; i < mf; ++i) {
      w[i] = la::matmul(filters[i].values, parts[p].embedding());
      sums[i] = cluster_sums(w[i], y);
    }
    for (std::size_t i = 0; i < mf; ++i)
      for (std::size_t j = i; j < mf; ++j) {
        double value = la::frobenius_inner(w[i], w[j]);
        for (std::size_t c = 0; c < counts.size(); ++c)
          value -= simd::dot(sums[i].row(c), sums[j].row(c), sums[i].cols()) /
                   static_cast<double>(counts[c]);
        m(i, j) += weight * value;
        if (i != j) m(j, i) += weight * value;
      }
  }
  la::symmetrize(m);
  return m;
}

namespace {

struct Engine {
  std::vector<Matrix> h;                     // base embeddings
  std::vector<Matrix> g;                     // filters
  std::vector<std::vector<Matrix>> w;        // w[p][i] = G_i H_p
  std::vector<Matrix> fro;                   // fro[p](i,j) = <w[p][i], w[p][j]>_F
  std::vector<Matrix> filtered;              // B_p = sum_i mu_i w[p][i]
  std::size_t n = 0;

  Engine(std::vector<Matrix> embeddings, std::vector<Matrix> filter_mats)
      : h(std::move(embeddings)), g(std::move(filter_mats)) {
    n = h.front().rows();
    const std::size_t mp = h.size(), mf = g.size();
    w.resize(mp);
    fro.assign(mp, Matrix(mf, mf));
    for (std::size_t p = 0; p < mp; ++p) {
      w[p].reserve(mf);
      for (std::size_t i = 0; i < mf; ++i) w[p].push_back(la::matmul(g[i], h[p]));
      for (std::size_t i = 0; i < mf; ++i)
        for (std::size_t j = i; j < mf; ++j) {
          const double v = la::frobenius_inner(w[p][i], w[p][j]);
          fro[p](i, j) = v;
          fro[p](j, i) = v;
        }
    }
    filtered.resize(mp);
  }

  void refresh_filtered(const SimplexWeights& mu) {
    for (std::size_t p = 0; p < h.size(); ++p) {
      Matrix b(n, h[p].cols());
      for (std::size_t i = 0; i < g.size(); ++i) la::add_scaled(b, mu[i], w[p][i]);
      filtered[p] = std::move(b);
    }
  }

  std::vector<double> alphas(const IndicatorMatrix& y) const {
    std::vector<double> a(h.size());
    for (std::size_t p = 0; p < h.size(); ++p)
      a[p] = std::max(0.0, la::frobenius_sq(filtered[p]) - projected_trace(filtered[p], y));
    return a;
  }

  Matrix mu_objective_matrix(const IndicatorMatrix& y, const SimplexWeights& gamma) const {
    const std::size_t mf = g.size();
    const auto counts = y.cluster_sizes();
    Matrix m(mf, mf);
    std::vector<Matrix> sums(mf);
    for (std::size_t p = 0; p < h.size(); ++p) {
      const double weight = gamma[p] * gamma[p];
      if (weight == 0.0) continue;
      for (std::size_t i = 0; i < mf; ++i) sums[i] = cluster_sums(w[p][i], y);
      for (std::size_t i = 0; i < mf; ++i)
        for (std::size_t j = i; j < mf; ++j) {
          double value = fro[p](i, j);
          for (std::size_t c = 0; c < counts.size(); ++c)
            value -= simd::dot(sums[i].row(c), sums[j].row(c), sums[i].cols()) /
                     static_cast<double>(counts[c]);
          m(i, j) += weight * value;
          if (i != j) m(j, i) += weight * value;
        }
    }
    la::symmetrize(m);
    return m;
  }
};

}  // namespace

OptimizerState run_embedded(const std::vector<Matrix>& embeddings,
                            const std::vector<Matrix>& filters, int k, const RunConfig& config) {
  check_engine_inputs(embeddings, filters, k);
  if (config.max_iterations < 1)
    throw std::invalid_argument("optimizer: max_iterations must be >= 1");
  if (!(config.objective_tol > 0.0))
    throw std::invalid_argument("optimizer: objective_tol must be > 0");

  Engine engine(embeddings, filters);
  SimplexWeights gamma = SimplexWeights::uniform(engine.h.size());
  SimplexWeights mu = SimplexWeights::uniform(engine.g.size());
  engine.refresh_filtered(mu);
  Matrix stacked = concat_scaled(engine.filtered, gamma.values());

  Rng rng(config.seed);
  IndicatorMatrix y = seed_assignment(stacked, k, rng);

  std::vector<double> history;
  history.push_back(objective_of(stacked, y));

  int iterations = 0;
  bool converged = false;
  int mu_stalls = 0;
  for (int it = 1; it <= config.max_iterations; ++it) {
    iterations = it;
    y = update_y(stacked, y, k, config.max_cd_sweeps);
    gamma = update_gamma(engine.alphas(y));
    const Matrix m = engine.mu_objective_matrix(y, gamma);
    MuResult mu_res = update_mu(m, mu, config.mu_tol, config.mu_max_iterations);
    mu = std::move(mu_res.mu);
    if (!mu_res.converged) ++mu_stalls;

    engine.refresh_filtered(mu);
    stacked = concat_scaled(engine.filtered, gamma.values());

    const double previous = history.back();
    const double current = objective_of(stacked, y);
    history.push_back(current);
    if (std::abs(previous - current) <= config.objective_tol * std::max(std::abs(previous), 1e-12)) {
      converged = true;
      break;
    }
  }

  return OptimizerState{std::move(y),      std::move(gamma), std::move(mu),
                        std::move(history), iterations,       converged,
                        mu_stalls};
}

OptimizerState run(const std::vector<partitions::Partition>& parts,
                   const std::vector<graph::GraphFilter>& filters, int k,
                   const RunConfig& config) {
  return run_embedded(embeddings_of(parts), matrices_of(filters), k, config);
}

void PipelineConfig::validate() const {
  if (kernel_grid.empty()) throw std::invalid_argument("pipeline: empty kernel grid");
  for (const double tau : kernel_grid)
    if (!(tau > 0.0)) throw std::invalid_argument("pipeline: kernel grid values must be > 0");
  if (!(kernel_shift >= 0.0)) throw std::invalid_argument("pipeline: kernel_shift must be >= 0");
  if (dimension_multiplier < 1 || dimension_multiplier > 4)
    throw std::invalid_argument("pipeline: dimension_multiplier must be in 1..4");
  if (filter_order < 1) throw std::invalid_argument("pipeline: filter_order must be >= 1");
  if (neighborhood_size < 1)
    throw std::invalid_argument("pipeline: neighborhood_size must be >= 1");
  if (!(opt.objective_tol > 0.0) || !(opt.mu_tol > 0.0))
    throw std::invalid_argument("pipeline: tolerances must be > 0");
  if (opt.max_iterations < 1 || opt.max_cd_sweeps < 1 || opt.mu_max_iterations < 1)
    throw std::invalid_argument("pipeline: iteration caps must be >= 1");
}

Pipeline build_pipeline(const data::MultiViewDataset& dataset, const PipelineConfig& config) {
  dataset.validate();
  config.validate();
  const std::size_t n = dataset.samples();
  const std::size_t r = static_cast<std::size_t>(config.dimension_multiplier) *
                        static_cast<std::size_t>(dataset.k);
  if (r > n)
    throw std::invalid_argument("pipeline: embedding dimension r exceeds sample count");
  if (static_cast<std::size_t>(config.neighborhood_size) > n - 1)
    throw std::invalid_argument("pipeline: neighborhood_size must be <= n-1");

  Pipeline out;
  out.k = dataset.k;
  const kernels::KernelBankOptions bank_options{config.kernel_shift, config.center_kernels};
  for (std::size_t p = 0; p < dataset.view_count(); ++p) {
    Matrix x = data::normalize_view(dataset.views[p], config.normalization);
    const auto bank = kernels::kernel_bank(x, config.kernel_grid, bank_options);
    for (const auto& kernel : bank) {
      Matrix h = partitions::kernel_kmeans_embedding(kernel, r).embedding();
      if (config.row_normalize_partitions)
        h = data::normalize_view(h, data::Normalization::unit_row_norm);
      out.embeddings.push_back(std::move(h));
    }
    graph::AffinityGraph g = graph::can_affinity(x, config.neighborhood_size);
    out.filters.push_back(graph::low_pass_filter(
        g, config.filter_order, static_cast<int>(p),
        graph::FilterOptions{true, config.average_filter_orders}));
    out.graphs.push_back(std::move(g));
    out.normalized_views.push_back(std::move(x));
  }
  return out;
}

OptimizerState run(const data::MultiViewDataset& dataset, const PipelineConfig& config) {
  const Pipeline pipeline = build_pipeline(dataset, config);
  return run_embedded(pipeline.embeddings, matrices_of(pipeline.filters), pipeline.k, config.opt);
}

}  // namespace gmlkm::opt
