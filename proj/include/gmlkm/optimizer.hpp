#ifndef GMLKM_OPTIMIZER_HPP
#define GMLKM_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include "gmlkm/dataset.hpp"
#include "gmlkm/graph.hpp"
#include "gmlkm/kernels.hpp"
#include "gmlkm/matrix.hpp"
#include "gmlkm/partitions.hpp"
#include "gmlkm/simplex.hpp"

namespace gmlkm::opt {

// Discrete cluster assignment with every cluster nonempty.
class IndicatorMatrix {
 public:
  IndicatorMatrix(std::vector<int> assignment, int k);

  int k() const { return k_; }
  std::size_t size() const { return assignment_.size(); }
  int operator[](std::size_t i) const { return assignment_[i]; }
  const std::vector<int>& assignment() const { return assignment_; }
  std::vector<std::size_t> cluster_sizes() const;

  bool operator==(const IndicatorMatrix&) const = default;

 private:
  std::vector<int> assignment_;
  int k_;
};

struct RunConfig {
  double objective_tol = 1e-7;  // relative change that counts as converged
  int max_iterations = 100;
  int max_cd_sweeps = 50;
  double mu_tol = 1e-12;
  int mu_max_iterations = 20000;
  std::uint64_t seed = 0;
};

struct OptimizerState {
  IndicatorMatrix y;
  SimplexWeights gamma;  // over base partitions
  SimplexWeights mu;     // over graph filters
  std::vector<double> objective_history;  // value after init, then per iteration
  int iterations = 0;
  bool converged = false;
  int mu_solver_stalls = 0;  // mu updates that hit the iteration cap
};

// tr(sum_p gamma_p^2 Gt H_p H_p^T Gt) - tr(Y^T (...) Y (Y^T Y)^{-1}) with
// Gt = sum_i mu_i G_i, evaluated through the stacked embedding (no n x n
// intermediates beyond the given filters).
double objective(const IndicatorMatrix& y, const SimplexWeights& gamma, const SimplexWeights& mu,
                 const std::vector<partitions::Partition>& parts,
                 const std::vector<graph::GraphFilter>& filters);

// Coordinate-descent k-means on the rows of the stacked embedding: sweeps in
// sample order, takes the best strictly-improving reassignment per sample
// (ties to the lowest cluster index, moves that would empty a cluster are
// skipped), stops when a sweep makes no move or the cap is reached. The trace
// objective never decreases.
IndicatorMatrix update_y(const Matrix& stacked, const IndicatorMatrix& init, int k,
                         int max_sweeps = 50);

// alpha_p = tr(Gt H_p H_p^T Gt) - tr(Y^T Gt H_p H_p^T Gt Y (Y^T Y)^{-1}) >= 0
double compute_alpha(std::size_t p, const IndicatorMatrix& y, const SimplexWeights& mu,
                     const std::vector<partitions::Partition>& parts,
                     const std::vector<graph::GraphFilter>& filters);

// Closed-form simplex minimizer of sum_p gamma_p^2 alpha_p:
// gamma_p proportional to 1 / max(alpha_p, 1e-12).
SimplexWeights update_gamma(const std::vector<double>& alpha);

// M_ij = tr(G_i P G_j) - tr(Y^T G_i P G_j Y (Y^T Y)^{-1}) with
// P = sum_p gamma_p^2 H_p H_p^T, returned symmetrized. mu^T M mu equals the
// objective as a function of mu.
Matrix build_m_matrix(const IndicatorMatrix& y, const SimplexWeights& gamma,
                      const std::vector<partitions::Partition>& parts,
                      const std::vector<graph::GraphFilter>& filters);

struct MuResult {
  SimplexWeights mu;
  bool converged = false;
  int iterations = 0;
};

// min mu^T M mu over the simplex by projected gradient with backtracking,
// warm-started from init. Never returns a worse point than init; for
// indefinite M it still descends monotonically.
MuResult update_mu(const Matrix& m, const SimplexWeights& init, double tol = 1e-12,
                   int max_iterations = 20000);

// Alternating optimization on precomputed inputs. gamma and mu start uniform;
// Y starts from k-means++-style seeding on the initial stacked embedding,
// driven by the seeded generator. Fully deterministic given the config.
OptimizerState run(const std::vector<partitions::Partition>& parts,
                   const std::vector<graph::GraphFilter>& filters, int k,
                   const RunConfig& config);

// Matrix-level engine entry: embeddings are the (possibly row-normalized)
// n x r_p base embeddings, filters the n x n operators.
OptimizerState run_embedded(const std::vector<Matrix>& embeddings,
                            const std::vector<Matrix>& filters, int k, const RunConfig& config);

struct PipelineConfig {
  std::vector<double> kernel_grid = kernels::default_kernel_grid();
  double kernel_shift = 0.0;
  bool center_kernels = false;
  int dimension_multiplier = 1;  // r = multiplier * k, multiplier in 1..4
  bool row_normalize_partitions = false;
  int filter_order = 1;
  bool average_filter_orders = false;
  int neighborhood_size = 5;
  data::Normalization normalization = data::Normalization::none;
  RunConfig opt;

  void validate() const;
};

// Everything the optimizer consumes, derived from a dataset: per view, a
// kernel bank over the grid (each kernel yielding one base embedding) plus
// one adaptive-neighbor graph and its low-pass filter.
struct Pipeline {
  std::vector<Matrix> normalized_views;
  std::vector<Matrix> embeddings;           // view-major: view 0's bank first
  std::vector<graph::AffinityGraph> graphs;  // one per view
  std::vector<graph::GraphFilter> filters;   // one per view
  int k = 0;
};

Pipeline build_pipeline(const data::MultiViewDataset& dataset, const PipelineConfig& config);
OptimizerState run(const data::MultiViewDataset& dataset, const PipelineConfig& config);

}  // namespace gmlkm::opt

#endif
