#ifndef GMLKM_GRAPH_HPP
#define GMLKM_GRAPH_HPP

#include <filesystem>
#include <vector>

#include "gmlkm/matrix.hpp"
#include "gmlkm/simplex.hpp"

namespace gmlkm::graph {

// Symmetric nonnegative affinity built from per-sample adaptive-neighbor
// scores.
struct AffinityGraph {
  Matrix adjacency;
  int neighborhood_size = 0;
};

// Adaptive-neighbor score matrix S: row i solves
//   min_s sum_j d_ij s_j + gamma_i sum_j s_j^2   over the simplex,
// with d_ij the squared Euclidean distances and gamma_i chosen in closed form
// so exactly the k_nn nearest neighbors get positive weight:
//   s_ij = (d_(k+1) - d_ij) / (k d_(k+1) - sum_{h<=k} d_(h)).
// When the k+1 smallest distances coincide (zero denominator) the limit is
// uniform 1/k_nn weight over the k nearest. Rows sum to 1, diagonal is 0.
Matrix can_scores(const Matrix& x, int k_nn);

// (S + S^T) / 2
AffinityGraph can_affinity(const Matrix& x, int k_nn);

// L = I - D^{-1/2} (A + I) D^{-1/2} with D the degree matrix of the
// self-loop-augmented adjacency; eigenvalues lie in [0, 2].
Matrix normalized_laplacian(const AffinityGraph& g);

struct FilterOptions {
  bool add_self_loops = true;
  bool average_orders = false;  // divide the hop sum by the order
};

// Low-pass operator over a graph, with spectral response
// h(lambda) = sum_{o=1..order} (1 - lambda/2)^o at the Laplacian eigenvalues.
struct GraphFilter {
  Matrix values;
  int order = 1;
  int source_view = -1;  // index of the originating view, -1 if not from one

  std::size_t size() const { return values.rows(); }
};

// G = sum_{o=1..order} ((I + Ahat)/2)^o where Ahat is the (optionally
// self-loop-augmented) degree-normalized adjacency.
Matrix low_pass_filter_matrix(const Matrix& adjacency, int order, const FilterOptions& options = {});
GraphFilter low_pass_filter(const AffinityGraph& g, int order, int source_view = -1,
                            const FilterOptions& options = {});

// h(lambda) for lambda in [0, 2]
double filter_response(double lambda, int order, bool average = false);

// sum_i mu_i G_i
Matrix combine_filters(const std::vector<GraphFilter>& filters, const SimplexWeights& mu);

// Coordinate-list (i, j, weight) export of the nonzero adjacency entries.
void write_graph_csv(const AffinityGraph& g, const std::filesystem::path& path);

}  // namespace gmlkm::graph

#endif
