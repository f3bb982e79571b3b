#include "gmlkm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "gmlkm/linalg.hpp"

namespace gmlkm::graph {

Matrix can_scores(const Matrix& x, int k_nn) {
  const std::size_t n = x.rows();
  if (n < 2) throw std::invalid_argument("can_scores: need at least 2 samples");
  if (k_nn < 1 || static_cast<std::size_t>(k_nn) > n - 1)
    throw std::invalid_argument("can_scores: need 1 <= k_nn <= n-1");

  const Matrix dist = la::pairwise_sq_dists(x);
  const auto k = static_cast<std::size_t>(k_nn);
  Matrix s(n, n);
  std::vector<std::pair<double, std::size_t>> order(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) order[idx++] = {dist(i, j), j};
    // sort by (distance, index) so neighbor ties resolve deterministically
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k + 1),
                      order.end());
    const double d_boundary = order[k].first;
    double denom = 0.0;
    for (std::size_t h = 0; h < k; ++h) denom += d_boundary - order[h].first;
    if (denom <= 1e-12 * d_boundary) {
      // k+1 equidistant neighbors: the closed form degenerates, its limit is
      // uniform weight over the k nearest
      for (std::size_t h = 0; h < k; ++h) s(i, order[h].second) = 1.0 / static_cast<double>(k);
    } else {
      for (std::size_t h = 0; h < k; ++h)
        s(i, order[h].second) = (d_boundary - order[h].first) / denom;
    }
  }
  return s;
}

AffinityGraph can_affinity(const Matrix& x, int k_nn) {
  Matrix a = can_scores(x, k_nn);
  la::symmetrize(a);
  return AffinityGraph{std::move(a), k_nn};
}

namespace {

// D^{-1/2} B D^{-1/2} for B = adjacency (+ I when augmenting); zero-degree
// rows normalize to zero.
Matrix normalized_adjacency(const Matrix& adjacency, bool add_self_loops) {
  const std::size_t n = adjacency.rows();
  std::vector<double> inv_sqrt_deg(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double deg = add_self_loops ? 1.0 : 0.0;
    for (std::size_t j = 0; j < n; ++j) deg += adjacency(i, j);
    inv_sqrt_deg[i] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
  }
  Matrix ahat(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double b = adjacency(i, j);
      if (add_self_loops && i == j) b += 1.0;
      ahat(i, j) = inv_sqrt_deg[i] * b * inv_sqrt_deg[j];
    }
  return ahat;
}

void require_square_symmetric(const Matrix& a, const char* who) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw std::invalid_argument(std::string(who) + ": adjacency must be square");
  if (!la::is_symmetric(a, 1e-10 * std::max(1.0, la::max_abs(a))))
    throw std::invalid_argument(std::string(who) + ": adjacency must be symmetric");
}

}  // namespace

Matrix normalized_laplacian(const AffinityGraph& g) {
  require_square_symmetric(g.adjacency, "normalized_laplacian");
  const std::size_t n = g.adjacency.rows();
  Matrix l = normalized_adjacency(g.adjacency, /*add_self_loops=*/true);
  la::scale(l, -1.0);
  for (std::size_t i = 0; i < n; ++i) l(i, i) += 1.0;
  la::symmetrize(l);
  return l;
}

Matrix low_pass_filter_matrix(const Matrix& adjacency, int order, const FilterOptions& options) {
  require_square_symmetric(adjacency, "low_pass_filter");
  if (order < 1) throw std::invalid_argument("low_pass_filter: order must be >= 1");

  const std::size_t n = adjacency.rows();
  Matrix base = normalized_adjacency(adjacency, options.add_self_loops);
  for (std::size_t i = 0; i < n; ++i) base(i, i) += 1.0;
  la::scale(base, 0.5);

  Matrix sum = base;
  Matrix power = base;
  for (int o = 2; o <= order; ++o) {
    power = la::matmul(power, base);
    la::symmetrize(power);
    for (std::size_t i = 0; i < sum.size(); ++i) sum.data()[i] += power.data()[i];
  }
  if (options.average_orders) la::scale(sum, 1.0 / static_cast<double>(order));
  la::symmetrize(sum);
  return sum;
}

GraphFilter low_pass_filter(const AffinityGraph& g, int order, int source_view,
                            const FilterOptions& options) {
  return GraphFilter{low_pass_filter_matrix(g.adjacency, order, options), order, source_view};
}

double filter_response(double lambda, int order, bool average) {
  const double base = 1.0 - lambda / 2.0;
  double term = 1.0;
  double h = 0.0;
  for (int o = 1; o <= order; ++o) {
    term *= base;
    h += term;
  }
  return average ? h / static_cast<double>(order) : h;
}

Matrix combine_filters(const std::vector<GraphFilter>& filters, const SimplexWeights& mu) {
  if (filters.empty()) throw std::invalid_argument("combine_filters: no filters");
  if (filters.size() != mu.size())
    throw std::invalid_argument("combine_filters: filter and mu counts differ");
  const std::size_t n = filters.front().size();
  for (const auto& f : filters)
    if (f.size() != n) throw std::invalid_argument("combine_filters: filter sizes differ");

  Matrix combined(n, n);
  for (std::size_t i = 0; i < filters.size(); ++i)
    la::add_scaled(combined, mu[i], filters[i].values);
  return combined;
}

void write_graph_csv(const AffinityGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::string line;
  char buf[32];
  for (std::size_t i = 0; i < g.adjacency.rows(); ++i)
    for (std::size_t j = 0; j < g.adjacency.cols(); ++j) {
      const double w = g.adjacency(i, j);
      if (w == 0.0) continue;
      line.clear();
      line += std::to_string(i);
      line.push_back(',');
      line += std::to_string(j);
      line.push_back(',');
      const auto r = std::to_chars(buf, buf + sizeof(buf), w);
      line.append(buf, r.ptr);
      line.push_back('\n');
      out << line;
    }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace gmlkm::graph
