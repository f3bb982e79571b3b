#include "gmlkm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace gmlkm::metrics {

namespace {

struct Contingency {
  std::vector<std::vector<double>> cells;  // pred x truth counts
  std::vector<double> pred_sizes;
  std::vector<double> truth_sizes;
  std::size_t n = 0;
};

std::vector<int> dense_ids(const std::vector<int>& labels, std::size_t& count) {
  std::unordered_map<int, int> ids;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw std::invalid_argument("metrics: labels must be nonnegative");
    const auto [it, inserted] = ids.emplace(labels[i], static_cast<int>(ids.size()));
    out[i] = it->second;
  }
  count = ids.size();
  return out;
}

Contingency contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("metrics: label vectors have different lengths");
  if (pred.empty()) throw std::invalid_argument("metrics: empty label vectors");
  std::size_t np = 0, nt = 0;
  const std::vector<int> p = dense_ids(pred, np);
  const std::vector<int> t = dense_ids(truth, nt);

  Contingency c;
  c.n = pred.size();
  c.cells.assign(np, std::vector<double>(nt, 0.0));
  c.pred_sizes.assign(np, 0.0);
  c.truth_sizes.assign(nt, 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    c.cells[static_cast<std::size_t>(p[i])][static_cast<std::size_t>(t[i])] += 1.0;
    c.pred_sizes[static_cast<std::size_t>(p[i])] += 1.0;
    c.truth_sizes[static_cast<std::size_t>(t[i])] += 1.0;
  }
  return c;
}

// Min-cost square assignment via shortest augmenting paths with potentials.
// Returns the column matched to each row.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t s = cost.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(s + 1, 0.0), v(s + 1, 0.0);
  std::vector<std::size_t> way(s + 1, 0), matched_row(s + 1, s);

  for (std::size_t i = 0; i < s; ++i) {
    matched_row[0] = i;
    std::size_t j0 = 0;
    std::vector<double> min_v(s + 1, inf);
    std::vector<char> used(s + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = matched_row[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= s; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0][j - 1] - u[i0 + 1] - v[j];
        if (cur < min_v[j]) {
          min_v[j] = cur;
          way[j] = j0;
        }
        if (min_v[j] < delta) {
          delta = min_v[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= s; ++j) {
        if (used[j]) {
          u[matched_row[j] + 1] += delta;
          v[j] -= delta;
        } else {
          min_v[j] -= delta;
        }
      }
      j0 = j1;
    } while (matched_row[j0] != s);
    do {
      const std::size_t j1 = way[j0];
      matched_row[j0] = matched_row[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> row_to_col(s, -1);
  for (std::size_t j = 1; j <= s; ++j)
    if (matched_row[j] != s) row_to_col[matched_row[j]] = static_cast<int>(j - 1);
  return row_to_col;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Contingency c = contingency(pred, truth);
  const std::size_t s = std::max(c.cells.size(), c.cells.front().size());
  std::vector<std::vector<double>> cost(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < c.cells.size(); ++i)
    for (std::size_t j = 0; j < c.cells[i].size(); ++j) cost[i][j] = -c.cells[i][j];

  const std::vector<int> match = min_cost_assignment(cost);
  double agreements = 0.0;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    const auto j = static_cast<std::size_t>(match[i]);
    if (j < c.cells[i].size()) agreements += c.cells[i][j];
  }
  return agreements / static_cast<double>(c.n);
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Contingency c = contingency(pred, truth);
  const double n = static_cast<double>(c.n);

  double h_pred = 0.0, h_truth = 0.0;
  for (const double a : c.pred_sizes)
    if (a > 0.0) h_pred -= a / n * std::log(a / n);
  for (const double b : c.truth_sizes)
    if (b > 0.0) h_truth -= b / n * std::log(b / n);

  if (h_pred == 0.0 && h_truth == 0.0) return 1.0;  // both single-cluster
  if (h_pred == 0.0 || h_truth == 0.0) return 0.0;

  double mi = 0.0;
  for (std::size_t i = 0; i < c.cells.size(); ++i)
    for (std::size_t j = 0; j < c.cells[i].size(); ++j) {
      const double cell = c.cells[i][j];
      if (cell > 0.0)
        mi += cell / n * std::log(cell * n / (c.pred_sizes[i] * c.truth_sizes[j]));
    }
  return std::clamp(mi / std::sqrt(h_pred * h_truth), 0.0, 1.0);
}

double ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Contingency c = contingency(pred, truth);

  double index = 0.0, sum_pred = 0.0, sum_truth = 0.0;
  for (const auto& row : c.cells)
    for (const double cell : row) index += comb2(cell);
  for (const double a : c.pred_sizes) sum_pred += comb2(a);
  for (const double b : c.truth_sizes) sum_truth += comb2(b);

  const double total_pairs = comb2(static_cast<double>(c.n));
  if (total_pairs == 0.0) return 1.0;  // single sample: identical partitions

  const double expected = sum_pred * sum_truth / total_pairs;
  const double maximum = 0.5 * (sum_pred + sum_truth);
  const double denom = maximum - expected;
  // denominator vanishes only when both partitions are all-singletons or both
  // single-cluster; the partitions are then equal
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

}  // namespace gmlkm::metrics
