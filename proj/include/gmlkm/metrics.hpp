#ifndef GMLKM_METRICS_HPP
#define GMLKM_METRICS_HPP

#include <vector>

namespace gmlkm::metrics {

// Fraction of agreements under the best injective mapping of predicted
// clusters onto truth clusters (optimal assignment on the contingency table).
double clustering_accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

// I(pred; truth) / sqrt(H(pred) H(truth)) with natural-log entropies.
// Both partitions single-cluster -> 1; one degenerate side -> 0.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth);

// Adjusted Rand index from pair counts; 1 for identical partitions, 0 in
// expectation under chance.
double ari(const std::vector<int>& pred, const std::vector<int>& truth);

}  // namespace gmlkm::metrics

#endif
