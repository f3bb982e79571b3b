#ifndef GMLKM_PEP_HPP
#define GMLKM_PEP_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "gmlkm/graph.hpp"
#include "gmlkm/kernels.hpp"
#include "gmlkm/simplex.hpp"

namespace gmlkm::pep {

// Descending nonnegative eigenvalue list. Entries down to -1e-8 * max(1, l1)
// are treated as PSD rounding noise and clamped to zero.
class Spectrum {
 public:
  static Spectrum from_values(std::vector<double> descending);
  const std::vector<double>& eigenvalues() const { return values_; }

 private:
  std::vector<double> values_;
};

// Share of a kernel matrix's spectral mass carried by its top t eigenvalues,
// 1 <= t <= n-1. Always in (0, 1], non-decreasing in t.
double empirical_pep(const kernels::KernelMatrix& k, int t);

// Same ratio on an explicit spectrum; t is clamped to the spectrum length.
double pep_from_spectrum(const Spectrum& spectrum, int t);

struct BoundInputs {
  std::size_t n = 0;  // sample count
  std::size_t m = 0;  // kernel count
  int t = 0;          // eigenvalue cutoff
  double theta = 0.0;               // > 1
  double delta = 0.0;               // confidence, in (0, 1]
  double inner_product_bound = 0.0; // b
  double hypothesis_norm_bound = 0.0;  // D
  double kappa = 0.0;               // sup of kernel traces
  double z = 0.0;                   // sum of per-kernel eigenvalue proportions
  double empirical_risk = 0.0;

  void validate() const;
};

struct BoundTerms {
  double risk_term = 0.0;        // theta/(theta-1) * empirical risk
  double complexity_term = 0.0;  // c1 / sqrt(n z), c1 = 6 theta b D sqrt(2 kappa m^{2/z-1})
  double residual_term = 0.0;    // (c2 + c3)/n, c2 = 48 theta b t,
                                 // c3 = (44 b + 20 b theta) log(1/delta)
  double total() const { return risk_term + complexity_term + residual_term; }
};

BoundTerms bound_value(const BoundInputs& inputs);

struct PepRow {
  std::size_t view = 0;
  int t = 0;
  double before = 0.0;  // raw kernel
  double after = 0.0;   // filtered kernel Gt K Gt, Gt = sum_i mu_i G_i
};

// Per-kernel eigenvalue-proportion diagnostic before and after filtering.
// Purely observational: no ordering between the two columns is enforced.
std::vector<PepRow> pep_report(const std::vector<kernels::KernelMatrix>& bank,
                               const std::vector<graph::GraphFilter>& filters,
                               const SimplexWeights& mu, int t);

std::string pep_report_csv(const std::vector<PepRow>& rows);

}  // namespace gmlkm::pep

#endif
