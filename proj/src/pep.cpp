#include "gmlkm/pep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "gmlkm/linalg.hpp"

namespace gmlkm::pep {

Spectrum Spectrum::from_values(std::vector<double> descending) {
  if (descending.empty()) throw std::invalid_argument("Spectrum: empty");
  for (std::size_t i = 1; i < descending.size(); ++i)
    if (descending[i] > descending[i - 1])
      throw std::invalid_argument("Spectrum: eigenvalues not sorted descending");
  const double floor = -1e-8 * std::max(1.0, descending.front());
  for (double& v : descending) {
    if (v < floor) throw std::invalid_argument("Spectrum: significantly negative eigenvalue");
    if (v < 0.0) v = 0.0;
  }
  Spectrum out;
  out.values_ = std::move(descending);
  return out;
}

namespace {

double top_share(const std::vector<double>& descending_nonneg, std::size_t t) {
  double top = 0.0, total = 0.0;
  for (std::size_t i = 0; i < descending_nonneg.size(); ++i) {
    total += descending_nonneg[i];
    if (i < t) top += descending_nonneg[i];
  }
  if (!(total > 0.0)) throw std::invalid_argument("eigenvalue proportion: zero spectral mass");
  return std::min(top / total, 1.0);
}

}  // namespace

double empirical_pep(const kernels::KernelMatrix& k, int t) {
  const std::size_t n = k.size();
  if (t < 1 || static_cast<std::size_t>(t) > n - 1)
    throw std::invalid_argument("empirical_pep: need 1 <= t <= n-1");
  std::vector<double> eigenvalues = la::symmetric_eigenvalues(k.values());
  for (double& v : eigenvalues) v = std::max(v, 0.0);
  return top_share(eigenvalues, static_cast<std::size_t>(t));
}

double pep_from_spectrum(const Spectrum& spectrum, int t) {
  if (t < 1) throw std::invalid_argument("pep_from_spectrum: t must be >= 1");
  const std::size_t cut = std::min<std::size_t>(static_cast<std::size_t>(t),
                                                spectrum.eigenvalues().size());
  return top_share(spectrum.eigenvalues(), cut);
}

void BoundInputs::validate() const {
  if (n < 2) throw std::invalid_argument("BoundInputs: n must be >= 2");
  if (m < 1) throw std::invalid_argument("BoundInputs: m must be >= 1");
  if (t < 1 || static_cast<std::size_t>(t) > n - 1)
    throw std::invalid_argument("BoundInputs: need 1 <= t <= n-1");
  if (!(theta > 1.0)) throw std::invalid_argument("BoundInputs: theta must be > 1");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("BoundInputs: delta must be in (0, 1]");
  if (!(inner_product_bound > 0.0) || !(hypothesis_norm_bound > 0.0) || !(kappa > 0.0))
    throw std::invalid_argument("BoundInputs: b, D and kappa must be > 0");
  if (!(z > 0.0)) throw std::invalid_argument("BoundInputs: z must be > 0");
  if (!std::isfinite(empirical_risk) || empirical_risk < 0.0)
    throw std::invalid_argument("BoundInputs: empirical risk must be finite and >= 0");
}

BoundTerms bound_value(const BoundInputs& in) {
  in.validate();
  const double b = in.inner_product_bound;
  const double d = in.hypothesis_norm_bound;
  const double nn = static_cast<double>(in.n);
  const double mm = static_cast<double>(in.m);

  BoundTerms terms;
  terms.risk_term = in.theta / (in.theta - 1.0) * in.empirical_risk;
  const double c1 = 6.0 * in.theta * b * d * std::sqrt(2.0 * in.kappa * std::pow(mm, 2.0 / in.z - 1.0));
  terms.complexity_term = c1 / std::sqrt(nn * in.z);
  const double c2 = 48.0 * in.theta * b * static_cast<double>(in.t);
  const double c3 = (44.0 * b + 20.0 * b * in.theta) * std::log(1.0 / in.delta);
  terms.residual_term = (c2 + c3) / nn;
  return terms;
}

std::vector<PepRow> pep_report(const std::vector<kernels::KernelMatrix>& bank,
                               const std::vector<graph::GraphFilter>& filters,
                               const SimplexWeights& mu, int t) {
  if (bank.empty()) throw std::invalid_argument("pep_report: empty kernel list");
  const Matrix combined = graph::combine_filters(filters, mu);
  std::vector<PepRow> rows;
  rows.reserve(bank.size());
  for (std::size_t p = 0; p < bank.size(); ++p) {
    if (bank[p].size() != combined.rows())
      throw std::invalid_argument("pep_report: kernel and filter sizes differ");
    Matrix smoothed = la::matmul(combined, la::matmul(bank[p].values(), combined));
    la::symmetrize(smoothed);
    const kernels::KernelMatrix filtered(std::move(smoothed));
    rows.push_back(PepRow{p, t, empirical_pep(bank[p], t), empirical_pep(filtered, t)});
  }
  return rows;
}

std::string pep_report_csv(const std::vector<PepRow>& rows) {
  std::string out = "view_index,t,beta_before,beta_after\n";
  char buf[32];
  for (const auto& row : rows) {
    out += std::to_string(row.view);
    out.push_back(',');
    out += std::to_string(row.t);
    out.push_back(',');
    auto r = std::to_chars(buf, buf + sizeof(buf), row.before);
    out.append(buf, r.ptr);
    out.push_back(',');
    r = std::to_chars(buf, buf + sizeof(buf), row.after);
    out.append(buf, r.ptr);
    out.push_back('\n');
  }
  return out;
}

}  // namespace gmlkm::pep
