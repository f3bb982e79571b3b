#ifndef GMLKM_SIMPLEX_HPP
#define GMLKM_SIMPLEX_HPP

#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace gmlkm {

// Nonnegative weights summing to one (within 1e-12). Shared by the kernel
// weights gamma and the filter weights mu.
class SimplexWeights {
 public:
  explicit SimplexWeights(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw std::invalid_argument("SimplexWeights: empty");
    double total = 0.0;
    for (const double x : w_) {
      if (!(x >= 0.0)) throw std::invalid_argument("SimplexWeights: negative entry");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw std::invalid_argument("SimplexWeights: entries do not sum to 1");
  }

  static SimplexWeights uniform(std::size_t m) {
    if (m == 0) throw std::invalid_argument("SimplexWeights: empty");
    return SimplexWeights(std::vector<double>(m, 1.0 / static_cast<double>(m)));
  }

  // Rescales a nonnegative vector with positive sum onto the simplex.
  static SimplexWeights normalized(std::vector<double> w) {
    double total = 0.0;
    for (const double x : w) {
      if (!(x >= 0.0)) throw std::invalid_argument("SimplexWeights: negative entry");
      total += x;
    }
    if (!(total > 0.0)) throw std::invalid_argument("SimplexWeights: zero sum");
    for (double& x : w) x /= total;
    return SimplexWeights(std::move(w));
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const { return w_; }

  bool operator==(const SimplexWeights&) const = default;

 private:
  std::vector<double> w_;
};

}  // namespace gmlkm

#endif
