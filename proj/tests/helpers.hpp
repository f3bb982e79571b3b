#ifndef GMLKM_TESTS_HELPERS_HPP
#define GMLKM_TESTS_HELPERS_HPP

#include <atomic>
#include <filesystem>
#include <string>

#include "gmlkm/matrix.hpp"
#include "gmlkm/rng.hpp"

namespace testutil {

// scratch directory removed on scope exit
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("gmlkm_test_" + tag + "_" + std::to_string(counter.fetch_add(1)) + "_" +
             std::to_string(static_cast<unsigned long>(::getpid())));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline gmlkm::Matrix random_matrix(std::size_t rows, std::size_t cols, gmlkm::Rng& rng,
                                   double scale = 1.0) {
  gmlkm::Matrix m(rows, cols);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
  return m;
}

// symmetric PSD as B B^T / cols
inline gmlkm::Matrix random_psd(std::size_t n, gmlkm::Rng& rng) {
  const gmlkm::Matrix b = random_matrix(n, n + 2, rng);
  gmlkm::Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < b.cols(); ++l) acc += b(i, l) * b(j, l);
      acc /= static_cast<double>(b.cols());
      s(i, j) = acc;
      s(j, i) = acc;
    }
  return s;
}

inline std::vector<double> random_simplex(std::size_t m, gmlkm::Rng& rng) {
  std::vector<double> w(m);
  double total = 0.0;
  for (double& x : w) {
    x = rng.uniform() + 1e-3;
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

}  // namespace testutil

#endif
