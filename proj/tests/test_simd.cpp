#include <doctest.h>

#include <cmath>
#include <vector>

#include "gmlkm/rng.hpp"
#include "gmlkm/simd/kernels.hpp"

using gmlkm::simd::Backend;

namespace {

// long-double reference accumulations
long double ref_dot(const std::vector<double>& x, const std::vector<double>& y) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    acc += static_cast<long double>(x[i]) * static_cast<long double>(y[i]);
  return acc;
}

long double ref_sumsq_diff(const std::vector<double>& x, const std::vector<double>& y) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const long double d = static_cast<long double>(x[i]) - static_cast<long double>(y[i]);
    acc += d * d;
  }
  return acc;
}

struct BackendGuard {
  Backend saved = gmlkm::simd::active_backend();
  ~BackendGuard() { gmlkm::simd::set_backend(saved); }
};

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::scalar};
  if (gmlkm::simd::backend_supported(Backend::avx2)) out.push_back(Backend::avx2);
  return out;
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("dispatch exposes a usable backend and scalar is always available") {
  CHECK(gmlkm::simd::backend_supported(Backend::scalar));
  CHECK(gmlkm::simd::backend_supported(gmlkm::simd::active_backend()));
  CHECK(gmlkm::simd::backend_name(Backend::scalar) == "scalar");
  CHECK(gmlkm::simd::backend_name(Backend::avx2) == "avx2");

  BackendGuard guard;
  CHECK(gmlkm::simd::set_backend(Backend::scalar));
  CHECK(gmlkm::simd::active_backend() == Backend::scalar);
}

TEST_CASE("reduction kernels match a long-double reference on every backend") {
  BackendGuard guard;
  gmlkm::Rng rng(2024);
  for (const std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4},
                              std::size_t{7}, std::size_t{8}, std::size_t{9}, std::size_t{31},
                              std::size_t{64}, std::size_t{1000}, std::size_t{4097}}) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 2.0 * rng.uniform() - 1.0;
      y[i] = 2.0 * rng.uniform() - 1.0;
    }
    const double want_dot = static_cast<double>(ref_dot(x, y));
    const double want_sumsq = static_cast<double>(ref_dot(x, x));
    const double want_diff = static_cast<double>(ref_sumsq_diff(x, y));
    long double want_sum_l = 0.0L;
    for (const double v : x) want_sum_l += v;
    const double want_sum = static_cast<double>(want_sum_l);

    const double tol = 1e-12 * (static_cast<double>(n) + 1.0);
    for (const Backend b : available_backends()) {
      REQUIRE(gmlkm::simd::set_backend(b));
      CHECK(gmlkm::simd::dot(x.data(), y.data(), n) == doctest::Approx(want_dot).epsilon(tol));
      CHECK(gmlkm::simd::sumsq(x.data(), n) == doctest::Approx(want_sumsq).epsilon(tol));
      CHECK(gmlkm::simd::sumsq_diff(x.data(), y.data(), n) ==
            doctest::Approx(want_diff).epsilon(tol));
      CHECK(gmlkm::simd::sum(x.data(), n) == doctest::Approx(want_sum).epsilon(tol));
    }
  }
}

TEST_CASE("axpy and scal agree across backends elementwise") {
  BackendGuard guard;
  gmlkm::Rng rng(55);
  for (const std::size_t n :
       {std::size_t{1}, std::size_t{5}, std::size_t{8}, std::size_t{13}, std::size_t{257}}) {
    std::vector<double> x(n), y0(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y0[i] = rng.normal();
    }
    const double a = rng.normal();

    std::vector<std::vector<double>> axpy_results, scal_results;
    for (const Backend b : available_backends()) {
      REQUIRE(gmlkm::simd::set_backend(b));
      std::vector<double> y = y0;
      gmlkm::simd::axpy(a, x.data(), y.data(), n);
      axpy_results.push_back(y);
      std::vector<double> z = x;
      gmlkm::simd::scal(a, z.data(), n);
      scal_results.push_back(z);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double want_axpy = y0[i] + a * x[i];
      const double want_scal = a * x[i];
      for (const auto& r : axpy_results)
        CHECK(r[i] == doctest::Approx(want_axpy).epsilon(1e-14));
      for (const auto& r : scal_results) CHECK(r[i] == want_scal);
    }
  }
}

}  // TEST_SUITE
