#ifndef GMLKM_SIMD_KERNELS_HPP
#define GMLKM_SIMD_KERNELS_HPP

#include <cstddef>
#include <string_view>

// Vectorized double-precision primitives that back the dense inner loops
// (pairwise distances, block matrix products, trace accumulations).
//
// Every primitive has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The backend is picked once at startup from CPU support
// and can be overridden with the GMLKM_SIMD environment variable
// ("scalar" or "avx2") or set_backend(). The variants are equivalence-tested
// against each other; results may differ by reassociation rounding only.
namespace gmlkm::simd {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_supported(Backend b);
// Switches the active backend. Returns false (and leaves the current backend
// in place) when the requested one is not supported on this machine.
bool set_backend(Backend b);
std::string_view backend_name(Backend b);

// x . y
double dot(const double* x, const double* y, std::size_t n);
// sum x_i^2
double sumsq(const double* x, std::size_t n);
// sum (x_i - y_i)^2
double sumsq_diff(const double* x, const double* y, std::size_t n);
// sum x_i
double sum(const double* x, std::size_t n);
// y += a * x
void axpy(double a, const double* x, double* y, std::size_t n);
// x *= a
void scal(double a, double* x, std::size_t n);

namespace detail {

struct OpsTable {
  double (*dot)(const double*, const double*, std::size_t);
  double (*sumsq)(const double*, std::size_t);
  double (*sumsq_diff)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
};

const OpsTable& scalar_table();
const OpsTable* avx2_table();  // nullptr when the TU is not built in
const OpsTable& active_table();

}  // namespace detail

inline double dot(const double* x, const double* y, std::size_t n) {
  return detail::active_table().dot(x, y, n);
}
inline double sumsq(const double* x, std::size_t n) {
  return detail::active_table().sumsq(x, n);
}
inline double sumsq_diff(const double* x, const double* y, std::size_t n) {
  return detail::active_table().sumsq_diff(x, y, n);
}
inline double sum(const double* x, std::size_t n) {
  return detail::active_table().sum(x, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  detail::active_table().axpy(a, x, y, n);
}
inline void scal(double a, double* x, std::size_t n) {
  detail::active_table().scal(a, x, n);
}

}  // namespace gmlkm::simd

#endif
