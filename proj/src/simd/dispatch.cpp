#include "gmlkm/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace gmlkm::simd {
namespace {

bool cpu_has_avx2_fma() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const detail::OpsTable* table_for(Backend b) {
  if (b == Backend::avx2) {
#ifdef GMLKM_HAVE_AVX2_TU
    if (cpu_has_avx2_fma()) return detail::avx2_table();
#endif
    return nullptr;
  }
  return &detail::scalar_table();
}

struct State {
  std::atomic<const detail::OpsTable*> table;
  std::atomic<Backend> backend;

  State() {
    Backend pick = table_for(Backend::avx2) ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("GMLKM_SIMD")) {
      if (std::strcmp(env, "scalar") == 0) pick = Backend::scalar;
      if (std::strcmp(env, "avx2") == 0 && table_for(Backend::avx2)) pick = Backend::avx2;
    }
    table.store(table_for(pick), std::memory_order_relaxed);
    backend.store(pick, std::memory_order_relaxed);
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace

Backend active_backend() { return state().backend.load(std::memory_order_relaxed); }

bool backend_supported(Backend b) { return table_for(b) != nullptr; }

bool set_backend(Backend b) {
  const detail::OpsTable* t = table_for(b);
  if (!t) return false;
  state().table.store(t, std::memory_order_relaxed);
  state().backend.store(b, std::memory_order_relaxed);
  return true;
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "unknown";
}

namespace detail {
const OpsTable& active_table() { return *simd::state().table.load(std::memory_order_relaxed); }
}  // namespace detail

}  // namespace gmlkm::simd
