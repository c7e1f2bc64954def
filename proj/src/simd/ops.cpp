#include "stablekern/simd/ops.hpp"

#include <cstdlib>
#include <cstring>

#include "ops_internal.hpp"

namespace stablekern::simd {
namespace {

using detail::OpsTable;

struct Dispatch {
  Backend backend;
  const OpsTable* table;
};

Dispatch resolve() {
#if defined(__x86_64__) || defined(_M_X64)
  bool have_avx2 = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  bool have_avx2 = false;
#endif
  const char* env = std::getenv("STABLEKERN_SIMD");
  if (env != nullptr) {
    if (std::strcmp(env, "scalar") == 0) have_avx2 = false;
    // "avx2" keeps the CPUID decision: never dispatch to an ISA the CPU lacks.
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (have_avx2) return {Backend::avx2, &detail::avx2_table()};
#endif
  return {Backend::scalar, &detail::scalar_table()};
}

const Dispatch& dispatch() {
  static const Dispatch d = resolve();
  return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name() {
  return dispatch().backend == Backend::avx2 ? "avx2" : "scalar";
}

double reduce_add(const double* x, std::size_t n) {
  return dispatch().table->reduce_add(x, n);
}

double dot(const double* a, const double* b, std::size_t n) {
  return dispatch().table->dot(a, b, n);
}

MinMax reduce_min_max(const double* x, std::size_t n) {
  return dispatch().table->reduce_min_max(x, n);
}

double reduce_max_abs_diff(const double* a, const double* b, std::size_t n) {
  return dispatch().table->reduce_max_abs_diff(a, b, n);
}

void pointwise_max_inplace(double* dst, const double* src, std::size_t n) {
  dispatch().table->pointwise_max_inplace(dst, src, n);
}

std::size_t count_greater(const double* x, std::size_t n, double threshold) {
  return dispatch().table->count_greater(x, n, threshold);
}

double max_scaled_diff(const double* fwd, const double* bwd, const double* scale,
                       std::size_t n) {
  return dispatch().table->max_scaled_diff(fwd, bwd, scale, n);
}

}  // namespace stablekern::simd
