#include <algorithm>
#include <cmath>

#include "ops_internal.hpp"

namespace stablekern::simd::detail {
namespace {

double s_reduce_add(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double s_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

MinMax s_reduce_min_max(const double* x, std::size_t n) {
  MinMax mm{x[0], x[0]};
  for (std::size_t i = 1; i < n; ++i) {
    mm.min = std::min(mm.min, x[i]);
    mm.max = std::max(mm.max, x[i]);
  }
  return mm;
}

double s_reduce_max_abs_diff(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

void s_pointwise_max_inplace(double* dst, const double* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = std::max(dst[i], src[i]);
}

std::size_t s_count_greater(const double* x, std::size_t n, double threshold) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (x[i] > threshold) ++c;
  return c;
}

double s_max_scaled_diff(const double* fwd, const double* bwd, const double* scale,
                         std::size_t n) {
  double m = (fwd[0] - bwd[0]) * scale[0];
  for (std::size_t i = 1; i < n; ++i) {
    double v = (fwd[i] - *(bwd - i)) * scale[i];
    m = std::max(m, v);
  }
  return m;
}

}  // namespace

const OpsTable& scalar_table() {
  static const OpsTable t{
      s_reduce_add,     s_dot,
      s_reduce_min_max, s_reduce_max_abs_diff,
      s_pointwise_max_inplace, s_count_greater,
      s_max_scaled_diff,
  };
  return t;
}

}  // namespace stablekern::simd::detail
