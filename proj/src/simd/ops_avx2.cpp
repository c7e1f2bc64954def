#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "ops_internal.hpp"

namespace stablekern::simd::detail {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swap = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swap));
}

inline double hmax(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return std::max(std::max(lane[0], lane[1]), std::max(lane[2], lane[3]));
}

inline double hmin(__m256d v) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, v);
  return std::min(std::min(lane[0], lane[1]), std::min(lane[2], lane[3]));
}

double v_reduce_add(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

double v_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

MinMax v_reduce_min_max(const double* x, std::size_t n) {
  if (n < 4) {
    MinMax mm{x[0], x[0]};
    for (std::size_t i = 1; i < n; ++i) {
      mm.min = std::min(mm.min, x[i]);
      mm.max = std::max(mm.max, x[i]);
    }
    return mm;
  }
  __m256d vmin = _mm256_loadu_pd(x);
  __m256d vmax = vmin;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    vmin = _mm256_min_pd(vmin, v);
    vmax = _mm256_max_pd(vmax, v);
  }
  MinMax mm{hmin(vmin), hmax(vmax)};
  for (; i < n; ++i) {
    mm.min = std::min(mm.min, x[i]);
    mm.max = std::max(mm.max, x[i]);
  }
  return mm;
}

double v_reduce_max_abs_diff(const double* a, const double* b, std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(signmask, d));
  }
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

void v_pointwise_max_inplace(double* dst, const double* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    __m256d s = _mm256_loadu_pd(src + i);
    _mm256_storeu_pd(dst + i, _mm256_max_pd(d, s));
  }
  for (; i < n; ++i) dst[i] = std::max(dst[i], src[i]);
}

std::size_t v_count_greater(const double* x, std::size_t n, double threshold) {
  const __m256d thr = _mm256_set1_pd(threshold);
  std::size_t c = 0, i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(x + i), thr, _CMP_GT_OQ);
    c += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
  }
  for (; i < n; ++i)
    if (x[i] > threshold) ++c;
  return c;
}

double v_max_scaled_diff(const double* fwd, const double* bwd, const double* scale,
                         std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  if (n >= 4) {
    __m256d acc = _mm256_set1_pd(m);
    for (; i + 4 <= n; i += 4) {
      __m256d f = _mm256_loadu_pd(fwd + i);
      // bwd[-i..-i-3] sit ascending at bwd-i-3; reverse lanes to align with k.
      __m256d b = _mm256_loadu_pd(bwd - i - 3);
      b = _mm256_permute4x64_pd(b, 0x1b);
      __m256d prod = _mm256_mul_pd(_mm256_sub_pd(f, b), _mm256_loadu_pd(scale + i));
      acc = _mm256_max_pd(acc, prod);
    }
    m = hmax(acc);
  }
  for (; i < n; ++i) m = std::max(m, (fwd[i] - *(bwd - i)) * scale[i]);
  return m;
}

}  // namespace

const OpsTable& avx2_table() {
  static const OpsTable t{
      v_reduce_add,     v_dot,
      v_reduce_min_max, v_reduce_max_abs_diff,
      v_pointwise_max_inplace, v_count_greater,
      v_max_scaled_diff,
  };
  return t;
}

}  // namespace stablekern::simd::detail

#endif  // x86_64
