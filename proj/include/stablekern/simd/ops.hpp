#ifndef STABLEKERN_SIMD_OPS_HPP
#define STABLEKERN_SIMD_OPS_HPP

#include <cstddef>

// Vectorized primitives for the hot inner loops: reductions over kernel rows,
// sliding dot products for grid convolution, sup/inf scans for certification
// sweeps, and level-set counting for weak-type curves.
//
// Every op has a scalar reference implementation and an AVX2 variant; the
// backend is selected once at runtime from CPUID, overridable with the
// environment variable STABLEKERN_SIMD=scalar|avx2.  Transcendental math stays
// scalar throughout the library, so the vector ops are limited to adds, muls
// and comparisons whose results match the reference bitwise (sum/dot differ
// only by association order).
//
// NaN inputs are not supported (min/max lane semantics differ across ISAs).

namespace stablekern::simd {

enum class Backend { scalar, avx2 };

Backend active_backend();
const char* backend_name();

struct MinMax {
  double min;
  double max;
};

// Sum of x[0..n).
double reduce_add(const double* x, std::size_t n);

// Inner product of a and b.
double dot(const double* a, const double* b, std::size_t n);

// Smallest and largest element; n must be > 0.
MinMax reduce_min_max(const double* x, std::size_t n);

// max_i |a[i] - b[i]|.
double reduce_max_abs_diff(const double* a, const double* b, std::size_t n);

// dst[i] = max(dst[i], src[i]).
void pointwise_max_inplace(double* dst, const double* src, std::size_t n);

// Number of elements strictly greater than threshold.
std::size_t count_greater(const double* x, std::size_t n, double threshold);

// max_k (fwd[k] - bwd[-k]) * scale[k] for k in [0, n); bwd is read backwards.
// This is the inner scan of the centered maximal function over a prefix-sum
// array: fwd walks right from a node, bwd walks left, scale holds 1/(2r).
// n must be > 0.
double max_scaled_diff(const double* fwd, const double* bwd, const double* scale,
                       std::size_t n);

}  // namespace stablekern::simd

#endif
