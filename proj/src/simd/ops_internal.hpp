#ifndef STABLEKERN_SIMD_OPS_INTERNAL_HPP
#define STABLEKERN_SIMD_OPS_INTERNAL_HPP

#include <cstddef>

#include "stablekern/simd/ops.hpp"

namespace stablekern::simd::detail {

struct OpsTable {
  double (*reduce_add)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  MinMax (*reduce_min_max)(const double*, std::size_t);
  double (*reduce_max_abs_diff)(const double*, const double*, std::size_t);
  void (*pointwise_max_inplace)(double*, const double*, std::size_t);
  std::size_t (*count_greater)(const double*, std::size_t, double);
  double (*max_scaled_diff)(const double*, const double*, const double*, std::size_t);
};

const OpsTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
const OpsTable& avx2_table();
#endif

}  // namespace stablekern::simd::detail

#endif
