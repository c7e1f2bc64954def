#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "stablekern/maximal/maximal.hpp"
#include "stablekern/util/error.hpp"
#include "stablekern/util/parallel.hpp"

namespace stablekern::maximal {

// For a piecewise-constant f the centered average over radius r,
// r -> (2r)^{-1} Integral_{|t|<=r} |f(x_j+t)| dt, is of the form
// b + a/(2r) on every interval between consecutive cell boundaries, hence
// monotone there; the supremum over r > 0 is therefore attained either as
// r -> 0 (the cell value |f_j|, which the k = 0 window already equals) or at
// a radius (k + 1/2) h whose window covers exactly 2k+1 whole cells.  Windows
// are clipped at the lattice edge, where the function vanishes; beyond the
// largest window that still reaches the array the averages only decrease, so
// the loop stops there.  The window sums come from a prefix-sum table, making
// the whole computation exact for the cell model up to rounding.
GridFunction hl_maximal(const GridFunction& f, unsigned threads) {
  const std::size_t n = f.size();
  if (n == 0) {
    throw PreconditionError("hl_maximal: empty grid");
  }
  if (!(f.h > 0.0)) {
    throw PreconditionError("hl_maximal: node spacing must be positive");
  }

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + std::abs(f.values[i]);
  }

  GridFunction out = f;
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const std::size_t k_max = std::max(j, n - 1 - j);
      // Seed with the k = 0 window directly so Mf >= |f| holds exactly
      // instead of up to the rounding of a prefix difference.
      double best = std::abs(f.values[j]);
      for (std::size_t k = 1; k <= k_max; ++k) {
        const std::size_t lo = j >= k ? j - k : 0;
        const std::size_t hi = std::min(j + k + 1, n);
        const double avg = (prefix[hi] - prefix[lo]) / static_cast<double>(2 * k + 1);
        best = std::max(best, avg);
      }
      out.values[j] = best;
    }
  });
  return out;
}

}  // namespace stablekern::maximal
