#ifndef STABLEKERN_QUADRATURE_OSCILLATORY_HPP
#define STABLEKERN_QUADRATURE_OSCILLATORY_HPP

#include <cstddef>
#include <functional>

namespace stablekern::quadrature {

struct OscOptions {
  double abs_tol = 1e-10;
  // When the projected lobe count fits, every lobe is summed directly (machine
  // accuracy, no extrapolation).  Beyond it the tail is accelerated.
  std::size_t max_direct_lobes = 4096;
  // Acceleration needs the lobe magnitudes to decrease; sum directly at least
  // until the lobe start passes burn_in_t (e.g. the peak of a non-monotone
  // envelope) and at least burn_in_min lobes.
  double burn_in_t = 0.0;
  std::size_t burn_in_min = 16;
  std::size_t accel_terms = 48;
  std::size_t max_lobes = 400000;
};

struct OscResult {
  double value = 0.0;
  double error = 0.0;
  long evals = 0;
  std::size_t lobes = 0;
  bool accelerated = false;
};

// Integrates f over [zero(0), lim_k zero(k)) where f changes sign exactly at
// the strictly increasing points zero(k) and the lobe magnitudes eventually
// decrease.  Alternating tails are accelerated by repeated averaging of the
// partial sums.  projected_lobes is the caller's estimate of lobes until the
// envelope is negligible (a double: slow envelopes can project astronomical
// counts); it selects direct summation when affordable.
OscResult sum_alternating_lobes(const std::function<double(double)>& f,
                                const std::function<double(std::size_t)>& zero,
                                double projected_lobes, const OscOptions& opt);

}  // namespace stablekern::quadrature

#endif
