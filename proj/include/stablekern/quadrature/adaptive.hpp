#ifndef STABLEKERN_QUADRATURE_ADAPTIVE_HPP
#define STABLEKERN_QUADRATURE_ADAPTIVE_HPP

#include <functional>

namespace stablekern::quadrature {

struct Result {
  double value = 0.0;
  double error = 0.0;  // conservative absolute error estimate
  long evals = 0;
};

// Adaptive Gauss-Kronrod (7,15) on a finite interval with a global error
// budget: the segment with the worst estimated error is bisected until the
// summed estimate drops below tolerance.  Endpoint singularities therefore
// get deep refinement without starving smooth regions.  Throws
// QuadratureError when the segment or depth budget is exhausted while the
// estimate is still above tolerance.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, double rel_tol = 1e-12, int max_depth = 100);

// Single non-adaptive (7,15) pass; used for smooth single-lobe panels where
// the caller already controls panel size.
Result gk15(const std::function<double(double)>& f, double a, double b);

}  // namespace stablekern::quadrature

#endif
