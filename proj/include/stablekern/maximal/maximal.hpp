#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "stablekern/kernels/point_kernel.hpp"
#include "stablekern/kernels/radial.hpp"
#include "stablekern/maximal/grid_function.hpp"

namespace stablekern::maximal {

// ---------------------------------------------------------------------------
// Parameter grids
// ---------------------------------------------------------------------------

// A finite set of (sigma, y) parameter pairs over which family suprema are
// taken.  Order is preserved; duplicates are allowed but wasteful.
struct ParamGrid {
  std::vector<std::pair<double, double>> pairs;  // (sigma, y)

  std::size_t size() const { return pairs.size(); }
};

// Tensor grid: `per_axis` log-spaced sigma values over [sigma_lo, sigma_hi]
// crossed with `per_axis` log-spaced y values over [y_lo, y_hi].  The
// supremum over such a grid approaches the continuum supremum from below;
// results should be reported together with a refinement-stability check.
// Requires per_axis >= 1 and positive, ordered bounds on both axes.
ParamGrid tensor_param_grid(double sigma_lo, double sigma_hi,
                            double y_lo, double y_hi,
                            std::size_t per_axis = 16);

// Builds the kernel for one parameter pair.  Throwing is allowed; failures
// are propagated with the offending (sigma, y) attached to the message.
using KernelCtor = std::function<kernels::PointKernel(double sigma, double y)>;

// ---------------------------------------------------------------------------
// Maximal operators on grid functions
// ---------------------------------------------------------------------------

// Centered Hardy-Littlewood maximal function of the cell model of `f`,
// evaluated at every node:
//
//   (M f)(x_j) = sup_{r>0} (2r)^{-1} Integral_{|t|<=r} |f(x_j + t)| dt.
//
// For a piecewise-constant f the supremum is attained on a window consisting
// of whole cells, so the result equals max_{k>=0} of the (2k+1)-cell window
// averages and is computed exactly (up to rounding) in O(N^2) via prefix
// sums.  Requires a nonempty grid.
GridFunction hl_maximal(const GridFunction& f, unsigned threads = 1);

// Family maximal function: pointwise supremum over the parameter grid of the
// absolute convolution against the cell model of `f`,
//
//   (M* f)(x_j) = max_{(sigma,y)} | Integral K_{sigma,y}(x_j - z) f(z) dz |.
//
// Cell integrals of each kernel are evaluated by adaptive quadrature, so the
// convolution is exact for the cell model up to quadrature tolerance.
// Kernels must be one-dimensional.  Translation-invariant kernels cost
// O(N) quadratures + O(N^2) multiply-adds per parameter; kernels with
// genuine two-point dependence fall back to O(N^2) quadratures.
GridFunction family_maximal(const ParamGrid& params, const KernelCtor& make,
                            const GridFunction& f, unsigned threads = 1);

// Explicit constant C(n, gamma, sigma) such that the family maximal function
// of the scale-sigma smoothing family is dominated by C times the
// Hardy-Littlewood maximal function:
//
//   C = (omega_n^2 / gamma^n) * ((1+gamma)/(1-gamma))^(2n+sigma),
//
// omega_n the unit-sphere surface measure.  Monotone increasing in sigma, so
// C(n, gamma, 2) dominates every admissible order.  Requires gamma in (0,1)
// and a supported dimension.
double domination_constant(int n, double gamma, const kernels::SigmaOrder& sigma);

// ---------------------------------------------------------------------------
// Weak-type diagnostics
// ---------------------------------------------------------------------------

// The weak-(1,1) distribution curve lambda -> lambda * |{ |Tf| > lambda }|
// (lattice measure: h * node count, strict inequality), sampled on `levels`
// log-spaced thresholds spanning (min positive |Tf|, max |Tf|].  `f_l1`
// records the L1 norm of the input the operator was applied to, so the
// weak-type ratio curve value / f_l1 can be read off directly.
struct WeakTypeCurve {
  std::vector<double> lambdas;
  std::vector<double> values;
  double f_l1 = 0.0;
};

// Requires Tf and f on the same lattice (equal x0, h, size), a nonzero f,
// and a Tf with at least one strictly positive magnitude; levels >= 2.
WeakTypeCurve weak_type_curve(const GridFunction& Tf, const GridFunction& f,
                              std::size_t levels = 64);

// CSV: header "lambda,lambda_times_measure", one row per threshold.
std::string to_csv(const WeakTypeCurve& curve);

// ---------------------------------------------------------------------------
// Uniform regularity integral (singular-integral transplantation test)
// ---------------------------------------------------------------------------

// The two-sided integral, over 2|z| <= |x| <= x_extent, of the worst-case
// kernel increment across the scale family indexed by the parameter grid,
//
//   F(x, z) = max_{(sigma,y)} | K_{sigma,y}(x - z) - K_{sigma,y}(x) |,
//
// plus an inverse-square tail estimate for |x| > x_extent.  Each (sigma, y)
// pair names the one-dimensional scale-y kernel of order sigma: the
// heavy-tailed profile for sigma in (0,2), the squared-exponential endpoint
// at sigma == 2.  Heavy-tailed profiles are tabulated once per sigma and
// shared across scales.
//
// `constant` is the measured envelope sup x^2 F(x,z)/|z| over the last
// sampled decade; the tail term equals constant * |z| / x_extent and is an
// estimate that assumes the measured envelope persists beyond the probe
// range (the families above obey a global inverse-square increment bound).
// Requires z != 0 and x_extent >= 4|z|.
struct ZoIntegral {
  double body = 0.0;      // integral over 2|z| <= |x| <= x_extent
  double tail = 0.0;      // estimated remainder beyond x_extent
  double value = 0.0;     // body + tail
  double constant = 0.0;  // measured sup of x^2 F(x,z)/|z| on the last decade
};

ZoIntegral zo_regularity_integral(const ParamGrid& params, double z, double x_extent);

// ---------------------------------------------------------------------------
// Third-derivative envelope scan
// ---------------------------------------------------------------------------

// Scans |rho^3 Phi3_sigma(rho)| (see kernels::levy_phi3_scaled) over a
// (sigma, rho) grid.  The scan certifies numerically that the envelope is
// bounded uniformly in both variables, which is the ingredient behind the
// inverse-square increment bound used by zo_regularity_integral.
// `derivative_bound_max` reports the maximum of 2 pi rho^2 |dPhi1/drho|;
// the identity dPhi1/drho = -(rho / 2pi) Phi3 makes that expression equal
// rho^3 |Phi3| pointwise, so the reported value coincides with max_value.
// The last/previous decade maxima (over the top two decades of the rho
// grid) expose any growth trend.  Requires nonempty grids, positive rho
// spanning at least two decades, and sigma values inside the admissible
// order window.
struct Phi3Scan {
  double max_value = 0.0;
  double sigma_at_max = 0.0;
  double rho_at_max = 0.0;
  double derivative_bound_max = 0.0;
  double last_decade_max = 0.0;
  double prev_decade_max = 0.0;
};

Phi3Scan phi3_bound_scan(const std::vector<double>& sigma_grid,
                         const std::vector<double>& rho_grid);

}  // namespace stablekern::maximal
