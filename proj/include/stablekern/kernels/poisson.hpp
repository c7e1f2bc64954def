#pragma once

#include "stablekern/kernels/radial.hpp"

namespace stablekern::kernels {

// Normalizing constant I(sigma) of the Poisson-type kernel in dimension n:
// the full-space mass of y^sigma (y^2 + |x|^2)^{-(n+sigma)/2} at y = 1.
// Evaluated by adaptive quadrature with an exact substitution for the tail;
// results are memoized per (n, sigma).  Supported dimensions: 1, 2, 3.
double poisson_normalizer(int n, double sigma);

// Closed form of the same constant through the Beta function; used as an
// independent cross-check of the quadrature path.
double poisson_normalizer_closed_form(int n, double sigma);

// Analytic lower bound omega_n / (sigma * 2^{(n+sigma)/2}), valid for all
// sigma in (0, 2); certifies that the normalizer never vanishes as sigma -> 0.
double poisson_normalizer_lower_bound(int n, double sigma);

// Kernel value at radius rho: I(sigma)^{-1} y^sigma (y^2 + rho^2)^{-(n+sigma)/2}.
double poisson_value(int n, double sigma, double y, double rho);

// The kernel as a radial profile at scale y.
RadialProfile poisson_radial(int n, double sigma, double y);

// Mass of the kernel outside the centered ball of radius lambda:
// integral over {|x| >= lambda} of the scale-y kernel.  Exact substitution
// keeps the integrand smooth for every sigma down to the small-order limit.
double poisson_tail_mass(int n, double sigma, double y, double lambda);

// One-dimensional segment integrals of the scale-y kernel P over [a, b]
// (a <= b, any signs): mass M0 = int P(u) du and first moment
// M1 = int u P(u) du.  M1 has a closed form; M0 uses quadrature with the
// same smooth tail substitution.
double poisson_segment_mass_1d(double sigma, double y, double a, double b);
double poisson_segment_first_moment_1d(double sigma, double y, double a, double b);

}  // namespace stablekern::kernels
