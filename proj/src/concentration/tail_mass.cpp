#include <algorithm>
#include <cmath>

#include "stablekern/concentration/concentration.hpp"
#include "stablekern/kernels/levy.hpp"
#include "stablekern/kernels/poisson.hpp"
#include "stablekern/quadrature/adaptive.hpp"

namespace stablekern::concentration {

namespace {

// P(|X| > a) for the unit-scale Gaussian profile (4 pi)^{-n/2} e^{-rho^2/4}.
double gaussian_tail(int n, double a) {
  switch (n) {
    case 1:
      return std::erfc(0.5 * a);
    case 2:
      return std::exp(-0.25 * a * a);
    case 3:
      return std::erfc(0.5 * a) + a * std::exp(-0.25 * a * a) / std::sqrt(M_PI);
    default:
      throw PreconditionError("tail_mass: gaussian closed form needs dim 1, 2, or 3");
  }
}

// Integral over [lo, +inf) mapped onto (0, 1] by rho = lo / u.
double half_line(const std::function<double(double)>& f, double lo) {
  return quadrature::integrate(
             [&](double u) {
               const double rho = lo / u;
               return f(rho) * lo / (u * u);
             },
             0.0, 1.0, 1e-12, 1e-10)
      .value;
}

}  // namespace

double tail_mass(const kernels::PointKernel& K, double x, double lambda) {
  if (!(lambda > 0)) throw PreconditionError("tail_mass: lambda must be positive");

  double mass = 0.0;
  if (K.radial && K.translation_invariant) {
    const kernels::RadialBacking& b = *K.radial;
    using Family = kernels::RadialBacking::Family;
    switch (b.family) {
      case Family::poisson:
        mass = kernels::poisson_tail_mass(b.dim, b.sigma, b.y, lambda);
        break;
      case Family::levy:
        mass = kernels::levy_tail_mass(b.sigma, lambda / b.y);
        break;
      case Family::gaussian:
        mass = gaussian_tail(b.dim, lambda / b.y);
        break;
      case Family::custom: {
        // Generic radial profile at scale y: w_n int_lambda^inf r^{n-1} g_y(r) dr.
        const double w = kernels::unit_sphere_area(b.dim);
        const double y = b.y;
        const int n = b.dim;
        const auto& g = b.unit_profile.value;
        mass = half_line(
            [&](double rho) {
              return w * std::pow(rho, n - 1) * std::pow(y, -n) * g(rho / y);
            },
            lambda);
        break;
      }
    }
  } else {
    if (K.dim != 1)
      throw PreconditionError("tail_mass: synthetic kernels are one-dimensional");
    const auto right = half_line([&](double t) { return K(x, x + t); }, lambda);
    const auto left = half_line([&](double t) { return K(x, x - t); }, lambda);
    mass = left + right;
  }
  return std::clamp(mass, 0.0, 1.0);
}

}  // namespace stablekern::concentration
