#pragma once

#include <functional>
#include <memory>
#include <string>

#include "stablekern/kernels/levy.hpp"
#include "stablekern/kernels/radial.hpp"

namespace stablekern::kernels {

// What a kernel's values are made of, when it is a mollified radial profile.
// Carrying this lets tail-mass, convolution, and maximal sweeps use exact
// segment integrals instead of rediscovering the structure numerically.
struct RadialBacking {
  enum class Family { poisson, levy, gaussian, custom };
  Family family = Family::custom;
  int dim = 1;
  double sigma = 0.0;  // stability order (2 for the Gaussian)
  double y = 1.0;      // mollification scale
  RadialProfile unit_profile;  // profile at y = 1
  std::shared_ptr<const LevyProfileTable> table;  // optional bulk evaluator
};

// A symmetric Markov kernel K(x, z) on R^n.  markov_tol is the tolerance at
// which unit mass in the second argument is asserted by audits.
struct PointKernel {
  int dim = 1;
  std::string name;
  bool translation_invariant = true;
  double markov_tol = 1e-6;
  std::function<double(const double*, const double*)> eval;
  std::shared_ptr<const RadialBacking> radial;  // null for synthetic kernels

  double operator()(double x, double z) const { return eval(&x, &z); }
  double at(const double* x, const double* z) const { return eval(x, z); }
};

// Mollified Cauchy-Poisson kernel in dimension n at scale y.
PointKernel poisson_point_kernel(int n, double sigma, double y);

// Mollified one-dimensional stable kernel at scale y.  When a profile table
// for the same sigma is supplied, bulk evaluation goes through it; otherwise
// every call runs the oscillatory quadrature.
PointKernel levy_point_kernel_1d(double sigma, double y,
                                 std::shared_ptr<const LevyProfileTable> table = nullptr);

// Mollified Gaussian (the sigma = 2 endpoint of the stable family) in
// dimension n at scale y: (4 pi)^{-n/2} exp(-rho^2/4) dilated by y.
PointKernel gaussian_point_kernel(int n, double y);

}  // namespace stablekern::kernels
