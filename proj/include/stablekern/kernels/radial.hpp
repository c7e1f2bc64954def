#pragma once

#include <functional>

#include "stablekern/util/error.hpp"

namespace stablekern::kernels {

// Stability order validated to lie in (0, 2); the Gaussian endpoint sigma == 2
// is accepted only when explicitly allowed by the caller.
struct SigmaOrder {
  double value;
  explicit SigmaOrder(double s, bool allow_gaussian = false) : value(s) {
    if (!(s > 0.0) || s > 2.0 || (s == 2.0 && !allow_gaussian))
      throw PreconditionError("stability order must lie in (0, 2), got " + std::to_string(s));
  }
};

// Spatial scale parameter, strictly positive.
struct Scale {
  double value;
  explicit Scale(double y) : value(y) {
    if (!(y > 0.0)) throw PreconditionError("scale must be positive, got " + std::to_string(y));
  }
};

// A radially symmetric profile g(rho), rho >= 0, in a given ambient dimension.
struct RadialProfile {
  int dim = 1;
  std::function<double(double)> value;
  bool decreasing = true;
};

// Surface area of the unit sphere in R^n (supported: n = 1, 2, 3).
double unit_sphere_area(int n);

// Scale-y dilation: rho -> y^{-n} g(rho / y), preserving total mass.
RadialProfile mollify(const RadialProfile& g, double y);

}  // namespace stablekern::kernels
