#include "stablekern/kernels/radial.hpp"

#include <cmath>

namespace stablekern::kernels {

double unit_sphere_area(int n) {
  switch (n) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * M_PI;
    case 3:
      return 4.0 * M_PI;
    default:
      throw PreconditionError("unit_sphere_area: supported dimensions are 1..3, got " +
                              std::to_string(n));
  }
}

RadialProfile mollify(const RadialProfile& g, double y) {
  Scale s(y);
  RadialProfile out;
  out.dim = g.dim;
  out.decreasing = g.decreasing;
  const double scale = std::pow(y, -g.dim);
  out.value = [eval = g.value, y, scale](double rho) { return scale * eval(rho / y); };
  return out;
}

}  // namespace stablekern::kernels
