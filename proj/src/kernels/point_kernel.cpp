#include "stablekern/kernels/point_kernel.hpp"

#include <cmath>

#include "stablekern/kernels/poisson.hpp"

namespace stablekern::kernels {
namespace {

double dist(const double* x, const double* z, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = x[i] - z[i];
    s += d * d;
  }
  return std::sqrt(s);
}

PointKernel from_radial(std::shared_ptr<const RadialBacking> backing, std::string name) {
  PointKernel k;
  k.dim = backing->dim;
  k.name = std::move(name);
  k.translation_invariant = true;
  const int n = backing->dim;
  const double y = backing->y;
  const double scale = std::pow(y, -n);
  k.eval = [backing, n, y, scale](const double* x, const double* z) {
    return scale * backing->unit_profile.value(dist(x, z, n) / y);
  };
  k.radial = std::move(backing);
  return k;
}

}  // namespace

PointKernel poisson_point_kernel(int n, double sigma, double y) {
  Scale sguard(y);
  auto backing = std::make_shared<RadialBacking>();
  backing->family = RadialBacking::Family::poisson;
  backing->dim = n;
  backing->sigma = sigma;
  backing->y = y;
  backing->unit_profile = poisson_radial(n, sigma, 1.0);
  return from_radial(std::move(backing), "poisson(n=" + std::to_string(n) +
                                             ",sigma=" + std::to_string(sigma) +
                                             ",y=" + std::to_string(y) + ")");
}

PointKernel levy_point_kernel_1d(double sigma, double y,
                                 std::shared_ptr<const LevyProfileTable> table) {
  SigmaOrder guard(sigma, /*allow_gaussian=*/true);
  Scale sguard(y);
  if (table && table->sigma() != sigma)
    throw PreconditionError("profile table was built for a different stability order");
  auto backing = std::make_shared<RadialBacking>();
  backing->family = RadialBacking::Family::levy;
  backing->dim = 1;
  backing->sigma = sigma;
  backing->y = y;
  backing->table = table;
  backing->unit_profile.dim = 1;
  backing->unit_profile.decreasing = true;
  if (table) {
    backing->unit_profile.value = [t = table](double rho) { return t->value(rho); };
  } else {
    backing->unit_profile.value = [sigma](double rho) { return levy_profile_1d(sigma, rho); };
  }
  return from_radial(std::move(backing), "levy(sigma=" + std::to_string(sigma) +
                                             ",y=" + std::to_string(y) + ")");
}

PointKernel gaussian_point_kernel(int n, double y) {
  Scale sguard(y);
  auto backing = std::make_shared<RadialBacking>();
  backing->family = RadialBacking::Family::gaussian;
  backing->dim = n;
  backing->sigma = 2.0;
  backing->y = y;
  backing->unit_profile.dim = n;
  backing->unit_profile.decreasing = true;
  const double norm = std::pow(4.0 * M_PI, -0.5 * n);
  backing->unit_profile.value = [norm](double rho) { return norm * std::exp(-0.25 * rho * rho); };
  return from_radial(std::move(backing), "gaussian(n=" + std::to_string(n) +
                                             ",y=" + std::to_string(y) + ")");
}

}  // namespace stablekern::kernels
