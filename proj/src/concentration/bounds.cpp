#include <cmath>

#include "stablekern/concentration/concentration.hpp"

namespace stablekern::concentration {

namespace {

void check_order(double sigma_y) {
  if (!(sigma_y > 0.0 && sigma_y < 2.0))
    throw PreconditionError("tail bound: stability order must lie in (0, 2)");
}

}  // namespace

double theorem21_tail_bound(int n, double lambda, double y, double sigma_y) {
  kernels::unit_sphere_area(n);  // validates the dimension
  if (!(lambda > 0) || !(y > 0))
    throw PreconditionError("theorem21_tail_bound: lambda and y must be positive");
  check_order(sigma_y);
  return std::pow(2.0, 0.5 * (n + sigma_y)) * std::pow(lambda / y, -sigma_y);
}

double theorem23_tail_bound(double lambda, double y, double sigma_y,
                            std::string* diagnostic) {
  if (!(lambda > 0) || !(y > 0))
    throw PreconditionError("theorem23_tail_bound: lambda and y must be positive");
  check_order(sigma_y);
  if (lambda > 1.0) {
    if (diagnostic)
      *diagnostic = "lambda clamped to 1: the derivation assumes lambda < 1";
    lambda = 1.0;
  }
  return 4.0 * M_PI * M_PI / (lambda * lambda) * std::sqrt(y) *
         std::pow(y, sigma_y) / sigma_y;
}

double theorem34_tail_bound(int n, const kernels::SigmaOrder& sigma, double gamma,
                            double alpha, double lambda) {
  if (!(gamma > 0 && gamma < 1))
    throw PreconditionError("theorem34_tail_bound: gamma must lie in (0, 1)");
  if (!(alpha > 0) || !(lambda > 0))
    throw PreconditionError("theorem34_tail_bound: alpha and lambda must be positive");
  const double w = kernels::unit_sphere_area(n);
  const double s = sigma.value;
  const double up = std::pow(1.0 + gamma, s);
  const double down = std::pow(1.0 - gamma, s);
  return 2.0 * w * alpha / s +
         2.0 * w * alpha * std::pow((1.0 + gamma) / (1.0 - gamma), n) * up /
             (up - down) * std::pow(lambda, -s);
}

}  // namespace stablekern::concentration
