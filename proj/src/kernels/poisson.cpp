#include "stablekern/kernels/poisson.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "stablekern/quadrature/adaptive.hpp"

namespace stablekern::kernels {
namespace {

// Integral of rho^{n-1} (1 + rho^2)^{-(n+sigma)/2} over [R, infinity), via the
// substitution rho = R / w^{1/sigma} which maps the tail onto [0, 1] with a
// smooth integrand for every sigma in (0, 2):
//   integral = (R^n / sigma) * int_0^1 (w^{2/sigma} + R^2)^{-(n+sigma)/2} dw.
double radial_tail_integral(int n, double sigma, double R) {
  const double p = -(n + sigma) / 2.0;
  const double e = 2.0 / sigma;
  auto f = [&](double w) { return std::pow(std::pow(w, e) + R * R, p); };
  quadrature::Result r = quadrature::integrate(f, 0.0, 1.0, 1e-14, 1e-13);
  return std::pow(R, n) / sigma * r.value;
}

// Integral of rho^{n-1} (1 + rho^2)^{-(n+sigma)/2} over [0, R], R <= a few.
double radial_head_integral(int n, double sigma, double R) {
  const double p = -(n + sigma) / 2.0;
  auto f = [&](double rho) {
    return (n == 1 ? 1.0 : std::pow(rho, n - 1)) * std::pow(1.0 + rho * rho, p);
  };
  quadrature::Result r = quadrature::integrate(f, 0.0, R, 1e-14, 1e-13);
  return r.value;
}

void check_sigma(double sigma) { SigmaOrder guard(sigma); }

}  // namespace

double poisson_normalizer(int n, double sigma) {
  check_sigma(sigma);
  unit_sphere_area(n);  // validates n
  static std::map<std::pair<int, double>, double> cache;
  static std::mutex mu;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, sigma});
    if (it != cache.end()) return it->second;
  }
  const double value =
      unit_sphere_area(n) * (radial_head_integral(n, sigma, 1.0) + radial_tail_integral(n, sigma, 1.0));
  std::lock_guard<std::mutex> lock(mu);
  cache.insert({{n, sigma}, value});
  return value;
}

double poisson_normalizer_closed_form(int n, double sigma) {
  check_sigma(sigma);
  const double lb =
      std::lgamma(n / 2.0) + std::lgamma(sigma / 2.0) - std::lgamma((n + sigma) / 2.0);
  return 0.5 * unit_sphere_area(n) * std::exp(lb);
}

double poisson_normalizer_lower_bound(int n, double sigma) {
  check_sigma(sigma);
  return unit_sphere_area(n) / sigma * std::pow(2.0, -(n + sigma) / 2.0);
}

double poisson_value(int n, double sigma, double y, double rho) {
  Scale guard(y);
  const double I = poisson_normalizer(n, sigma);
  return std::pow(y, sigma) * std::pow(y * y + rho * rho, -(n + sigma) / 2.0) / I;
}

RadialProfile poisson_radial(int n, double sigma, double y) {
  Scale guard(y);
  const double I = poisson_normalizer(n, sigma);
  const double ys = std::pow(y, sigma);
  RadialProfile out;
  out.dim = n;
  out.decreasing = true;
  out.value = [n, sigma, y, ys, I](double rho) {
    return ys * std::pow(y * y + rho * rho, -(n + sigma) / 2.0) / I;
  };
  return out;
}

double poisson_tail_mass(int n, double sigma, double y, double lambda) {
  Scale guard(y);
  if (!(lambda > 0.0)) throw PreconditionError("tail radius must be positive");
  const double R = lambda / y;
  return unit_sphere_area(n) * radial_tail_integral(n, sigma, R) / poisson_normalizer(n, sigma);
}

namespace {

// F(t) = int_0^t P_y(u) du for t >= 0 (odd in t); P_y the 1-d scale-y kernel.
double poisson_cdf_from_center(double sigma, double y, double t) {
  const double I = poisson_normalizer(1, sigma);
  const double R = t / y;
  if (R <= 2.0) return radial_head_integral(1, sigma, R) / I;
  return 0.5 - radial_tail_integral(1, sigma, R) / I;
}

// G(t) = int_0^t u P_y(u) du for t >= 0 (even extension), closed form.
double poisson_first_moment_from_center(double sigma, double y, double t) {
  const double I = poisson_normalizer(1, sigma);
  const double L = std::log1p((t / y) * (t / y));
  const double H = sigma == 1.0 ? 0.5 * L : std::expm1(0.5 * (1.0 - sigma) * L) / (1.0 - sigma);
  return y / I * H;
}

}  // namespace

double poisson_segment_mass_1d(double sigma, double y, double a, double b) {
  if (a > b) throw PreconditionError("segment endpoints must be ordered");
  auto F = [&](double t) {
    double v = poisson_cdf_from_center(sigma, y, std::fabs(t));
    return t < 0 ? -v : v;
  };
  return F(b) - F(a);
}

double poisson_segment_first_moment_1d(double sigma, double y, double a, double b) {
  if (a > b) throw PreconditionError("segment endpoints must be ordered");
  return poisson_first_moment_from_center(sigma, y, std::fabs(b)) -
         poisson_first_moment_from_center(sigma, y, std::fabs(a));
}

}  // namespace stablekern::kernels
