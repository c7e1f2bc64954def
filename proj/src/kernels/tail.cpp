#include "stablekern/kernels/tail.hpp"

#include <cmath>
#include <string>

namespace stablekern::kernels {

TailCoefficient tail_coefficient(const RadialProfile& g, double sigma,
                                 const TailProbeSchedule& schedule) {
  SigmaOrder guard(sigma, /*allow_gaussian=*/true);
  if (!(schedule.rho0 > 0.0) || !(schedule.ratio > 1.0) || schedule.count < 3)
    throw PreconditionError("tail probe schedule must be increasing with at least 3 probes");

  std::vector<double> s(schedule.count);
  double rho = schedule.rho0;
  for (int k = 0; k < schedule.count; ++k) {
    const double v = g.value(rho);
    s[k] = std::pow(rho, g.dim + sigma) * v;
    if (!std::isfinite(s[k]) || s[k] < 0.0)
      throw TailOrderError("tail probe at rho=" + std::to_string(rho) +
                           " is not a finite nonnegative value: not sigma-stable at this order");
    if (k + 1 < schedule.count) rho *= schedule.ratio;
  }

  // A persistent geometric trend in the probes means the power was wrong:
  // rho^{n+sigma} g(rho) grows like rho^{sigma-sigma_true} (or decays), never
  // settling.  Checked over the last three ratios.
  int growing = 0, decaying = 0;
  for (int k = schedule.count - 3; k < schedule.count; ++k) {
    if (s[k - 1] == 0.0)
      throw TailOrderError("tail probes vanished: not sigma-stable at this order");
    const double q = s[k] / s[k - 1];
    if (q >= 1.15) ++growing;
    if (q <= 0.87) ++decaying;
  }
  if (growing == 3 || decaying == 3)
    throw TailOrderError(std::string("tail probes ") + (growing == 3 ? "diverge" : "decay to zero") +
                         " geometrically: not sigma-stable at this order");

  // Two-point Richardson with the approach modelled as c / rho^2.
  const double r2 = schedule.ratio * schedule.ratio;
  double lam_prev = 0.0, lam = s[0];
  for (int k = 1; k < schedule.count; ++k) {
    lam_prev = lam;
    lam = (r2 * s[k] - s[k - 1]) / (r2 - 1.0);
  }

  TailCoefficient out;
  out.sigma = sigma;
  out.value = lam;
  out.probe_radius = rho;
  out.residual = std::fabs(lam - lam_prev);
  return out;
}

}  // namespace stablekern::kernels
