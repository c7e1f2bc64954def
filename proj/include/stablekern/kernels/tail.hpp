#pragma once

#include <vector>

#include "stablekern/kernels/radial.hpp"

namespace stablekern::kernels {

// A probe of the far-field power law: kernels whose tail obeys
// rho^{n+sigma} g(rho) -> value.  residual reports the spread of the last two
// extrapolated estimates.
struct TailCoefficient {
  double sigma = 0.0;
  double value = 0.0;
  double probe_radius = 0.0;
  double residual = 0.0;
};

// Geometric probe radii rho0 * ratio^k, k = 0..count-1.
struct TailProbeSchedule {
  double rho0 = 4.0;
  double ratio = 2.0;
  int count = 9;
};

// Thrown when the probe sequence rho^{n+sigma} g(rho) diverges or degenerates
// instead of settling: the profile is not stable at this order.
class TailOrderError : public Error {
 public:
  using Error::Error;
};

// Estimates the limit of rho^{n+sigma} g(rho) by two-point Richardson
// extrapolation along the schedule, modelling the approach as c / rho^2.
TailCoefficient tail_coefficient(const RadialProfile& g, double sigma,
                                 const TailProbeSchedule& schedule = {});

}  // namespace stablekern::kernels
