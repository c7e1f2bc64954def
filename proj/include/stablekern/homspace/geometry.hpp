#pragma once

#include <cstddef>
#include <vector>

#include "stablekern/homspace/space.hpp"

namespace stablekern::homspace {

// Measured geometry of a finite space: quasi-triangle constant tau and
// doubling constant A.  Both are maxima over finite probe schedules, so they
// are lower estimates of the true suprema; theorem-scoped checks consume
// them inflated by a safety factor (see measure_geometry).
struct GeometryConstants {
  double tau = 1.0;  // >= 1
  double A = 1.0;    // >= 1
};

// One ball probe: the open ball B(points[center], r).
struct RadiusProbe {
  std::size_t center = 0;
  double r = 0.0;
};

// Largest ratio d(x,z) / (d(x,y) + d(y,z)) over triples of distinct points.
// This is the raw triple maximum; it can be below 1 (for a genuine metric it
// is at most 1), and the quasi-triangle constant of the space is
// max(1, returned value).  Requires at least 3 points.
double triangle_constant(const FiniteHomSpace& space, unsigned threads = 1);

// Probe schedule built from realized distances: for each listed center, up
// to per_center radii are drawn evenly from the sorted realized distances in
// [r_min, r_max] and shifted by half the minimum positive spacing so the
// realizing point falls inside the open ball.
std::vector<RadiusProbe> realized_radius_probes(const FiniteHomSpace& space,
                                                const std::vector<std::size_t>& centers,
                                                double r_min, double r_max,
                                                std::size_t per_center);

// Largest ratio mu(B(x, 2r)) / mu(B(x, r)) over the probe schedule.  Every
// probe radius must be positive (the small ball then contains its center, so
// it is never empty).
double doubling_constant(const FiniteHomSpace& space, const std::vector<RadiusProbe>& probes);

// Measured tau and A over the given probes, each floored at 1 and inflated
// by the safety factor (default 1.1).  The inflation acknowledges that probe
// schedules see maxima, not suprema.
GeometryConstants measure_geometry(const FiniteHomSpace& space,
                                   const std::vector<RadiusProbe>& probes,
                                   double safety = 1.1, unsigned threads = 1);

// Scan of annuli A(x, r, nu r) = B(x, nu r) \ B(x, r) over a probe schedule,
// one entry per scheduled nu.
struct AnnulusScanEntry {
  double nu = 0.0;
  bool all_nonempty = false;
  std::size_t empty_count = 0;
  RadiusProbe first_empty;  // meaningful when empty_count > 0
};

struct AnnulusScan {
  std::vector<AnnulusScanEntry> entries;  // in schedule order
  bool found = false;                     // some scheduled nu had no empty annulus
  double smallest_passing = 0.0;          // meaningful when found
};

// For each nu in the schedule (every value > 1) checks that no probe annulus
// A(x, r, nu r) is empty, and reports the smallest passing nu, if any.
// Annuli grow with nu, so on a fixed probe set the verdicts are monotone:
// once a nu passes, every larger one does.
AnnulusScan annulus_index(const FiniteHomSpace& space, const std::vector<double>& nu_schedule,
                          const std::vector<RadiusProbe>& probes);

// Closed-form constant 1 + (4 tau^3 (1+gamma) / (gamma (1 - gamma tau)))^{log2 A}
// bounding the family maximal operator by the ball maximal operator on a
// space with geometry (tau, A), for families whose kernels are comparable at
// scale gamma.  Requires tau >= 1, A >= 1, and 0 < gamma < 1/tau; the
// constant blows up as gamma approaches 1/tau.
double general_maximal_constant(double tau, double A, double gamma);

}  // namespace stablekern::homspace
