#pragma once

#include <cstddef>
#include <vector>

#include "stablekern/homspace/geometry.hpp"
#include "stablekern/homspace/space.hpp"

namespace stablekern::homspace {

// Constants of a normal space: mass of a delta-ball of radius r is between
// c1 r and c2 r, and tau_tilde is the quasi-triangle constant of delta.
struct NormalConstants {
  double tau_tilde = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
};

// Mass-based distance: delta(x, y) is the smallest mass of a ball that
// contains both x and y, minimized over candidate balls centred at sample
// points with radii at realized distances plus half the minimum spacing
// (equivalently: the smallest cumulative mass { p : d(c,p) <= max(d(c,x), d(c,y)) }
// over centers c).  The diagonal is set to zero, matching the declared
// non-atomic intent.  The result carries the same points, masses, and flags,
// with normalized = true.
//
// Requires both intent flags (non_atomic_intent and unbounded_intent): the
// construction measures distance by mass and its linear-growth property is
// meaningful only for samples of non-atomic unbounded spaces.
FiniteHomSpace normalize(const FiniteHomSpace& space, unsigned threads = 1);

// Closed-form normal constants guaranteed by geometry (tau, A):
//   c1 = 1/A,  c2 = (10 tau^2)^{log2 A},  tau_tilde = (6 tau^2)^{log2 A}.
// Requires tau >= 1 and A >= 1.
NormalConstants predicted_normal_constants(double tau, double A);

// Two-sided linear-growth check of ball masses in a normalized space:
// c1 r <= mu(B_delta(x, r)) <= c2 r over the probe schedule.
struct NormalityReport {
  double c1 = 0.0;              // constants under test
  double c2 = 0.0;
  bool passed = false;
  double measured_c1 = 0.0;     // min over probes of mu(B)/r
  double measured_c2 = 0.0;     // max over probes of mu(B)/r
  double worst_lower_slack = 0.0;  // min of mu(B)/r - c1 (negative = violation)
  double worst_upper_slack = 0.0;  // min of c2 - mu(B)/r (negative = violation)
  RadiusProbe lower_witness;
  RadiusProbe upper_witness;
  std::size_t probes_checked = 0;
};

// Diagnostic, always returns.  Requires a normalized space, 0 < c1 < c2, and
// positive probe radii.
NormalityReport normality_check(const FiniteHomSpace& normalized, double c1, double c2,
                                const std::vector<RadiusProbe>& probes);

// Annulus mass lower bound that follows from normality: for every eps > 0,
//   mu(B_delta(x, (1+eps) c2 r / c1) \ B_delta(x, r)) >= eps c2 r.
// worst_margin is the minimum over probes of mu(annulus) - eps c2 r.  The
// bound needs the linear-growth envelope to hold at the blown-up radius
// (1+eps) c2 r / c1, so probes must keep that radius inside the sampled
// range.
struct AnnulusMassReport {
  bool passed = false;
  double worst_margin = 0.0;
  RadiusProbe witness;
};

AnnulusMassReport annulus_mass_check(const FiniteHomSpace& normalized, double c1, double c2,
                                     double eps, const std::vector<RadiusProbe>& probes);

}  // namespace stablekern::homspace
