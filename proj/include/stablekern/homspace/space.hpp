#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace stablekern::homspace {

// A finite metric-measure space: points with pairwise distances and positive
// masses.  This is the desk-scale stand-in for a (possibly continuum) space
// carrying a quasi-distance and a doubling measure; grid-sampled continua
// store their sampling cell width in cell_volume and per-point masses equal
// to the measure of each cell.
//
// Invariants (checked by validate): dist is symmetric, vanishes exactly on
// the diagonal, and is positive off it; every mass is positive.
//
// Ball membership is strict everywhere in this module:
//   B(c, r) = { p : d(c, p) < r }.
//
// The two intent flags are declarations by the caller about the object the
// finite sample stands in for, not measurable properties of the sample
// itself: non_atomic_intent says the masses represent cells of a non-atomic
// measure, unbounded_intent says the ambient space is unbounded.  Operations
// whose conclusions only make sense for such spaces (normalize and what
// builds on it) refuse to run without them.  normalized is set on the output
// of normalize() and marks that dist is the mass-based distance produced
// there.
struct FiniteHomSpace {
  std::vector<std::string> ids;              // optional point labels
  std::vector<std::vector<double>> coords;   // optional coordinates, one entry per point
  std::vector<double> mass;                  // one positive weight per point
  std::vector<double> dist;                  // dense row-major size() x size()
  double cell_volume = 0.0;                  // sampling cell width, 0 = unset
  bool non_atomic_intent = false;
  bool unbounded_intent = false;
  bool normalized = false;

  std::size_t size() const { return mass.size(); }
  double d(std::size_t i, std::size_t j) const { return dist[i * mass.size() + j]; }
  void set_d(std::size_t i, std::size_t j, double v) {
    dist[i * mass.size() + j] = v;
    dist[j * mass.size() + i] = v;
  }

  // Coordinate of point i for one-dimensional spaces; throws when the space
  // has no coordinates.
  double coord1(std::size_t i) const;

  double total_mass() const;

  // Mass of the open ball B(center, r).
  double ball_mass(std::size_t center, double r) const;

  // Smallest positive pairwise distance.  Radius candidates built from
  // realized distances are nudged by half of this so that the point realizing
  // a distance lands inside the (strictly open) ball.
  double min_positive_distance() const;
};

// Checks the FiniteHomSpace invariants; throws PreconditionError with the
// first violation found.
void validate(const FiniteHomSpace& space);

// Uniform lattice of `count` nodes spanning [x_lo, x_hi] inclusive with
// Euclidean distance and Lebesgue cell masses h = (x_hi - x_lo)/(count - 1).
// Both intent flags are set: the sample models a window into the real line.
FiniteHomSpace uniform_grid_space(double x_lo, double x_hi, std::size_t count);

// Uniform lattice on the positive half-line carrying the weight x^{-1/2}:
// the mass of node x is the exact cell integral 2(sqrt(x + h/2) - sqrt(x - h/2)),
// which is x^{-1/2} h up to O(h^2).  Requires x_lo >= h/2 so cells stay in
// the support of the weight.
FiniteHomSpace sqrt_weight_halfline_space(double x_lo, double x_hi, std::size_t count);

// Sample of the union of unit-length open intervals (2k - 1/2, 2k + 1/2) for
// k in [k_min, k_max], with points_per_interval cell-centred points per
// interval and Lebesgue cell masses.  With an odd points_per_interval the
// interval midpoints 2k are themselves sample points, which the annulus
// scans below use as probe centers.
FiniteHomSpace gapped_union_space(long k_min, long k_max, std::size_t points_per_interval);

// Sample of the union of intervals [2^n - 1, 2^n + 1] for n in
// [n_min, n_max], cell-centred, Lebesgue cell masses.  The gaps between
// consecutive intervals grow without bound, so annuli of every fixed ratio
// eventually come up empty.
FiniteHomSpace dyadic_gap_space(int n_min, int n_max, std::size_t points_per_interval);

// Abstract space from an explicit distance matrix (row-major n x n) and
// masses.  No coordinates; intent flags are left unset.
FiniteHomSpace matrix_space(std::vector<double> dist, std::vector<double> mass);

// Same points and masses with the metric d^power (a snowflake when
// 0 < power < 1).  Requires power > 0.
FiniteHomSpace with_metric_power(const FiniteHomSpace& space, double power);

// JSON round trip.  Schema:
//   {
//     "points":  [x0, x1, ...] or [[x,y],...] or ["id0", ...],
//     "dist":    "euclidean" | "matrix",
//     "dist_matrix": [[...], ...]          (required when dist == "matrix"),
//     "weights": "uniform" | "sqrt_inv" | [w0, w1, ...],
//     "cell_volume": h                      (optional),
//     "flags":   {"non_atomic": bool, "unbounded": bool, "normalized": bool}
//                                           (optional, all default false)
//   }
// "euclidean" requires numeric points; "uniform" gives every point mass
// cell_volume (or 1 when unset); "sqrt_inv" requires positive 1-d points and
// uses the exact cell integrals of x^{-1/2} (cell width from cell_volume or,
// when unset, inferred from uniform point spacing).  Malformed input throws
// ConfigError.
FiniteHomSpace space_from_json(const std::string& text);
std::string to_json(const FiniteHomSpace& space);

}  // namespace stablekern::homspace
