#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "stablekern/homspace/geometry.hpp"
#include "stablekern/homspace/space.hpp"
#include "stablekern/kernels/point_kernel.hpp"
#include "stablekern/kernels/radial.hpp"

namespace stablekern::homspace {

// A symmetric kernel sampled on a finite space: values is the dense n x n
// matrix K(x_i, x_j).  markov_tol is the declared tolerance at which
// sum_j K(i,j) mass(j) = 1 is asserted by audits; finite samples of continuum
// kernels carry truncation mass outside the window, so the declared tolerance
// is part of the kernel's contract.
struct SpaceKernel {
  std::string name;
  std::size_t n = 0;
  std::vector<double> values;  // row-major n x n
  double markov_tol = 1e-6;

  double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values[i * n + j] = v;
    values[j * n + i] = v;
  }
};

// Kernel matrix from a symmetric function of two point indices.  The builder
// evaluates only i <= j and mirrors, so the matrix is exactly symmetric.
// When absorb_truncation is set, each diagonal entry is raised so the row
// sums against the masses equal 1 exactly (a lazy-walk correction for the
// mass the finite window cannot see); the correction must be nonnegative.
SpaceKernel kernel_from_callable(const FiniteHomSpace& space, const std::string& name,
                                 const std::function<double(std::size_t, std::size_t)>& fn,
                                 double markov_tol, bool absorb_truncation = false);

// Pointwise sample K(x_i, x_j) of a translation-invariant kernel on a 1-d
// coordinate space.
SpaceKernel kernel_from_point_kernel(const FiniteHomSpace& space, const kernels::PointKernel& K,
                                     bool absorb_truncation = false);

// Cell-averaged mollified Cauchy-type kernel on a uniform 1-d grid space:
// entry (i,j) is the exact segment mass of the kernel over cell j as seen
// from node i, divided by the cell width.  Cell averaging keeps row sums
// near 1 even when the scale y is far below the grid spacing, where pointwise
// sampling would misrepresent the peak.
SpaceKernel poisson_cell_kernel(const FiniteHomSpace& space, double sigma, double y,
                                double markov_tol, bool absorb_truncation = false);

// Radial profile of the normalized distance: entry (i,j) = q(delta(i,j)) for
// i != j, built on a normalized space.  The profile q is the Cauchy-type bump
//   q(t) = (beta^s / (2 I(s))) (beta^2 + t^2)^{-(1+s)/2},
// which integrates to 1/4 in t over [0, inf) and satisfies
// q(t) <= (beta^s / (2 I(s))) t^{-(1+s)} everywhere.  Against a measure whose
// delta-balls grow at most linearly (mass <= c2 r) the off-diagonal row mass
// is at most c2 / 4, so the amplitude leaves room for c2 up to ~4; the
// diagonal takes the lazy-walk remainder (absorb_truncation semantics of
// kernel_from_callable), making the kernel exactly Markov on the sample.
SpaceKernel delta_profile_kernel(const FiniteHomSpace& normalized, double s, double beta,
                                 double markov_tol);

// Largest deviation of a row sum from unit mass: max_i |sum_j K(i,j) m_j - 1|.
double markov_defect(const FiniteHomSpace& space, const SpaceKernel& K);

// Largest diagonal atom: max_i K(i,i) mass(i).  For any kernel whose rows
// integrate to 1 this is at most 1, since the diagonal term is one summand
// of a nonnegative unit sum.
double diagonal_atom_bound(const FiniteHomSpace& space, const SpaceKernel& K);

// Result of a sampled comparability check on a space; "passed" means the
// declared (gamma, H) was not refuted on the probed regions.
struct SpaceHarnackCertificate {
  double gamma = 0.0;
  double H = 1.0;
  bool passed = false;
  double worst_ratio = 1.0;  // sup/inf over the worst region
  std::size_t witness_x = 0;  // evaluation point of the worst region
  RadiusProbe witness;        // the worst region (center + radius)
  long regions = 0;
  long skipped = 0;  // regions with no sample points
  std::string note;
};

// Ball comparability: for every ordered pair (x, y), x != y, the values of
// K(x, .) over the ball B(y, gamma d(x,y)) must have sup <= H inf.  The ball
// always contains y itself, so no region is empty.  Requires 0 < gamma < 1
// and H >= 1.
SpaceHarnackCertificate certify_space_ball_harnack(const FiniteHomSpace& space,
                                                   const SpaceKernel& K, double gamma, double H,
                                                   unsigned threads = 1);

// Annulus comparability: for each probe (x, r), the values of K(x, .) over
// the annulus A(x, gamma r, r) must have sup <= H inf.  Probes whose annulus
// holds no sample point are skipped and counted.
SpaceHarnackCertificate certify_space_annulus_harnack(const FiniteHomSpace& space,
                                                      const SpaceKernel& K, double gamma, double H,
                                                      const std::vector<RadiusProbe>& probes);

// Ball-averaged regularization: row x holds the averages of K(x, .) over
// B(y, gamma d(x,y)) with the diagonal kept.  Generally not symmetric.  When
// K is ball-comparable at (gamma, H), every off-diagonal entry satisfies the
// two-sided sandwich K <= H Ktilde <= H^2 K.
SpaceKernel regularize_space_kernel(const FiniteHomSpace& space, const SpaceKernel& K,
                                    double gamma);

// Ball maximal function on the space: for each point x, the supremum of
// mean_B |f| over all balls containing x, where balls range over every
// center and every realized radius.  Returns one value per point; the
// minimal ball {x} alone is included, so the result dominates |f| pointwise.
std::vector<double> space_hl_maximal(const FiniteHomSpace& space, const std::vector<double>& f,
                                     unsigned threads = 1);

// A kernel together with the comparability certificate presented for it.
struct CertifiedKernel {
  SpaceKernel kernel;
  SpaceHarnackCertificate certificate;
};

// Nodewise domination of the family maximal by the ball maximal.
struct MaximalCheckReport {
  bool passed = false;       // family_maximal <= C * hl nodewise
  double C = 0.0;            // H^2 * general_maximal_constant(tau, A, gamma)
  double worst_ratio = 0.0;  // max over points with positive hl of family/hl
  std::size_t witness = 0;
  double atom_max = 0.0;  // max over kernels and points of K(x,x) mass(x)
  bool atom_passed = false;
  std::vector<double> family_maximal;  // sup_K |sum_j K(x,j) f_j m_j|
  std::vector<double> hl_maximal;
};

// Verifies family_maximal(f) <= C * hl_maximal(f) at every point, with
// C = H^2 * general_maximal_constant(geometry.tau, geometry.A, gamma): the
// comparability sandwich costs a factor H^2 on top of the geometric constant.
// Every kernel must present a passed certificate with gamma at most the
// declared gamma and H at most the declared H (smaller gamma probes wider
// regions, so such a certificate is at least as strong); otherwise the check
// refuses with a pointer to certify_space_ball_harnack /
// certify_space_annulus_harnack.  Also reports the diagonal atom companion
// bound max K(x,x) mass(x), checked against 1 + markov_tol.
MaximalCheckReport space_maximal_check(const FiniteHomSpace& space,
                                       const std::vector<CertifiedKernel>& family, double gamma,
                                       double H, const GeometryConstants& geometry,
                                       const std::vector<double>& f, unsigned threads = 1);

}  // namespace stablekern::homspace
