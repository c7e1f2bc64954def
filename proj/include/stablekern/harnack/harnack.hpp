#pragma once

#include <string>
#include <vector>

#include "stablekern/kernels/point_kernel.hpp"
#include "stablekern/kernels/radial.hpp"

namespace stablekern::harnack {

// Worst sampled region of a certification sweep.
struct Witness {
  std::vector<double> x;   // evaluation point
  std::vector<double> xi;  // region center
  double r = 0.0;          // ball radius, or outer annulus radius
};

// Result of a sampling-based comparability check.  Sampling can only refute:
// "passed" means the inequality was not refuted at this sampling density.
struct HarnackCertificate {
  double gamma = 0.0;
  double H = 1.0;
  bool passed = false;
  double worst_ratio = 1.0;  // >= 1; +inf when a zero infimum met a positive supremum
  Witness witness;
  long regions = 0;           // (center, radius) regions examined
  long skipped = 0;           // degenerate regions with no sample points
  int points_per_region = 0;  // sequence samples per region (extremal points extra)
  std::string note;
};

std::string to_json(const HarnackCertificate& c);

// Exact sup/inf ratio of the Poisson-type kernel over the ball
// B(xi, gamma |x - xi|), written in t = |x - xi| / y:
//   [(1 + (1+gamma)^2 t^2) / (1 + (1-gamma)^2 t^2)]^{(n+sigma)/2}.
// Monotone increasing in t; t = +inf yields the supremum below.
double poisson_harnack_ratio(int n, const kernels::SigmaOrder& sigma, double gamma, double t);

// Supremum of the above over t: ((1+gamma)/(1-gamma))^{n+sigma}.
double harnack_ratio_limit(int n, double sigma, double gamma);

// Center-pair schedule for ball certification.  For each base point b and
// distance d, the pair is x = b e1, xi = (b - d) e1 and the sampled region is
// the ball B(xi, gamma d).
struct BallGrid {
  std::vector<double> base_points{0.0};
  std::vector<double> distances;
  int points_per_ball = 0;  // 0: dimension default (64 in 1-d, 256 otherwise)
  unsigned threads = 1;
};

// Brute-force sup/inf of K(x, .) over sampled balls B(xi, gamma |x - xi|).
// Radial extremal points (nearest/farthest along the center axis) are always
// included, which makes the check exact for radially decreasing kernels; the
// remaining samples follow a nested low-discrepancy sequence so that a larger
// points_per_ball never loses a refutation found by a smaller one.
HarnackCertificate certify_ball_harnack(const kernels::PointKernel& K, double gamma, double H,
                                        const BallGrid& grid);

// Annulus sampling request: inner fraction gamma and points per annulus.
struct AnnulusSpec {
  double gamma = 0.5;
  int sample_density = 0;  // 0: dimension default
};

// Centers and outer radii for annulus certification; radii normally follow a
// geometric schedule (see geometric_radii).
struct AnnulusGrid {
  std::vector<double> centers{0.0};
  std::vector<double> radii;
  unsigned threads = 1;
};

// Same semantics as certify_ball_harnack with regions A(x, gamma r, r).
// In one dimension both sides of the annulus are sampled.
HarnackCertificate certify_annulus_harnack(const kernels::PointKernel& K, const AnnulusSpec& spec,
                                           double H, const AnnulusGrid& grid);

std::vector<double> geometric_radii(double r0, double factor, int count);

// Ball-averaged kernel: (x, y) -> mean of K(x, .) over B(y, gamma |x - y|),
// with the diagonal kept equal to K(x, x).  One-dimensional kernels only; the
// result is generally not symmetric in its arguments.
kernels::PointKernel regularize(const kernels::PointKernel& K, double gamma);

}  // namespace stablekern::harnack
