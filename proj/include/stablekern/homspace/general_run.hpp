#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "stablekern/homspace/normalize.hpp"
#include "stablekern/homspace/space_kernel.hpp"

namespace stablekern::homspace {

// Far-field decay check on a normalized space: K(x,y) <= alpha / delta(x,y)^{1+s}
// for every pair with delta(x,y) > R.  worst_ratio is the largest value of
// K(x,y) delta(x,y)^{1+s} / alpha over the checked pairs (passed iff <= 1);
// the witness is the pair realizing it.
struct StabilityReport {
  double s = 0.0;
  double alpha = 0.0;
  double R = 0.0;
  bool passed = false;
  double worst_ratio = 0.0;
  std::size_t witness_i = 0;
  std::size_t witness_j = 0;
  double witness_delta = 0.0;
  long pairs_checked = 0;
};

// Requires a normalized space, s > 0, alpha > 0, R > 0.  A schedule with no
// qualifying pairs passes vacuously with pairs_checked = 0.
StabilityReport stability_check_general(const FiniteHomSpace& normalized, const SpaceKernel& K,
                                        double s, double alpha, double R);

// One member of a concentrating family: the kernel, its scale parameter
// alpha, and the evidence for the two hypotheses (annulus comparability and
// far-field decay).
struct StableFamilyMember {
  SpaceKernel kernel;
  double alpha = 0.0;
  SpaceHarnackCertificate harnack;
  StabilityReport stability;
};

// Shared hypotheses of a concentration run.
struct GeneralRunConfig {
  double gamma = 0.0;   // annulus comparability scale; needs gamma <= (c1/(2 c2))^2
  double H = 1.0;       // comparability constant
  double s = 0.0;       // decay exponent (shared by all stability reports)
  double R = 0.0;       // decay threshold radius
  double lambda = 0.0;  // tail radius, 0 < lambda < R
  NormalConstants normal;  // constants of the normalized space (measured or predicted)
};

struct GeneralRunPoint {
  double alpha = 0.0;
  double tail = 0.0;          // sup_x of sum over delta(x,y) >= lambda of K(x,y) m(y)
  double chain_bound = 0.0;   // sup_x of middle + far bound
  double middle_bound = 0.0;  // sup_x (alpha/R^{1+s}) C(R,lambda) mu(A(x,lambda,R))
  double far_bound = 0.0;     // sup_x alpha * sum over delta >= R of m(y)/delta^{1+s}
};

struct GeneralConcentrationCurve {
  double lambda = 0.0;
  double nu = 0.0;             // annulus ratio 2 c2 / c1 used by the chain
  double chain_constant = 0.0; // C(R,lambda) = sum_{j=-1}^{J} H^{j+1}
  int chain_terms = 0;         // J + 2 (J is the smallest j >= 0 with R <= lambda nu^{j+1})
  std::vector<GeneralRunPoint> points;  // in schedule order
  bool nonincreasing = false;           // tails never increase along the schedule
  bool dominated = false;               // chain bound >= tail pointwise at every schedule point
  double final_over_initial = 0.0;
};

// Tail masses of a certified family along its alpha schedule, with the bound
// that the certification hypotheses imply:
//   tail(x) <= (alpha/R^{1+s}) C(R,lambda) mu(A(x,lambda,R))
//              + alpha * sum_{delta(x,y) >= R} m(y) / delta(x,y)^{1+s},
// where the middle term chains the annulus comparability across the rings
// A(x, R/nu^{j+1}, R/nu^j) with ratio nu = 2 c2 / c1, and the far term is
// the decay envelope summed over the sample.  The exact ring count is
// implicit in the chain construction; this implementation takes J to be the
// smallest j >= 0 with R <= lambda nu^{j+1} and reports it via chain_terms.
//
// Refuses (naming the failed hypothesis) unless the space is normalized,
// gamma <= (c1/(2 c2))^2, lambda < R, every member presents a passed annulus
// certificate at least as strong as (gamma, H), and a passed stability report
// matching (s, alpha, R).
GeneralConcentrationCurve general_concentration_run(const FiniteHomSpace& normalized,
                                                    const std::vector<StableFamilyMember>& family,
                                                    const GeneralRunConfig& config,
                                                    unsigned threads = 1);

// CSV rows "alpha,tail,chain_bound,middle_bound,far_bound".
std::string to_csv(const GeneralConcentrationCurve& curve);

}  // namespace stablekern::homspace
