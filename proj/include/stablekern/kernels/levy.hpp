#pragma once

#include <memory>
#include <vector>

#include "stablekern/kernels/radial.hpp"

namespace stablekern::kernels {

// Working range for the stability order of the oscillatory-integral paths.
// Values outside make the integrands degenerate at one end or the other; the
// window can be widened explicitly when a caller has verified the cost
// (accuracy degrades gracefully down to about 0.02).  The Gaussian endpoint
// sigma == 2 is always admitted: its integrand is the best-behaved of all.
struct LevySigmaWindow {
  double lo = 0.05;
  double hi = 1.95;
};

// One-dimensional symmetric stable density at unit scale, evaluated at
// radius rho >= 0 from its Fourier cosine representation.  A convergent /
// asymptotic power series is used when it reaches the tolerance; otherwise
// the integral is summed lobe-by-lobe with tail acceleration.
double levy_profile_1d(double sigma, double rho, double abs_tol = 1e-10,
                       const LevySigmaWindow& window = {});

// Mass of the unit-scale density inside the centered interval of radius a.
double levy_ball_mass(double sigma, double a, double abs_tol = 1e-10,
                      const LevySigmaWindow& window = {});

// Mass outside the centered interval of radius a: 1 - levy_ball_mass.
double levy_tail_mass(double sigma, double a, double abs_tol = 1e-10,
                      const LevySigmaWindow& window = {});

// Tail series for the mass outside radius a, summed to `terms` terms.
// Accurate to ~1e-7 once a^sigma >= 10; used as an independent cross-check
// and as the closing correction in unit-mass audits.
double bergstrom_tail(double sigma, double a, int terms = 6);

// rho^3 * Phi3(rho) where Phi3 is the third radial derivative profile of the
// unit-scale density: equals rho^2 S(rho) / (2 pi^2) with S the first
// sine moment of exp(-t^sigma).  Stays bounded as rho -> infinity.
double levy_phi3_scaled(double sigma, double rho, double abs_tol = 1e-10,
                        const LevySigmaWindow& window = {});

// Coefficient of the |x|^{-(1+sigma)} far-field law of the unit-scale density:
// Gamma(sigma+1) sin(pi sigma / 2) / pi, written in an overflow-safe product
// form.  Defined for sigma in (0, 2); vanishes at the Gaussian endpoint.
double bg_coefficient(double sigma);

// Tabulated unit-scale density on a logarithmic radius grid with monotone
// cubic interpolation in log-log coordinates.  Below the grid the profile is
// closed by an even parabola through the exact center value; beyond it by the
// far-field power law matched continuously.  Suitable for bulk evaluation
// (maximal-function scans, convolution) where per-point oscillatory
// quadrature would be too slow.
class LevyProfileTable {
 public:
  LevyProfileTable(double sigma, double rho_min = 1e-3, double rho_max = 1e6,
                   int points_per_decade = 64, double abs_tol = 1e-10);

  double sigma() const { return sigma_; }
  double value(double rho) const;

  // Integrals of the tabulated profile over [a, b] (0 <= a <= b) and the
  // matching first moment; both extend through the closures on either side.
  double segment_mass(double a, double b) const;
  double segment_first_moment(double a, double b) const;

 private:
  double sigma_ = 0;
  double rho_min_ = 0, rho_max_ = 0;
  double dlr_ = 0;       // uniform log-grid spacing
  double v0_ = 0;        // exact center value
  double v_min_ = 0;     // value at rho_min
  double head_slope_ = 0;  // log-log slope used below rho_min (capped at v0)
  double tail_coef_ = 0;   // continuity-matched far-field coefficient
  std::vector<double> lr_;   // log rho
  std::vector<double> lv_;   // log value
  std::vector<double> slope_;  // monotone Hermite slopes d(log v)/d(log rho)
  double interp_log(double lrho) const;
  double closure_moment(double b, int k) const;  // int_0^b rho^k * closure(rho) d rho
};

}  // namespace stablekern::kernels
