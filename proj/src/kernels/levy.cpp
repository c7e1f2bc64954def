#include "stablekern/kernels/levy.hpp"

#include <algorithm>
#include <cmath>

#include "stablekern/quadrature/adaptive.hpp"
#include "stablekern/quadrature/oscillatory.hpp"

namespace stablekern::kernels {
namespace {

constexpr double kPi = M_PI;

void check_levy_sigma(double sigma, const LevySigmaWindow& w) {
  if (sigma == 2.0) return;  // Gaussian endpoint, always fine numerically
  SigmaOrder guard(sigma);
  if (sigma < w.lo || sigma > w.hi)
    throw PreconditionError("stability order " + std::to_string(sigma) +
                            " outside the configured window [" + std::to_string(w.lo) + ", " +
                            std::to_string(w.hi) + "]");
}

// Point past which exp(-t^sigma) < ~1e-18.
double envelope_cutoff(double sigma) { return std::exp(std::log(41.5) / sigma); }

// Power-series evaluation of int_0^infty exp(-t^sigma) t^{g-1} trig(rho t) dt
// via termwise Mellin transforms:
//   sum_{m>=1} (-1)^{m+1} Gamma(m sigma + g) sin(pi m sigma / 2) / (m! rho^{m sigma + g}).
// (g = 1 covers the cosine transform of the envelope, g = 2 the first sine
// moment, g = 0 the tail-mass series up to a factor 2/pi.)  For sigma < 1 the
// series converges outright; for sigma >= 1 it is asymptotic and is truncated
// at the smallest term.  Magnitude control uses the envelope without the sine
// factor so that incidental zeros of sin cannot fake convergence.
struct SeriesEval {
  double value = 0.0;
  double err = HUGE_VAL;
  bool ok = false;
};

SeriesEval stable_series(double sigma, double rho, double g, double abs_tol, int max_terms = 40) {
  SeriesEval out;
  if (sigma >= 2.0 || rho <= 0.0) return out;  // Gaussian endpoint decays faster than any power
  const double lrho = std::log(rho);
  double sum = 0.0;
  double prev_env = HUGE_VAL;
  for (int m = 1; m <= max_terms; ++m) {
    const double a = m * sigma + g;
    const double env = std::exp(std::lgamma(a) - std::lgamma(m + 1.0) - a * lrho);
    if (env > prev_env && m >= 3) {
      // Asymptotic regime ended; the optimal truncation error is the last
      // (smallest) envelope seen.
      out.value = sum;
      out.err = prev_env;
      out.ok = prev_env <= abs_tol;
      return out;
    }
    const double term = (m % 2 ? 1.0 : -1.0) * std::sin(0.5 * kPi * m * sigma) * env;
    sum += term;
    if (env <= abs_tol && m >= 2) {
      out.value = sum;
      out.err = env;
      out.ok = true;
      return out;
    }
    prev_env = env;
  }
  out.value = sum;
  out.err = prev_env;
  return out;
}

// Adaptive quadrature over [0, T] in geometrically growing panels; suited to
// integrands with envelope exp(-t^sigma) whose mass can sit many decades out.
double panel_integral(const std::function<double(double)>& f, double T, std::size_t* evals) {
  double total = 0.0;
  double a = 0.0, b = 1.0;
  while (a < T) {
    b = std::min(b, T);
    quadrature::Result r = quadrature::integrate(f, a, b, 1e-15, 1e-13);
    total += r.value;
    if (evals) *evals += r.evals;
    a = b;
    b *= 4.0;
  }
  return total;
}

double fail_threshold(double abs_tol) { return std::max(1e-7, 10.0 * abs_tol); }

}  // namespace

double levy_profile_1d(double sigma, double rho, double abs_tol, const LevySigmaWindow& window) {
  check_levy_sigma(sigma, window);
  if (rho < 0.0) throw PreconditionError("radius must be nonnegative");
  const double T = envelope_cutoff(sigma);

  // Far field: the power series reaches full precision quickly.
  SeriesEval s = stable_series(sigma, rho, 1.0, 0.3 * kPi * abs_tol);
  if (s.ok) return s.value / kPi;

  if (rho * T <= 4.0) {
    // At most a fraction of an oscillation over the whole envelope support.
    auto f = [&](double t) { return std::exp(-std::pow(t, sigma)) * std::cos(rho * t); };
    return panel_integral(f, T, nullptr) / kPi;
  }

  // Lobe-by-lobe between consecutive zeros of cos(rho t), accelerated tail.
  auto f = [&](double t) { return std::exp(-std::pow(t, sigma)) * std::cos(rho * t); };
  const double z0 = 0.5 * kPi / rho;
  quadrature::Result head = quadrature::integrate(f, 0.0, z0, 0.05 * kPi * abs_tol, 1e-13);
  auto zero = [&](std::size_t k) { return (0.5 + static_cast<double>(k)) * kPi / rho; };
  quadrature::OscOptions opt;
  opt.abs_tol = 0.5 * kPi * abs_tol;
  opt.burn_in_min = 24;
  quadrature::OscResult tail =
      quadrature::sum_alternating_lobes(f, zero, std::max(0.0, (T - z0) * rho / kPi), opt);
  if (tail.error > fail_threshold(kPi * abs_tol))
    throw QuadratureError("oscillatory tail did not reach tolerance (sigma=" +
                              std::to_string(sigma) + ", rho=" + std::to_string(rho) + ")",
                          (head.value + tail.value) / kPi, tail.error / kPi);
  const double v = (head.value + tail.value) / kPi;
  if (v < -fail_threshold(abs_tol))
    throw Error("density evaluated significantly negative: " + std::to_string(v));
  return v;
}

double levy_ball_mass(double sigma, double a, double abs_tol, const LevySigmaWindow& window) {
  check_levy_sigma(sigma, window);
  if (!(a > 0.0)) throw PreconditionError("ball radius must be positive");
  // Tail series first: mass outside = (2/pi) * series(g = 0).
  SeriesEval s = stable_series(sigma, a, 0.0, 0.4 * kPi * abs_tol);
  if (s.ok) return 1.0 - 2.0 / kPi * s.value;

  const double T = envelope_cutoff(sigma);
  auto f = [&](double t) { return std::exp(-std::pow(t, sigma)) * std::sin(a * t) / t; };
  if (a * T <= 4.0) return 2.0 / kPi * panel_integral(f, T, nullptr);

  const double z0 = kPi / a;
  quadrature::Result head = quadrature::integrate(f, 0.0, z0, 0.1 * kPi * abs_tol, 1e-13);
  auto zero = [&](std::size_t k) { return (static_cast<double>(k) + 1.0) * kPi / a; };
  quadrature::OscOptions opt;
  opt.abs_tol = 0.25 * kPi * abs_tol;
  quadrature::OscResult tail =
      quadrature::sum_alternating_lobes(f, zero, std::max(0.0, (T - z0) * a / kPi), opt);
  if (tail.error > fail_threshold(kPi * abs_tol))
    throw QuadratureError("oscillatory tail did not reach tolerance (ball mass, sigma=" +
                              std::to_string(sigma) + ", a=" + std::to_string(a) + ")",
                          2.0 / kPi * (head.value + tail.value), tail.error);
  return 2.0 / kPi * (head.value + tail.value);
}

double levy_tail_mass(double sigma, double a, double abs_tol, const LevySigmaWindow& window) {
  return 1.0 - levy_ball_mass(sigma, a, abs_tol, window);
}

double bergstrom_tail(double sigma, double a, int terms) {
  SigmaOrder guard(sigma);
  if (!(a > 0.0)) throw PreconditionError("tail radius must be positive");
  const double la = std::log(a);
  double sum = 0.0;
  for (int m = 1; m <= terms; ++m) {
    const double env = std::exp(std::lgamma(m * sigma) - std::lgamma(m + 1.0) - m * sigma * la);
    sum += (m % 2 ? 1.0 : -1.0) * std::sin(0.5 * kPi * m * sigma) * env;
  }
  return 2.0 / kPi * sum;
}

double levy_phi3_scaled(double sigma, double rho, double abs_tol, const LevySigmaWindow& window) {
  check_levy_sigma(sigma, window);
  if (!(rho > 0.0)) throw PreconditionError("radius must be positive");
  const double scale = rho * rho / (2.0 * kPi * kPi);  // maps the sine moment to rho^3 Phi3

  // The series has terms ~ rho^{-(m sigma + 2)}; below rho = 1 the early terms
  // explode and cancellation eats the budget, so only use it from rho >= 1.
  if (rho >= 1.0) {
    SeriesEval s = stable_series(sigma, rho, 2.0, abs_tol / std::max(scale, 1e-300));
    if (s.ok) return scale * s.value;
  }

  const double T = envelope_cutoff(sigma);
  auto f = [&](double t) { return std::exp(-std::pow(t, sigma)) * t * std::sin(rho * t); };
  if (rho * T <= 4.0) return scale * panel_integral(f, T, nullptr);

  const double z0 = kPi / rho;
  const double sine_tol = abs_tol / std::max(scale, 1e-300);
  quadrature::Result head = quadrature::integrate(f, 0.0, z0, 0.1 * sine_tol, 1e-13);
  auto zero = [&](std::size_t k) { return (static_cast<double>(k) + 1.0) * kPi / rho; };
  quadrature::OscOptions opt;
  opt.abs_tol = 0.25 * sine_tol;
  // The envelope t exp(-t^sigma) peaks at t = sigma^{-1/sigma}; alternation is
  // reliable only past it.
  opt.burn_in_t = 1.25 * std::pow(1.0 / sigma, 1.0 / sigma);
  quadrature::OscResult tail =
      quadrature::sum_alternating_lobes(f, zero, std::max(0.0, (T - z0) * rho / kPi), opt);
  if (tail.error > fail_threshold(sine_tol))
    throw QuadratureError("oscillatory tail did not reach tolerance (sine moment, sigma=" +
                              std::to_string(sigma) + ", rho=" + std::to_string(rho) + ")",
                          scale * (head.value + tail.value), scale * tail.error);
  return scale * (head.value + tail.value);
}

double bg_coefficient(double sigma) {
  SigmaOrder guard(sigma, /*allow_gaussian=*/true);
  if (sigma == 2.0) return 0.0;
  // sigma 2^{sigma-1} pi^{-3/2} sin(sigma pi/2) Gamma((1+sigma)/2) Gamma(sigma/2),
  // with sigma * Gamma(sigma/2) rewritten as 2 Gamma(1 + sigma/2) so the
  // sigma -> 0 limit is evaluated without a 0 * inf product.
  return std::pow(2.0, sigma) * std::pow(kPi, -1.5) * std::sin(0.5 * kPi * sigma) *
         std::tgamma(0.5 * (1.0 + sigma)) * std::tgamma(1.0 + 0.5 * sigma);
}

LevyProfileTable::LevyProfileTable(double sigma, double rho_min, double rho_max,
                                   int points_per_decade, double abs_tol)
    : sigma_(sigma), rho_min_(rho_min), rho_max_(rho_max) {
  LevySigmaWindow window;
  check_levy_sigma(sigma, window);
  if (!(rho_min > 0.0) || !(rho_max > rho_min) || points_per_decade < 4)
    throw PreconditionError("profile table grid is degenerate");
  v0_ = sigma == 2.0 ? 0.5 / std::sqrt(kPi) : std::exp(std::lgamma(1.0 + 1.0 / sigma)) / kPi;

  const double lr0 = std::log(rho_min), lr1 = std::log(rho_max);
  const auto n = static_cast<std::size_t>(
                     std::ceil((lr1 - lr0) / std::log(10.0) * points_per_decade)) +
                 1;
  dlr_ = (lr1 - lr0) / static_cast<double>(n - 1);
  lr_.resize(n);
  lv_.resize(n);
  double tol = abs_tol;
  for (std::size_t i = 0; i < n; ++i) {
    lr_[i] = lr0 + dlr_ * static_cast<double>(i);
    const double v = levy_profile_1d(sigma, std::exp(lr_[i]), tol, window);
    lv_[i] = std::log(std::max(v, 1e-300));
    // Track the decreasing profile so deep-tail points are resolved relatively.
    tol = std::max(1e-13, std::min(abs_tol, 3e-7 * v));
  }
  v_min_ = std::exp(lv_.front());
  tail_coef_ = std::exp(lv_.back() + (1.0 + sigma) * lr_.back());

  // Monotone Hermite slopes (harmonic mean of adjacent secants).
  slope_.assign(n, 0.0);
  std::vector<double> sec(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) sec[i] = (lv_[i + 1] - lv_[i]) / dlr_;
  slope_.front() = sec.front();
  slope_.back() = sec.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (sec[i - 1] * sec[i] <= 0.0)
      slope_[i] = 0.0;
    else
      slope_[i] = 2.0 * sec[i - 1] * sec[i] / (sec[i - 1] + sec[i]);
  }
  // Below the grid the profile is extended by the first segment's power law,
  // capped at the exact center value.  (For moderate sigma the cap engages
  // immediately and the closure is just the flat center plateau.)
  head_slope_ = std::min(slope_.front(), 0.0);
  if (head_slope_ < -0.999) head_slope_ = -0.999;  // keep the closure integrable
}

double LevyProfileTable::interp_log(double lrho) const {
  const double pos = (lrho - lr_.front()) / dlr_;
  auto i = static_cast<std::size_t>(std::max(0.0, std::min(pos, static_cast<double>(lr_.size() - 2))));
  const double s = (lrho - lr_[i]) / dlr_;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * lv_[i] + h10 * dlr_ * slope_[i] + h01 * lv_[i + 1] + h11 * dlr_ * slope_[i + 1];
}

double LevyProfileTable::value(double rho) const {
  rho = std::fabs(rho);
  if (rho >= rho_max_) return tail_coef_ * std::pow(rho, -(1.0 + sigma_));
  if (rho <= rho_min_) {
    if (rho == 0.0) return v0_;
    return std::min(v0_, v_min_ * std::pow(rho / rho_min_, head_slope_));
  }
  return std::exp(interp_log(std::log(rho)));
}

double LevyProfileTable::closure_moment(double b, int k) const {
  // int_0^b rho^k * min(v0, v_min (rho/rho_min)^s) d rho, with s <= 0.
  b = std::min(b, rho_min_);
  if (b <= 0.0) return 0.0;
  const double s = head_slope_;
  double cross = rho_min_;  // radius below which the cap v0 is active
  if (s < -1e-12) cross = rho_min_ * std::pow(v0_ / v_min_, 1.0 / s);
  double total = 0.0;
  const double b_flat = std::min(b, cross);
  total += v0_ * std::pow(b_flat, k + 1) / (k + 1);
  if (b > cross) {
    const double p = s + k + 1.0;  // > 0 because s > -1
    total += v_min_ * std::pow(rho_min_, -s) * (std::pow(b, p) - std::pow(cross, p)) / p;
  }
  return total;
}

double LevyProfileTable::segment_mass(double a, double b) const {
  if (a > b) throw PreconditionError("segment endpoints must be ordered");
  if (a < 0.0) throw PreconditionError("segment must lie in rho >= 0");
  double total = 0.0;
  if (a < rho_min_) total += closure_moment(std::min(b, rho_min_), 0) - closure_moment(a, 0);
  const double lo = std::max(a, rho_min_), hi = std::min(b, rho_max_);
  if (hi > lo) {
    auto f = [&](double rho) { return std::exp(interp_log(std::log(rho))); };
    total += quadrature::integrate(f, lo, hi, 1e-14, 1e-9).value;
  }
  if (b > rho_max_) {
    const double lo2 = std::max(a, rho_max_);
    total += tail_coef_ / sigma_ * (std::pow(lo2, -sigma_) - std::pow(b, -sigma_));
  }
  return total;
}

double LevyProfileTable::segment_first_moment(double a, double b) const {
  if (a > b) throw PreconditionError("segment endpoints must be ordered");
  if (a < 0.0) throw PreconditionError("segment must lie in rho >= 0");
  double total = 0.0;
  if (a < rho_min_) total += closure_moment(std::min(b, rho_min_), 1) - closure_moment(a, 1);
  const double lo = std::max(a, rho_min_), hi = std::min(b, rho_max_);
  if (hi > lo) {
    auto f = [&](double rho) { return rho * std::exp(interp_log(std::log(rho))); };
    total += quadrature::integrate(f, lo, hi, 1e-14, 1e-9).value;
  }
  if (b > rho_max_) {
    const double lo2 = std::max(a, rho_max_);
    if (sigma_ == 1.0)
      total += tail_coef_ * std::log(b / lo2);
    else
      total += tail_coef_ / (sigma_ - 1.0) * (std::pow(lo2, 1.0 - sigma_) - std::pow(b, 1.0 - sigma_));
  }
  return total;
}

}  // namespace stablekern::kernels
