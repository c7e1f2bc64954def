#include "stablekern/quadrature/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "stablekern/quadrature/adaptive.hpp"
#include "stablekern/util/error.hpp"

namespace stablekern::quadrature {
namespace {

// Repeated pairwise averaging of the partial sums of an alternating series.
double average_tableau(const std::vector<double>& terms, double head) {
  std::vector<double> row(terms.size());
  double s = head;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    s += terms[i];
    row[i] = s;
  }
  while (row.size() > 1) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
    row.pop_back();
  }
  return row[0];
}

}  // namespace

OscResult sum_alternating_lobes(const std::function<double(double)>& f,
                                const std::function<double(std::size_t)>& zero,
                                double projected_lobes, const OscOptions& opt) {
  OscResult out;
  const bool direct = projected_lobes <= static_cast<double>(opt.max_direct_lobes);
  const double lobe_tol =
      std::max(opt.abs_tol / std::max(projected_lobes, 64.0), 5e-17);

  auto lobe_value = [&](std::size_t k) {
    Result r = integrate(f, zero(k), zero(k + 1), lobe_tol, 1e-13, 28);
    out.evals += r.evals;
    out.error += r.error;
    return r.value;
  };

  if (direct) {
    double sum = 0.0;
    int tiny_streak = 0;
    const auto n_direct = static_cast<std::size_t>(std::max(projected_lobes, 4.0));
    for (std::size_t k = 0; k < n_direct; ++k) {
      double t = lobe_value(k);
      sum += t;
      ++out.lobes;
      tiny_streak = std::fabs(t) < 0.25 * opt.abs_tol ? tiny_streak + 1 : 0;
      if (tiny_streak >= 2 && k >= 3) break;
    }
    out.value = sum;
    out.error += 0.25 * opt.abs_tol;
    return out;
  }

  // Burn-in: direct summation until lobes are past the envelope peak and small
  // enough to alternate with decreasing magnitude.
  double head = 0.0;
  std::size_t k = 0;
  while ((zero(k) < opt.burn_in_t || k < opt.burn_in_min) && k < opt.max_lobes) {
    head += lobe_value(k);
    ++k;
    ++out.lobes;
  }

  // Accelerated alternating tail.
  std::vector<double> terms;
  terms.reserve(opt.accel_terms);
  double prev_est = head;
  double residual = HUGE_VAL;
  for (std::size_t j = 0; j < opt.accel_terms && k < opt.max_lobes; ++j, ++k) {
    double t = lobe_value(k);
    ++out.lobes;
    terms.push_back(t);
    if (std::fabs(t) < 0.25 * opt.abs_tol && j >= 2) {
      // Tail already negligible; no extrapolation needed.
      out.value = head;
      for (double v : terms) out.value += v;
      out.error += 0.25 * opt.abs_tol;
      out.accelerated = true;
      return out;
    }
    if (terms.size() >= 6) {
      double est = average_tableau(terms, head);
      residual = std::fabs(est - prev_est);
      prev_est = est;
      if (residual < 0.5 * opt.abs_tol && terms.size() >= 12) {
        out.value = est;
        out.error += residual;
        out.accelerated = true;
        return out;
      }
    }
  }
  if (terms.empty()) {
    out.value = head;
    return out;
  }
  double est = average_tableau(terms, head);
  out.value = est;
  out.error += std::max(residual, std::fabs(est - prev_est));
  out.accelerated = true;
  return out;
}

}  // namespace stablekern::quadrature
