#include "stablekern/homspace/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "stablekern/util/error.hpp"
#include "stablekern/util/parallel.hpp"

namespace stablekern::homspace {

FiniteHomSpace normalize(const FiniteHomSpace& space, unsigned threads) {
  validate(space);
  if (!space.non_atomic_intent || !space.unbounded_intent) {
    throw PreconditionError(
        "normalize: the space must declare non-atomic and unbounded intent; the mass-based "
        "distance stands in for a construction on non-atomic unbounded spaces");
  }
  const std::size_t n = space.size();

  // Per center c: point order sorted by d(c, .) and the cumulative masses in
  // that order.  The smallest ball around c containing a point at distance r
  // is { p : d(c,p) <= r }, whose mass is a prefix sum ending at the last
  // point with distance <= r.
  std::vector<std::vector<double>> sorted_dist(n);
  std::vector<std::vector<double>> prefix_mass(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> order(n);
    for (std::size_t c = begin; c < end; ++c) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      const double* row = space.dist.data() + c * n;
      std::sort(order.begin(), order.end(),
                [row](std::size_t a, std::size_t b) { return row[a] < row[b]; });
      sorted_dist[c].resize(n);
      prefix_mass[c].resize(n);
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        sorted_dist[c][k] = row[order[k]];
        acc += space.mass[order[k]];
        prefix_mass[c][k] = acc;
      }
    }
  });

  FiniteHomSpace out = space;
  std::fill(out.dist.begin(), out.dist.end(), 0.0);
  // delta(x, y) = min over centers c of the mass of the smallest ball around
  // c containing both, i.e. the prefix mass at radius max(d(c,x), d(c,y)).
  // Ties in distance are absorbed into the prefix (upper_bound), matching
  // balls of radius "realized distance + half-spacing".
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) {
      for (std::size_t y = x + 1; y < n; ++y) {
        double best = space.total_mass();
        for (std::size_t c = 0; c < n; ++c) {
          const double need = std::max(space.d(c, x), space.d(c, y));
          const auto& ds = sorted_dist[c];
          const std::size_t last =
              static_cast<std::size_t>(std::upper_bound(ds.begin(), ds.end(), need) - ds.begin());
          // last >= 1 always: the center itself sits at distance 0 <= need.
          best = std::min(best, prefix_mass[c][last - 1]);
        }
        out.dist[x * n + y] = best;
        out.dist[y * n + x] = best;
      }
    }
  });
  out.normalized = true;
  return out;
}

NormalConstants predicted_normal_constants(double tau, double A) {
  if (!(tau >= 1.0) || !(A >= 1.0)) {
    throw PreconditionError("predicted_normal_constants: needs tau >= 1 and A >= 1");
  }
  const double e = std::log2(A);
  NormalConstants out;
  out.c1 = 1.0 / A;
  out.c2 = std::pow(10.0 * tau * tau, e);
  out.tau_tilde = std::pow(6.0 * tau * tau, e);
  return out;
}

NormalityReport normality_check(const FiniteHomSpace& normalized, double c1, double c2,
                                const std::vector<RadiusProbe>& probes) {
  if (!normalized.normalized) {
    throw PreconditionError("normality_check: space must be the output of normalize()");
  }
  if (!(c1 > 0.0) || !(c2 > c1)) {
    throw PreconditionError("normality_check: needs 0 < c1 < c2");
  }
  if (probes.empty()) throw PreconditionError("normality_check: empty probe schedule");
  NormalityReport report;
  report.c1 = c1;
  report.c2 = c2;
  bool first = true;
  for (const auto& p : probes) {
    if (p.center >= normalized.size() || !(p.r > 0.0)) {
      throw PreconditionError("normality_check: probe needs a valid center and r > 0");
    }
    const double ratio = normalized.ball_mass(p.center, p.r) / p.r;
    if (first || ratio < report.measured_c1) {
      report.measured_c1 = ratio;
      report.lower_witness = p;
    }
    if (first || ratio > report.measured_c2) {
      report.measured_c2 = ratio;
      report.upper_witness = p;
    }
    first = false;
    ++report.probes_checked;
  }
  report.worst_lower_slack = report.measured_c1 - c1;
  report.worst_upper_slack = c2 - report.measured_c2;
  report.passed = report.worst_lower_slack >= 0.0 && report.worst_upper_slack >= 0.0;
  return report;
}

AnnulusMassReport annulus_mass_check(const FiniteHomSpace& normalized, double c1, double c2,
                                     double eps, const std::vector<RadiusProbe>& probes) {
  if (!normalized.normalized) {
    throw PreconditionError("annulus_mass_check: space must be the output of normalize()");
  }
  if (!(c1 > 0.0) || !(c2 > c1) || !(eps > 0.0)) {
    throw PreconditionError("annulus_mass_check: needs 0 < c1 < c2 and eps > 0");
  }
  if (probes.empty()) throw PreconditionError("annulus_mass_check: empty probe schedule");
  AnnulusMassReport report;
  bool first = true;
  for (const auto& p : probes) {
    if (p.center >= normalized.size() || !(p.r > 0.0)) {
      throw PreconditionError("annulus_mass_check: probe needs a valid center and r > 0");
    }
    const double outer = (1.0 + eps) * c2 * p.r / c1;
    const double annulus =
        normalized.ball_mass(p.center, outer) - normalized.ball_mass(p.center, p.r);
    const double margin = annulus - eps * c2 * p.r;
    if (first || margin < report.worst_margin) {
      report.worst_margin = margin;
      report.witness = p;
    }
    first = false;
  }
  report.passed = report.worst_margin >= 0.0;
  return report;
}

}  // namespace stablekern::homspace
