#include "stablekern/homspace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "stablekern/util/error.hpp"
#include "stablekern/util/parallel.hpp"

namespace stablekern::homspace {

double triangle_constant(const FiniteHomSpace& space, unsigned threads) {
  const std::size_t n = space.size();
  if (n < 3) throw PreconditionError("triangle_constant: needs at least 3 points");
  std::mutex merge;
  double best = 0.0;
  // The ratio d(x,z) / (d(x,y) + d(y,z)) is symmetric under swapping x and z,
  // so scanning unordered endpoint pairs against every middle point covers
  // all triples.  Merging chunk maxima is order-independent, so the result
  // does not depend on the thread count.
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    double local = 0.0;
    for (std::size_t x = begin; x < end; ++x) {
      for (std::size_t z = x + 1; z < n; ++z) {
        const double dxz = space.d(x, z);
        for (std::size_t y = 0; y < n; ++y) {
          if (y == x || y == z) continue;
          const double den = space.d(x, y) + space.d(y, z);
          local = std::max(local, dxz / den);
        }
      }
    }
    std::lock_guard<std::mutex> lock(merge);
    best = std::max(best, local);
  });
  return best;
}

std::vector<RadiusProbe> realized_radius_probes(const FiniteHomSpace& space,
                                                const std::vector<std::size_t>& centers,
                                                double r_min, double r_max,
                                                std::size_t per_center) {
  if (centers.empty() || per_center == 0 || !(r_min >= 0.0) || !(r_max > r_min)) {
    throw PreconditionError("realized_radius_probes: needs centers, per_center >= 1, and r_max > r_min >= 0");
  }
  const std::size_t n = space.size();
  const double nudge = 0.5 * space.min_positive_distance();
  std::vector<RadiusProbe> probes;
  for (std::size_t c : centers) {
    if (c >= n) throw PreconditionError("realized_radius_probes: center index out of range");
    std::vector<double> ds;
    ds.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = space.d(c, j);
      if (dj >= r_min && dj <= r_max) ds.push_back(dj);
    }
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    if (ds.empty()) continue;
    const std::size_t take = std::min(per_center, ds.size());
    for (std::size_t k = 0; k < take; ++k) {
      // Evenly placed picks across the sorted realized distances.
      const std::size_t idx = (take == 1) ? ds.size() - 1 : (k * (ds.size() - 1)) / (take - 1);
      probes.push_back({c, ds[idx] + nudge});
    }
  }
  if (probes.empty()) {
    throw PreconditionError("realized_radius_probes: no realized distances in [r_min, r_max]");
  }
  return probes;
}

double doubling_constant(const FiniteHomSpace& space, const std::vector<RadiusProbe>& probes) {
  if (probes.empty()) throw PreconditionError("doubling_constant: empty probe schedule");
  double worst = 0.0;
  for (const auto& p : probes) {
    if (p.center >= space.size() || !(p.r > 0.0)) {
      throw PreconditionError("doubling_constant: probe needs a valid center and r > 0");
    }
    const double small = space.ball_mass(p.center, p.r);
    const double big = space.ball_mass(p.center, 2.0 * p.r);
    worst = std::max(worst, big / small);  // small >= mass(center) > 0
  }
  return worst;
}

GeometryConstants measure_geometry(const FiniteHomSpace& space,
                                   const std::vector<RadiusProbe>& probes, double safety,
                                   unsigned threads) {
  if (!(safety >= 1.0)) throw PreconditionError("measure_geometry: safety factor must be >= 1");
  GeometryConstants g;
  g.tau = std::max(1.0, triangle_constant(space, threads)) * safety;
  g.A = std::max(1.0, doubling_constant(space, probes)) * safety;
  return g;
}

AnnulusScan annulus_index(const FiniteHomSpace& space, const std::vector<double>& nu_schedule,
                          const std::vector<RadiusProbe>& probes) {
  if (nu_schedule.empty()) throw PreconditionError("annulus_index: empty nu schedule");
  if (probes.empty()) throw PreconditionError("annulus_index: empty probe schedule");
  for (double nu : nu_schedule) {
    if (!(nu > 1.0)) throw PreconditionError("annulus_index: every nu must exceed 1");
  }
  for (const auto& p : probes) {
    if (p.center >= space.size() || !(p.r > 0.0)) {
      throw PreconditionError("annulus_index: probe needs a valid center and r > 0");
    }
  }
  const std::size_t n = space.size();
  AnnulusScan scan;
  scan.entries.reserve(nu_schedule.size());
  for (double nu : nu_schedule) {
    AnnulusScanEntry entry;
    entry.nu = nu;
    entry.all_nonempty = true;
    for (const auto& p : probes) {
      bool nonempty = false;
      const double* row = space.dist.data() + p.center * n;
      for (std::size_t j = 0; j < n && !nonempty; ++j) {
        nonempty = row[j] >= p.r && row[j] < nu * p.r;
      }
      if (!nonempty) {
        if (entry.empty_count == 0) entry.first_empty = p;
        ++entry.empty_count;
        entry.all_nonempty = false;
      }
    }
    if (entry.all_nonempty && !scan.found) {
      scan.found = true;
      scan.smallest_passing = nu;
    }
    scan.entries.push_back(entry);
  }
  return scan;
}

double general_maximal_constant(double tau, double A, double gamma) {
  if (!(tau >= 1.0) || !(A >= 1.0)) {
    throw PreconditionError("general_maximal_constant: needs tau >= 1 and A >= 1");
  }
  if (!(gamma > 0.0) || !(gamma < 1.0 / tau)) {
    throw PreconditionError("general_maximal_constant: needs 0 < gamma < 1/tau");
  }
  const double base = 4.0 * tau * tau * tau * (1.0 + gamma) / (gamma * (1.0 - gamma * tau));
  return 1.0 + std::pow(base, std::log2(A));
}

}  // namespace stablekern::homspace
