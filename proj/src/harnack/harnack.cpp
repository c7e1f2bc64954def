#include "stablekern/harnack/harnack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "json.hpp"
#include "stablekern/quadrature/adaptive.hpp"
#include "stablekern/util/error.hpp"
#include "stablekern/util/parallel.hpp"

namespace stablekern::harnack {
namespace {

constexpr double kGolden = 2.399963229728653;  // golden angle in radians
constexpr double kInsideBall = 1.0 - 1e-9;     // stay strictly inside open balls

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0))
    throw PreconditionError("gamma must lie in (0, 1), got " + std::to_string(gamma));
}

// Base-2 van der Corput sequence: nested, so the first m points of any region
// sample are a subset of the first 2m points.
double van_der_corput(std::uint64_t i) {
  double f = 0.5, v = 0.0;
  for (++i; i > 0; i >>= 1, f *= 0.5)
    if (i & 1) v += f;
  return v;
}

int default_density(int dim) { return dim == 1 ? 64 : 256; }

// Unit direction number j of a nested sequence covering the sphere.
void direction(int dim, std::uint64_t j, double* out) {
  if (dim == 1) {
    out[0] = (j % 2 == 0) ? 1.0 : -1.0;
    return;
  }
  const double theta = static_cast<double>(j) * kGolden;
  if (dim == 2) {
    out[0] = std::cos(theta);
    out[1] = std::sin(theta);
    return;
  }
  // Base-3 radical inverse for the polar coordinate keeps the 3-d sequence nested.
  double f = 1.0 / 3.0, u = 0.0;
  for (std::uint64_t i = j + 1; i > 0; i /= 3, f /= 3.0) u += f * static_cast<double>(i % 3);
  const double c = 2.0 * u - 1.0;
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  out[0] = s * std::cos(theta);
  out[1] = s * std::sin(theta);
  out[2] = c;
}

struct RegionStat {
  double sup = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  bool zero_seen = false;
  int points = 0;

  void absorb(double v) {
    ++points;
    if (v <= 0.0) {
      zero_seen = true;
      return;
    }
    sup = std::max(sup, v);
    inf = std::min(inf, v);
  }

  // Ratio semantics: the infimum is floored at the smallest positive sampled
  // value; a sampled zero against a positive supremum is a literal failure of
  // the inequality and maps to +inf.  A region where every sample underflowed
  // to zero carries no evidence either way and stays neutral.
  double ratio() const {
    if (points == 0) return 1.0;
    if (sup <= 0.0) return 1.0;
    if (zero_seen) return std::numeric_limits<double>::infinity();
    return sup / inf;
  }
};

struct Region {
  double center_x;  // base point coordinate along e1
  double xi_x;      // region center coordinate along e1
  double radius;    // ball radius, or outer annulus radius
};

HarnackCertificate finalize(const kernels::PointKernel& K, double gamma, double H,
                            const std::vector<Region>& regions,
                            const std::vector<double>& ratios, long skipped, int density,
                            const char* kind) {
  HarnackCertificate cert;
  cert.gamma = gamma;
  cert.H = H;
  cert.regions = static_cast<long>(regions.size());
  cert.skipped = skipped;
  cert.points_per_region = density;
  std::size_t worst = 0;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    if (ratios[i] > ratios[worst]) worst = i;
  cert.worst_ratio = ratios.empty() ? 1.0 : std::max(1.0, ratios[worst]);
  if (!ratios.empty()) {
    const Region& r = regions[worst];
    cert.witness.x.assign(static_cast<std::size_t>(K.dim), 0.0);
    cert.witness.xi.assign(static_cast<std::size_t>(K.dim), 0.0);
    cert.witness.x[0] = r.center_x;
    cert.witness.xi[0] = r.xi_x;
    cert.witness.r = r.radius;
  }
  cert.passed = cert.worst_ratio <= H;
  cert.note = cert.passed
                  ? std::string(kind) + " inequality not refuted at this sampling density"
                  : std::string(kind) + " inequality refuted by a sampled region";
  return cert;
}

}  // namespace

std::string to_json(const HarnackCertificate& c) {
  nlohmann::json j;
  j["gamma"] = c.gamma;
  j["H"] = c.H;
  j["passed"] = c.passed;
  j["worst_ratio"] = std::isfinite(c.worst_ratio) ? nlohmann::json(c.worst_ratio)
                                                  : nlohmann::json("inf");
  j["witness"] = {{"x", c.witness.x}, {"xi", c.witness.xi}, {"r", c.witness.r}};
  j["sampling"] = {{"regions", c.regions},
                   {"skipped", c.skipped},
                   {"points_per_region", c.points_per_region}};
  j["note"] = c.note;
  return j.dump(2);
}

double poisson_harnack_ratio(int n, const kernels::SigmaOrder& sigma, double gamma, double t) {
  check_gamma(gamma);
  kernels::unit_sphere_area(n);  // validates the dimension
  if (!(t >= 0.0)) throw PreconditionError("distance ratio t must be nonnegative");
  const double e = 0.5 * (n + sigma.value);
  if (std::isinf(t)) return std::pow((1.0 + gamma) / (1.0 - gamma), n + sigma.value);
  const double up = std::log1p((1.0 + gamma) * (1.0 + gamma) * t * t);
  const double dn = std::log1p((1.0 - gamma) * (1.0 - gamma) * t * t);
  return std::exp(e * (up - dn));
}

double harnack_ratio_limit(int n, double sigma, double gamma) {
  check_gamma(gamma);
  return std::pow((1.0 + gamma) / (1.0 - gamma), n + sigma);
}

HarnackCertificate certify_ball_harnack(const kernels::PointKernel& K, double gamma, double H,
                                        const BallGrid& grid) {
  check_gamma(gamma);
  const int dim = K.dim;
  const int density = grid.points_per_ball > 0 ? grid.points_per_ball : default_density(dim);

  std::vector<Region> regions;
  long skipped = 0;
  for (double b : grid.base_points)
    for (double d : grid.distances) {
      if (!(d > 0.0)) {
        ++skipped;
        continue;
      }
      regions.push_back({b, b - d, gamma * d});
    }

  std::vector<double> ratios(regions.size(), 1.0);
  parallel_for(regions.size(), grid.threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> z(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> dir(static_cast<std::size_t>(dim), 0.0);
    for (std::size_t i = lo; i < hi; ++i) {
      const Region& rg = regions[i];
      std::fill(x.begin(), x.end(), 0.0);
      x[0] = rg.center_x;
      RegionStat stat;
      // Extremal points along the center axis: exact sup/inf location for
      // radially decreasing kernels.
      for (double s : {1.0, -1.0}) {
        std::fill(z.begin(), z.end(), 0.0);
        z[0] = rg.xi_x + s * kInsideBall * rg.radius;
        stat.absorb(K.at(x.data(), z.data()));
      }
      for (int j = 0; j < density; ++j) {
        const double frac =
            std::pow(van_der_corput(static_cast<std::uint64_t>(j)),
                     1.0 / static_cast<double>(dim));
        direction(dim, static_cast<std::uint64_t>(j), dir.data());
        for (int c = 0; c < dim; ++c)
          z[static_cast<std::size_t>(c)] = dir[static_cast<std::size_t>(c)] * frac *
                                           kInsideBall * rg.radius;
        z[0] += rg.xi_x;
        stat.absorb(K.at(x.data(), z.data()));
      }
      ratios[i] = stat.ratio();
    }
  });
  return finalize(K, gamma, H, regions, ratios, skipped, density, "ball");
}

HarnackCertificate certify_annulus_harnack(const kernels::PointKernel& K, const AnnulusSpec& spec,
                                           double H, const AnnulusGrid& grid) {
  check_gamma(spec.gamma);
  const int dim = K.dim;
  const int density = spec.sample_density > 0 ? spec.sample_density : default_density(dim);
  const double gamma = spec.gamma;

  std::vector<Region> regions;
  long skipped = 0;
  for (double c : grid.centers)
    for (double r : grid.radii) {
      if (!(r > 0.0)) {
        ++skipped;
        continue;
      }
      regions.push_back({c, c, r});
    }

  std::vector<double> ratios(regions.size(), 1.0);
  parallel_for(regions.size(), grid.threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> z(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> dir(static_cast<std::size_t>(dim), 0.0);
    for (std::size_t i = lo; i < hi; ++i) {
      const Region& rg = regions[i];
      std::fill(x.begin(), x.end(), 0.0);
      x[0] = rg.center_x;
      RegionStat stat;
      // Exact extremal radii (closed annulus) on both axis sides.
      for (double rho : {gamma * rg.radius, rg.radius})
        for (double s : {1.0, -1.0}) {
          std::fill(z.begin(), z.end(), 0.0);
          z[0] = rg.center_x + s * rho;
          stat.absorb(K.at(x.data(), z.data()));
        }
      for (int j = 0; j < density; ++j) {
        const double rho =
            rg.radius * (gamma + (1.0 - gamma) * van_der_corput(static_cast<std::uint64_t>(j)));
        direction(dim, static_cast<std::uint64_t>(j), dir.data());
        for (int c = 0; c < dim; ++c)
          z[static_cast<std::size_t>(c)] = dir[static_cast<std::size_t>(c)] * rho;
        z[0] += rg.center_x;
        stat.absorb(K.at(x.data(), z.data()));
      }
      ratios[i] = stat.ratio();
    }
  });
  return finalize(K, gamma, H, regions, ratios, skipped, density, "annulus");
}

std::vector<double> geometric_radii(double r0, double factor, int count) {
  if (!(r0 > 0.0) || !(factor > 0.0) || count < 1)
    throw PreconditionError("geometric radius schedule needs r0 > 0, factor > 0, count >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  double r = r0;
  for (int i = 0; i < count; ++i, r *= factor) out.push_back(r);
  return out;
}

kernels::PointKernel regularize(const kernels::PointKernel& K, double gamma) {
  check_gamma(gamma);
  if (K.dim != 1)
    throw PreconditionError("regularize: only one-dimensional kernels carry a ball measure here");
  kernels::PointKernel out;
  out.dim = 1;
  out.name = K.name + " (ball average gamma=" + std::to_string(gamma) + ")";
  out.translation_invariant = K.translation_invariant;
  out.markov_tol = K.markov_tol;
  auto base = K;  // capture by value; PointKernel is cheap to copy
  out.eval = [base, gamma](const double* x, const double* z) {
    const double d = std::fabs(*x - *z);
    if (d == 0.0) return base.at(x, z);
    const double r = gamma * d;
    const double scale = std::max(base.at(x, z), 1e-300);
    auto f = [&](double u) { return base(*x, u); };
    quadrature::Result q =
        quadrature::integrate(f, *z - r, *z + r, scale * 2.0 * r * 1e-11, 1e-10);
    return q.value / (2.0 * r);
  };
  return out;
}

}  // namespace stablekern::harnack
