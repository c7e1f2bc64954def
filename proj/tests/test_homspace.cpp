#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "stablekern/harnack/harnack.hpp"
#include "stablekern/homspace/general_run.hpp"
#include "stablekern/homspace/geometry.hpp"
#include "stablekern/homspace/normalize.hpp"
#include "stablekern/homspace/space.hpp"
#include "stablekern/homspace/space_kernel.hpp"
#include "stablekern/kernels/point_kernel.hpp"
#include "stablekern/kernels/poisson.hpp"
#include "stablekern/util/error.hpp"

using namespace stablekern;
using namespace stablekern::homspace;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<std::size_t> every_nth(std::size_t n, std::size_t step) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; i += step) out.push_back(i);
  if (out.back() != n - 1) out.push_back(n - 1);
  return out;
}

// Brute-force triple maximum, the independent oracle for triangle_constant.
double brute_triangle(const FiniteHomSpace& s) {
  double worst = 0.0;
  for (std::size_t x = 0; x < s.size(); ++x)
    for (std::size_t y = 0; y < s.size(); ++y)
      for (std::size_t z = 0; z < s.size(); ++z) {
        if (x == y || y == z || x == z) continue;
        worst = std::max(worst, s.d(x, z) / (s.d(x, y) + s.d(y, z)));
      }
  return worst;
}

// Brute-force minimal covering-ball mass, the independent oracle for the
// normalized distance: every center, ball just wide enough to hold the pair
// (ties absorbed by the half-spacing nudge).
double brute_delta(const FiniteHomSpace& s, std::size_t i, std::size_t j) {
  if (i == j) return 0.0;
  double best = 1e300;
  for (std::size_t c = 0; c < s.size(); ++c) {
    // the smallest ball around c holding both: the closed ball at the
    // realized radius, counted directly so ties are absorbed exactly
    const double r = std::max(s.d(c, i), s.d(c, j));
    double m = 0.0;
    for (std::size_t p = 0; p < s.size(); ++p)
      if (s.d(c, p) <= r) m += s.mass[p];
    best = std::min(best, m);
  }
  return best;
}

// Brute-force ball maximal function: every center, every radius strictly
// between consecutive realized distances (the per-center gaps can be far
// smaller than the global minimal spacing, so midpoints are the only safe
// separators).
std::vector<double> brute_hl(const FiniteHomSpace& s, const std::vector<double>& f) {
  const std::size_t n = s.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> ds;
    ds.reserve(n);
    for (std::size_t q = 0; q < n; ++q) ds.push_back(s.d(c, q));
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const double r = (k + 1 < ds.size()) ? 0.5 * (ds[k] + ds[k + 1]) : ds[k] + 1.0;
      double acc = 0.0, vol = 0.0;
      for (std::size_t p = 0; p < n; ++p) {
        if (s.d(c, p) < r) {
          acc += std::abs(f[p]) * s.mass[p];
          vol += s.mass[p];
        }
      }
      const double avg = acc / vol;
      for (std::size_t x = 0; x < n; ++x)
        if (s.d(c, x) < r) out[x] = std::max(out[x], avg);
    }
  }
  return out;
}

FiniteHomSpace small_random_space(unsigned seed, std::size_t n) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pos(0.0, 10.0);
  std::uniform_real_distribution<double> wgt(0.2, 2.0);
  std::vector<std::vector<double>> coords;
  for (std::size_t i = 0; i < n; ++i) coords.push_back({pos(rng), pos(rng)});
  FiniteHomSpace s;
  s.coords = coords;
  for (std::size_t i = 0; i < n; ++i) s.mass.push_back(wgt(rng));
  s.dist.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = coords[i][0] - coords[j][0];
      const double dy = coords[i][1] - coords[j][1];
      s.set_d(i, j, std::sqrt(dx * dx + dy * dy));
    }
  validate(s);
  return s;
}

}  // namespace

TEST_CASE("space validation rejects malformed inputs") {
  auto good = uniform_grid_space(0.0, 1.0, 5);
  CHECK_NOTHROW(validate(good));

  auto bad = good;
  bad.dist[1 * 5 + 3] *= 2.0;  // break symmetry
  CHECK_THROWS_AS(validate(bad), PreconditionError);

  bad = good;
  bad.dist[2 * 5 + 2] = 0.5;  // nonzero diagonal
  CHECK_THROWS_AS(validate(bad), PreconditionError);

  bad = good;
  bad.set_d(0, 1, 0.0);  // coincident distinct points
  CHECK_THROWS_AS(validate(bad), PreconditionError);

  bad = good;
  bad.mass[3] = -1.0;
  CHECK_THROWS_AS(validate(bad), PreconditionError);

  bad = good;
  bad.mass[3] = 0.0;
  CHECK_THROWS_AS(validate(bad), PreconditionError);
}

TEST_CASE("grid generators lay out cells as documented") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);
  CHECK(g.size() == 161);
  CHECK(g.cell_volume == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(g.coord1(0) == -8.0);
  CHECK(g.coord1(160) == 8.0);
  CHECK(g.non_atomic_intent);
  CHECK(g.unbounded_intent);
  CHECK_FALSE(g.normalized);
  CHECK(g.total_mass() == doctest::Approx(16.1).epsilon(1e-12));  // 161 cells of width 0.1

  auto hl = sqrt_weight_halfline_space(0.1, 40.0, 400);
  CHECK(hl.size() == 400);
  const double h = hl.cell_volume;
  // masses are exact cell integrals of x^{-1/2}
  for (std::size_t i : {std::size_t(0), std::size_t(200), std::size_t(399)}) {
    const double x = hl.coord1(i);
    const double expect = 2.0 * (std::sqrt(x + 0.5 * h) - std::sqrt(x - 0.5 * h));
    CHECK(hl.mass[i] == doctest::Approx(expect).epsilon(1e-13));
  }
  // cells must stay inside the support of the weight
  CHECK_THROWS_AS(sqrt_weight_halfline_space(0.01, 40.0, 400), PreconditionError);

  auto gu = gapped_union_space(-2, 2, 33);
  CHECK(gu.size() == 5 * 33);
  // odd points-per-interval puts the interval midpoints 2k on the sample
  CHECK(gu.coord1(16) == doctest::Approx(-4.0).epsilon(1e-13));
  CHECK(gu.coord1(82) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(gu.coord1(148) == doctest::Approx(4.0).epsilon(1e-13));

  auto dy = dyadic_gap_space(1, 12, 17);
  CHECK(dy.size() == 12 * 17);
  CHECK(dy.coord1((8 - 1) * 17 + 8) == doctest::Approx(256.0).epsilon(1e-13));
  CHECK_THROWS_AS(dyadic_gap_space(0, 3, 17), PreconditionError);

  // metric power resets the normalized flag and keeps masses
  auto snow = with_metric_power(g, 0.5);
  CHECK(snow.d(0, 160) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK_THROWS_AS(with_metric_power(g, 0.0), PreconditionError);
}

TEST_CASE("space JSON round trip and error reporting") {
  auto gu = gapped_union_space(-1, 1, 5);
  auto back = space_from_json(to_json(gu));
  REQUIRE(back.size() == gu.size());
  for (std::size_t i = 0; i < gu.size(); ++i) {
    CHECK(back.mass[i] == gu.mass[i]);
    CHECK(back.d(0, i) == gu.d(0, i));
  }
  CHECK(back.non_atomic_intent == gu.non_atomic_intent);
  CHECK(back.unbounded_intent == gu.unbounded_intent);
  CHECK(back.cell_volume == gu.cell_volume);

  auto euclid = space_from_json(R"({"points": [0, 1, 3], "dist": "euclidean"})");
  CHECK(euclid.size() == 3);
  CHECK(euclid.d(0, 2) == 3.0);
  CHECK(euclid.mass[1] == 1.0);  // uniform weights default to 1 without cell_volume

  auto sqrtw = space_from_json(
      R"({"points": [1.0, 1.2, 1.4], "weights": "sqrt_inv", "cell_volume": 0.2})");
  CHECK(sqrtw.mass[0] ==
        doctest::Approx(2.0 * (std::sqrt(1.1) - std::sqrt(0.9))).epsilon(1e-13));

  auto abstract = space_from_json(
      R"({"points": ["a", "b"], "dist": "matrix", "dist_matrix": [[0, 2], [2, 0]],
          "weights": [1.0, 3.0], "flags": {"non_atomic": true}})");
  CHECK(abstract.ids.size() == 2);
  CHECK(abstract.d(0, 1) == 2.0);
  CHECK(abstract.mass[1] == 3.0);
  CHECK(abstract.non_atomic_intent);
  CHECK_FALSE(abstract.unbounded_intent);

  CHECK_THROWS_AS(space_from_json("{]"), ConfigError);
  CHECK_THROWS_AS(space_from_json(R"({"points": []})"), ConfigError);
  CHECK_THROWS_AS(space_from_json(R"({"points": [0, 1], "dist": "bogus"})"), ConfigError);
  CHECK_THROWS_AS(space_from_json(R"({"points": [0, "x"]})"), ConfigError);
  CHECK_THROWS_AS(
      space_from_json(R"({"points": [0, 1], "dist": "matrix", "dist_matrix": [[0, 1]]})"),
      ConfigError);
  CHECK_THROWS_AS(space_from_json(R"({"points": [0, 1], "weights": [1.0, -1.0]})"), ConfigError);
  CHECK_THROWS_AS(space_from_json(R"({"points": ["a", "b"], "dist": "euclidean"})"), ConfigError);
  CHECK_THROWS_AS(space_from_json(R"({"points": [0.5, 1.0], "weights": "sqrt_inv",
                                      "cell_volume": 2.0})"),
                  ConfigError);
}

TEST_CASE("triangle constant: pins, brute oracle, snowflake") {
  // points on a line with Euclidean distance: a genuine metric
  auto line = uniform_grid_space(0.0, 1.0, 101);
  CHECK(triangle_constant(line) == doctest::Approx(1.0).epsilon(1e-12));

  // d(a,c) = 10 through a midpoint at distance 1 each way
  auto spread = matrix_space({0, 1, 10, 1, 0, 1, 10, 1, 0}, {1, 1, 1});
  CHECK(triangle_constant(spread) == 5.0);

  // snowflaked line sample: below the sqrt(2) class bound, oracle-equal
  auto snow = with_metric_power(uniform_grid_space(0.0, 1.0, 21), 0.5);
  const double tri = triangle_constant(snow);
  CHECK(tri <= std::sqrt(2.0) + 1e-12);
  CHECK(tri == doctest::Approx(brute_triangle(snow)).epsilon(1e-13));

  // the raw triple maximum may sit below 1; the class constant is max(1, .)
  CHECK(tri < 1.0);

  auto two = matrix_space({0, 1, 1, 0}, {1, 1});
  CHECK_THROWS_AS(triangle_constant(two), PreconditionError);

  // thread count must not change the result
  auto big = small_random_space(7, 40);
  CHECK(triangle_constant(big, 1) == triangle_constant(big, 4));
}

TEST_CASE("doubling constant: counting oracle on the unit grid") {
  auto g = uniform_grid_space(0.0, 1.0, 101);  // h = 0.01
  // quarter-cell radius offsets keep the doubled radius off the cell
  // boundaries, so the cell counts are exact: B(x, kh + h/4) holds 2k+1
  // interior cells and B(x, 2r) holds 4k+1; the worst probe is the widest
  std::vector<RadiusProbe> probes = {{50, 0.0525}, {50, 0.1025}, {50, 0.1525},
                                     {0, 0.0525},  {0, 0.1025},  {0, 0.1525}};
  const double got = doubling_constant(g, probes);
  CHECK(got == doctest::Approx(61.0 / 31.0).epsilon(1e-12));
  CHECK(got < 2.0);

  // a radius below the spacing leaves both balls equal to the center alone
  std::vector<RadiusProbe> tiny = {{50, 0.004}};
  CHECK(doubling_constant(g, tiny) == 1.0);

  CHECK_THROWS_AS(doubling_constant(g, std::vector<RadiusProbe>{{50, 0.0}}), PreconditionError);
}

TEST_CASE("doubling constant of the sqrt-weighted half-line") {
  auto hl = sqrt_weight_halfline_space(0.1, 40.0, 400);

  // interior balls reproduce the continuum constant 1 + sqrt(3), attained
  // around x = 2r, up to realized-radius quantization
  std::vector<std::size_t> centers;
  for (std::size_t i = 0; i < hl.size(); ++i)
    if (hl.coord1(i) >= 4.0 && hl.coord1(i) <= 6.0) centers.push_back(i);
  auto interior = realized_radius_probes(hl, centers, 1.5, 3.0, 20);
  const double inner = doubling_constant(hl, interior);
  CHECK(inner == doctest::Approx(2.5484150600028643).epsilon(1e-12));  // regression pin
  CHECK(inner > 2.3);
  CHECK(inner < 1.0 + std::sqrt(3.0) + 0.05);

  // the full window adds right-edge truncation and tops out higher
  auto full = realized_radius_probes(hl, every_nth(hl.size(), 10), 0.4, 20.0, 12);
  const double all = doubling_constant(hl, full);
  CHECK(all == doctest::Approx(3.2787411662074524).epsilon(1e-12));  // regression pin
  CHECK(all >= inner);

  auto geo = measure_geometry(hl, full, 1.1);
  CHECK(geo.tau == doctest::Approx(1.1).epsilon(1e-12));  // metric line, floored at 1, inflated
  CHECK(geo.A == doctest::Approx(1.1 * all).epsilon(1e-12));
  CHECK_THROWS_AS(measure_geometry(hl, full, 0.5), PreconditionError);
}

TEST_CASE("realized radius probes stay within the requested band") {
  auto g = uniform_grid_space(0.0, 1.0, 101);
  auto probes = realized_radius_probes(g, {50}, 0.2, 0.4, 5);
  REQUIRE(probes.size() == 5);
  for (const auto& p : probes) {
    CHECK(p.center == 50);
    CHECK(p.r >= 0.2);
    CHECK(p.r <= 0.4 + 0.01);  // nudged by half a spacing
  }
  CHECK_THROWS_AS(realized_radius_probes(g, {50}, 5.0, 9.0, 3), PreconditionError);
}

TEST_CASE("annulus index brackets the gapped union at 3") {
  auto gu = gapped_union_space(-2, 2, 33);
  std::vector<RadiusProbe> probes;
  for (std::size_t c : {std::size_t(16), std::size_t(82), std::size_t(115), std::size_t(148)})
    for (double r : {0.5, 1.0}) probes.push_back({c, r});
  auto scan = annulus_index(gu, {1.5, 2.0, 2.5, 2.9, 3.1, 3.5, 4.0}, probes);
  REQUIRE(scan.entries.size() == 7);
  CHECK_FALSE(scan.entries[0].all_nonempty);  // 1.5
  CHECK_FALSE(scan.entries[3].all_nonempty);  // 2.9: still an empty annulus
  CHECK(scan.entries[3].empty_count > 0);
  CHECK(scan.entries[4].all_nonempty);  // 3.1: every annulus hits a neighbor interval
  CHECK(scan.found);
  CHECK(scan.smallest_passing == 3.1);

  // monotone annulus classes: emptiness can only shrink as nu grows
  for (std::size_t k = 1; k < scan.entries.size(); ++k) {
    CHECK(scan.entries[k].empty_count <= scan.entries[k - 1].empty_count);
    if (scan.entries[k - 1].all_nonempty) CHECK(scan.entries[k].all_nonempty);
  }

  CHECK_THROWS_AS(annulus_index(gu, {0.9}, probes), PreconditionError);
  CHECK_THROWS_AS(annulus_index(gu, {}, probes), PreconditionError);
}

TEST_CASE("annulus index: dyadic union goes empty at large centers") {
  auto dy = dyadic_gap_space(1, 12, 17);
  // probes at x_n = 2^n with r = 2: the next interval sits 2^{n-1} - 1 away,
  // far beyond any fixed-ratio annulus once n is large
  std::vector<RadiusProbe> far;
  for (int n = 8; n <= 12; ++n) far.push_back({std::size_t((n - 1) * 17 + 8), 2.0});
  auto scan = annulus_index(dy, {2.0, 4.0, 8.0, 16.0}, far);
  CHECK_FALSE(scan.found);
  for (const auto& e : scan.entries) {
    CHECK(e.empty_count == far.size());
    CHECK_FALSE(e.all_nonempty);
  }
  CHECK(scan.entries[0].first_empty.center == std::size_t((8 - 1) * 17 + 8));

  // at a small center the same annulus still reaches the neighbor interval
  std::vector<RadiusProbe> near = {{std::size_t((2 - 1) * 17 + 8), 2.0}};
  auto ok = annulus_index(dy, {2.0}, near);
  CHECK(ok.found);
  CHECK(ok.smallest_passing == 2.0);
}

TEST_CASE("annulus index: connected grid passes every nu above the resolution floor") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);
  auto probes = realized_radius_probes(g, every_nth(g.size(), 16), 1.2, 5.0, 6);
  auto scan = annulus_index(g, {1.05, 1.5, 2.0, 3.0}, probes);
  CHECK(scan.found);
  CHECK(scan.smallest_passing == 1.05);
  for (const auto& e : scan.entries) CHECK(e.all_nonempty);
}

TEST_CASE("general maximal constant: closed form and domain") {
  // (tau=1, A=2, gamma=1/4): 1 + 4*1.25/(0.25*0.75) = 1 + 80/3
  CHECK(general_maximal_constant(1.0, 2.0, 0.25) ==
        doctest::Approx(1.0 + 80.0 / 3.0).epsilon(1e-14));
  // A = 1 gives exponent 0: the constant collapses to 2 for every gamma
  CHECK(general_maximal_constant(1.0, 1.0, 0.7) == 2.0);
  CHECK(general_maximal_constant(3.0, 1.0, 0.1) == 2.0);
  // pole as gamma approaches 1/tau
  CHECK(general_maximal_constant(1.0, 2.0, 0.999) > 1e3);
  CHECK_THROWS_AS(general_maximal_constant(1.0, 2.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(general_maximal_constant(2.0, 2.0, 0.5), PreconditionError);  // gamma = 1/tau
  CHECK_THROWS_AS(general_maximal_constant(0.9, 2.0, 0.25), PreconditionError);
  CHECK_THROWS_AS(general_maximal_constant(1.0, 0.9, 0.25), PreconditionError);
}

TEST_CASE("normalize: brute-force oracle, symmetry, intent flags") {
  auto s = small_random_space(11, 14);
  CHECK_THROWS_WITH_AS(normalize(s), doctest::Contains("intent"), PreconditionError);
  s.non_atomic_intent = true;
  CHECK_THROWS_AS(normalize(s), PreconditionError);
  s.unbounded_intent = true;

  auto norm = normalize(s);
  CHECK(norm.normalized);
  CHECK(norm.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(norm.d(i, i) == 0.0);
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      CHECK(norm.d(i, j) == norm.d(j, i));
      CHECK(norm.d(i, j) == doctest::Approx(brute_delta(s, i, j)).epsilon(1e-12));
    }
  }
  // masses and coordinates ride along unchanged
  CHECK(norm.mass == s.mass);

  // determinism across thread counts
  auto norm4 = normalize(s, 4);
  CHECK(norm4.dist == norm.dist);
}

TEST_CASE("normalize: uniform grid distance within one to two cells") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);
  const double h = g.cell_volume;
  auto norm = normalize(g);
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const double slack = norm.d(i, j) - std::abs(g.coord1(i) - g.coord1(j));
      lo = std::min(lo, slack);
      hi = std::max(hi, slack);
    }
  CHECK(lo >= h - 1e-12);       // minimal covering ball always adds at least one cell
  CHECK(hi <= 2.0 * h + 1e-12);  // and at most two (odd separations, interior pairs)
}

TEST_CASE("normalize: half-line distance matches the analytic mass integral") {
  auto hl = sqrt_weight_halfline_space(0.1, 40.0, 300);
  auto norm = normalize(hl);
  // delta against the exact joining-interval mass 2(sqrt b - sqrt a), in
  // units of the larger local cell mass: always above (a ball must cover
  // both endpoint cells) and within two cells
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < hl.size(); ++i)
    for (std::size_t j = i + 1; j < hl.size(); ++j) {
      const double exact = 2.0 * (std::sqrt(hl.coord1(j)) - std::sqrt(hl.coord1(i)));
      const double cell = std::max(hl.mass[i], hl.mass[j]);
      const double t = (norm.d(i, j) - exact) / cell;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  CHECK(lo >= 0.4);
  CHECK(hi <= 2.1);
  // far-apart pairs are relatively tight
  const std::size_t i10 = 74, j30 = 224;  // coords near 10 and 30
  const double exact = 2.0 * (std::sqrt(hl.coord1(j30)) - std::sqrt(hl.coord1(i10)));
  CHECK(norm.d(i10, j30) == doctest::Approx(exact).epsilon(0.03));
}

TEST_CASE("normalize: idempotent up to the measured band, delta-comparability") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);
  auto norm = normalize(g);
  auto probes = realized_radius_probes(norm, every_nth(norm.size(), 8), 0.5, 5.0, 8);
  auto rep = normality_check(norm, 0.8, 2.0, probes);
  REQUIRE(rep.passed);

  auto renorm = normalize(norm);
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < norm.size(); ++i)
    for (std::size_t j = i + 1; j < norm.size(); ++j) {
      const double ratio = renorm.d(i, j) / norm.d(i, j);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  // re-normalizing a normal space moves delta only within the measured band
  CHECK(lo >= rep.measured_c1 * 0.95);
  CHECK(hi <= rep.measured_c2 * 1.05);

  // delta(x,y) is comparable to mu(B_d(x, d(x,y)))
  lo = 1e300;
  hi = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      const double ratio = norm.d(i, j) / g.ball_mass(i, g.d(i, j));
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  CHECK(lo >= 0.5 - 1e-12);
  CHECK(hi <= 3.0 + 1e-12);
}

TEST_CASE("predicted normal constants: closed-form pins") {
  auto c = predicted_normal_constants(1.0, 2.0);
  CHECK(c.tau_tilde == 6.0);
  CHECK(c.c1 == 0.5);
  CHECK(c.c2 == 10.0);

  c = predicted_normal_constants(1.0, 1.0);
  CHECK(c.tau_tilde == 1.0);
  CHECK(c.c1 == 1.0);
  CHECK(c.c2 == 1.0);

  c = predicted_normal_constants(2.0, 4.0);
  CHECK(c.tau_tilde == doctest::Approx(576.0).epsilon(1e-13));
  CHECK(c.c1 == 0.25);
  CHECK(c.c2 == doctest::Approx(1600.0).epsilon(1e-13));

  CHECK_THROWS_AS(predicted_normal_constants(0.5, 2.0), PreconditionError);
  CHECK_THROWS_AS(predicted_normal_constants(1.0, 0.5), PreconditionError);
}

TEST_CASE("normality check on the uniform grid") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);
  auto norm = normalize(g);
  auto probes = realized_radius_probes(norm, every_nth(norm.size(), 8), 0.5, 5.0, 8);

  auto rep = normality_check(norm, 0.8, 2.0, probes);
  CHECK(rep.passed);
  CHECK(rep.probes_checked == probes.size());
  // measured band: near 1 with up to two cells of discretization slack
  CHECK(rep.measured_c1 == doctest::Approx(0.83333333333333337).epsilon(1e-12));
  CHECK(rep.measured_c2 == doctest::Approx(1.94).epsilon(1e-16).scale(1.0).epsilon(1e-12));
  CHECK(rep.worst_lower_slack >= 0.0);
  CHECK(rep.worst_upper_slack >= 0.0);

  // the predicted envelope from the measured geometry is wider and passes
  // with strictly larger slack
  auto geo = measure_geometry(g, realized_radius_probes(g, every_nth(g.size(), 8), 0.5, 5.0, 8),
                              1.1);
  auto pred = predicted_normal_constants(geo.tau, geo.A);
  auto wide = normality_check(norm, pred.c1, pred.c2, probes);
  CHECK(wide.passed);
  CHECK(wide.worst_lower_slack > rep.worst_lower_slack);
  CHECK(wide.worst_upper_slack > rep.worst_upper_slack);

  // deliberately tight constants are refuted with negative slack
  auto tight = normality_check(norm, 1.0, 1.5, probes);
  CHECK_FALSE(tight.passed);
  CHECK(tight.worst_lower_slack < 0.0);
  CHECK(tight.worst_upper_slack < 0.0);

  CHECK_THROWS_AS(normality_check(g, 0.8, 2.0, probes), PreconditionError);  // not normalized
  CHECK_THROWS_AS(normality_check(norm, 2.0, 0.8, probes), PreconditionError);

  // annulus mass lower bound from the same constants
  auto am = annulus_mass_check(norm, 0.8, 2.0, 0.1, probes);
  CHECK(am.passed);
  CHECK(am.worst_margin == doctest::Approx(0.98).epsilon(1e-12));
}

TEST_CASE("normality check on the weighted half-line") {
  auto hl = sqrt_weight_halfline_space(0.1, 40.0, 300);
  auto norm = normalize(hl);
  auto probes = realized_radius_probes(norm, every_nth(norm.size(), 8), 0.5, 6.0, 8);
  auto rep = normality_check(norm, 0.94, 2.03, probes);
  CHECK(rep.passed);
  CHECK(rep.measured_c1 == doctest::Approx(0.96072103121688879).epsilon(1e-12));
  CHECK(rep.measured_c2 == doctest::Approx(1.9875424266340846).epsilon(1e-12));

  auto geo = measure_geometry(
      hl, realized_radius_probes(hl, every_nth(hl.size(), 10), 0.4, 20.0, 12), 1.1);
  auto pred = predicted_normal_constants(geo.tau, geo.A);
  CHECK(normality_check(norm, pred.c1, pred.c2, probes).passed);
}

TEST_CASE("kernel builders: symmetry, positivity, truncation absorption") {
  auto g = uniform_grid_space(0.0, 1.0, 5);  // h = 0.25, masses 0.25

  auto K = kernel_from_callable(
      g, "affine", [](std::size_t i, std::size_t j) { return double(i + j + 1); }, 1e-6);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(K.at(i, j) == K.at(j, i));

  CHECK_THROWS_AS(kernel_from_callable(
                      g, "neg", [](std::size_t, std::size_t) { return -1.0; }, 1e-6),
                  PreconditionError);

  // absorption fills each row to exactly unit mass via the diagonal
  auto lazy = kernel_from_callable(
      g, "lazy", [](std::size_t i, std::size_t j) { return i == j ? 0.0 : 0.5; }, 1e-12, true);
  CHECK(markov_defect(g, lazy) <= 1e-12);
  CHECK(diagonal_atom_bound(g, lazy) <= 1.0 + 1e-12);

  // rows already above unit mass cannot be absorbed
  CHECK_THROWS_AS(kernel_from_callable(
                      g, "hot", [](std::size_t, std::size_t) { return 2.0; }, 1e-6, true),
                  PreconditionError);

  // sampling a 1-d point kernel picks up the coordinates
  auto W = kernel_from_point_kernel(g, kernels::gaussian_point_kernel(1, 0.5));
  auto Wk = kernels::gaussian_point_kernel(1, 0.5);
  CHECK(W.at(0, 4) == doctest::Approx(Wk(0.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("cell-averaged kernel: window truncation matches the analytic edge mass") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);
  const double h = g.cell_volume;
  for (double y : {1.0, 0.1}) {
    auto K = poisson_cell_kernel(g, 1.0, y, 0.51);
    // the worst row sits at the window edge; its sum is the exact kernel
    // mass of the covered interval
    const double oracle =
        1.0 - kernels::poisson_segment_mass_1d(1.0, y, -16.0 - 0.5 * h, 0.5 * h);
    CHECK(markov_defect(g, K) == doctest::Approx(oracle).epsilon(1e-12));
  }

  // a scale far below the grid spacing keeps unit rows (cell averaging sees
  // the whole peak) and drives the diagonal atom toward its ceiling of 1
  auto sharp = poisson_cell_kernel(g, 1.0, 1e-6, 1e-4);
  CHECK(markov_defect(g, sharp) < 1e-4);
  const double atom = diagonal_atom_bound(g, sharp);
  CHECK(atom > 0.9999);
  CHECK(atom <= 1.0);

  CHECK_THROWS_AS(poisson_cell_kernel(small_random_space(3, 5), 1.0, 0.5, 1e-6),
                  PreconditionError);  // no cell width
}

TEST_CASE("delta profile kernel is exactly Markov with a lazy diagonal") {
  auto hl = sqrt_weight_halfline_space(0.1, 40.0, 300);
  auto norm = normalize(hl);
  for (double beta : {4.0, 0.25, 0.004}) {
    auto K = delta_profile_kernel(norm, 1.0, beta, 1e-9);
    CHECK(markov_defect(norm, K) <= 1e-12);
    const double atom = diagonal_atom_bound(norm, K);
    CHECK(atom <= 1.0 + 1e-12);
    CHECK(atom > 0.5);  // the profile leaves most of the mass to the diagonal
    // off-diagonal entries follow the declared radial profile exactly
    const double t = norm.d(10, 200);
    const double q = std::pow(beta, 1.0) / (2.0 * kernels::poisson_normalizer(1, 1.0)) /
                     (beta * beta + t * t);
    CHECK(K.at(10, 200) == doctest::Approx(q).epsilon(1e-13));
  }
  CHECK_THROWS_AS(delta_profile_kernel(hl, 1.0, 0.5, 1e-9), PreconditionError);  // not normalized
  CHECK_THROWS_AS(delta_profile_kernel(norm, -1.0, 0.5, 1e-9), PreconditionError);
  CHECK_THROWS_AS(delta_profile_kernel(norm, 1.0, 0.0, 1e-9), PreconditionError);
}

TEST_CASE("ball comparability certificates approach the closed-form limit") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);
  const double gamma = 0.25;
  const double limit = harnack::harnack_ratio_limit(1, 1.0, gamma);
  REQUIRE(limit == doctest::Approx(std::pow(1.25 / 0.75, 2.0)).epsilon(1e-13));

  // worst ratios stay below the sigma=1 limit and approach it as the scale
  // shrinks relative to the window
  const std::vector<double> ys = {0.5, 1.0, 2.0};
  const std::vector<double> pins = {2.77301602407878, 2.758740995174338, 2.7038678871734376};
  for (std::size_t k = 0; k < ys.size(); ++k) {
    auto K = poisson_cell_kernel(g, 1.0, ys[k], 0.51);
    auto cert = certify_space_ball_harnack(g, K, gamma, 3.0);
    CHECK(cert.passed);
    CHECK(cert.worst_ratio == doctest::Approx(pins[k]).epsilon(1e-12));
    CHECK(cert.worst_ratio < limit);
    CHECK(cert.regions == 161 * 160);
    CHECK(cert.skipped == 0);
  }
  CHECK(pins[0] / limit > 0.99);  // tightest at the smallest scale

  // a bound below the worst ratio is refuted with a witness
  auto K = poisson_cell_kernel(g, 1.0, 0.5, 0.51);
  auto refuted = certify_space_ball_harnack(g, K, gamma, 2.7);
  CHECK_FALSE(refuted.passed);
  CHECK(refuted.worst_ratio > 2.7);
  CHECK(refuted.witness.r > 0.0);

  // determinism across thread counts
  auto c1 = certify_space_ball_harnack(g, K, gamma, 3.0, 1);
  auto c4 = certify_space_ball_harnack(g, K, gamma, 3.0, 4);
  CHECK(c1.worst_ratio == c4.worst_ratio);
  CHECK(c1.witness_x == c4.witness_x);

  CHECK_THROWS_AS(certify_space_ball_harnack(g, K, 0.0, 2.0), PreconditionError);
  CHECK_THROWS_AS(certify_space_ball_harnack(g, K, 1.0, 2.0), PreconditionError);
  CHECK_THROWS_AS(certify_space_ball_harnack(g, K, 0.25, 0.5), PreconditionError);
}

TEST_CASE("annulus certificates skip empty regions and refute growing kernels") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);

  // radially increasing kernel: refuted on the outermost probed annulus
  auto grower = kernel_from_callable(
      g, "grower",
      [&g](std::size_t i, std::size_t j) {
        const double t = g.d(i, j);
        return 1e-3 * (1.0 + t * t);
      },
      1.0);
  std::vector<RadiusProbe> probes = {{80, 1.0}, {80, 2.0}, {80, 4.0}};
  auto cert = certify_space_annulus_harnack(g, grower, 0.25, 1.5, probes);
  CHECK_FALSE(cert.passed);
  CHECK(cert.worst_ratio > 1.5);
  CHECK(cert.witness.r == 4.0);  // ratio grows with the annulus radius
  CHECK(cert.witness_x == 80);

  // probes whose annulus misses the sample are skipped and counted
  auto dy = dyadic_gap_space(1, 12, 17);
  auto flat = kernel_from_callable(
      dy, "flat", [](std::size_t, std::size_t) { return 1.0; }, 1.0);
  std::vector<RadiusProbe> gap = {{std::size_t((10 - 1) * 17 + 8), 2.0},
                                  {std::size_t((10 - 1) * 17 + 8), 0.5}};
  auto sk = certify_space_annulus_harnack(dy, flat, 0.5, 2.0, gap);
  CHECK(sk.skipped == 1);  // the r=2 annulus [1, 2) falls in the gap
  CHECK(sk.regions == 1);
  CHECK(sk.passed);

  CHECK_THROWS_AS(certify_space_annulus_harnack(g, grower, 0.25, 1.5, {}), PreconditionError);
  CHECK_THROWS_AS(certify_space_annulus_harnack(g, grower, 0.25, 1.5, {{400, 1.0}}),
                  PreconditionError);
}

TEST_CASE("regularization: constant kernels fixed, certified kernels sandwiched") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);

  auto constant = kernel_from_callable(
      g, "const", [](std::size_t, std::size_t) { return 0.3; }, 1.0);
  auto smoothed = regularize_space_kernel(g, constant, 0.25);
  for (std::size_t i = 0; i < g.size(); i += 13)
    for (std::size_t j = 0; j < g.size(); j += 7)
      CHECK(smoothed.at(i, j) == doctest::Approx(0.3).epsilon(1e-13));

  // certified kernel: K <= H Ktilde <= H^2 K off the diagonal
  const double H = 3.0;
  auto K = poisson_cell_kernel(g, 1.0, 1.0, 0.51);
  REQUIRE(certify_space_ball_harnack(g, K, 0.25, H).passed);
  auto Kt = regularize_space_kernel(g, K, 0.25);
  double worst_up = 0.0, worst_down = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(Kt.at(i, i) == K.at(i, i));  // diagonal kept
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      worst_up = std::max(worst_up, K.at(i, j) / Kt.at(i, j));
      worst_down = std::max(worst_down, Kt.at(i, j) / K.at(i, j));
    }
  }
  CHECK(worst_up <= H);    // K <= H Ktilde
  CHECK(worst_down <= H);  // Ktilde <= H K, so H Ktilde <= H^2 K
  CHECK(worst_up == doctest::Approx(1.04525746284221).epsilon(1e-12));
  CHECK(worst_down == doctest::Approx(1.3327264577290217).epsilon(1e-12));
}

TEST_CASE("space ball maximal: exact on constants, dominates |f|, brute oracle") {
  auto s = small_random_space(23, 12);

  std::vector<double> ones(s.size(), 1.0);
  for (double v : space_hl_maximal(s, ones)) CHECK(v == 1.0);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::vector<double> f(s.size());
  for (double& v : f) v = val(rng);

  auto M = space_hl_maximal(s, f);
  auto brute = brute_hl(s, f);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(M[i] >= std::abs(f[i]));  // the singleton ball is always available
    CHECK(M[i] == doctest::Approx(brute[i]).epsilon(1e-13));
  }

  auto M4 = space_hl_maximal(s, f, 4);
  CHECK(M == M4);

  CHECK_THROWS_AS(space_hl_maximal(s, std::vector<double>(3, 1.0)), PreconditionError);
}

TEST_CASE("space maximal check: domination with measured ratio far below C") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = std::max(0.0, 1.0 - std::abs(g.coord1(i)));

  const double gamma = 0.25, H = 3.0;
  std::vector<CertifiedKernel> family;
  for (double y : {0.5, 1.0, 2.0}) {
    auto K = poisson_cell_kernel(g, 1.0, y, 0.51);
    family.push_back({K, certify_space_ball_harnack(g, K, gamma, H)});
  }
  auto geo = measure_geometry(g, realized_radius_probes(g, every_nth(g.size(), 8), 0.5, 5.0, 8),
                              1.1);

  auto rep = space_maximal_check(g, family, gamma, H, geo, f);
  CHECK(rep.passed);
  CHECK(rep.C == doctest::Approx(615.51390064532416).epsilon(1e-12));
  CHECK(rep.worst_ratio == doctest::Approx(0.47706041627330914).epsilon(1e-12));
  CHECK(rep.worst_ratio < 0.01 * rep.C);  // measured ratio far below the theorem constant
  CHECK(rep.atom_passed);
  CHECK(rep.atom_max == doctest::Approx(0.063451034861107147).epsilon(1e-12));
  REQUIRE(rep.family_maximal.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(rep.family_maximal[i] <= rep.C * rep.hl_maximal[i]);

  // f == 1: the family maximal of Markov kernels stays within the row mass
  std::vector<double> ones(g.size(), 1.0);
  auto unit = space_maximal_check(g, family, gamma, H, geo, ones);
  CHECK(unit.passed);
  CHECK(unit.worst_ratio <= 1.0 + 1e-12);

  // a certificate weaker than the declared pair is refused with a pointer
  // to the certification entry points
  auto weak = family;
  weak[0].certificate = certify_space_ball_harnack(g, weak[0].kernel, gamma, 2.7);  // fails
  CHECK_THROWS_WITH_AS(space_maximal_check(g, weak, gamma, H, geo, f),
                       doctest::Contains("certify_space_ball_harnack"), PreconditionError);
  auto strong_gamma = family;
  strong_gamma[1].certificate = certify_space_ball_harnack(g, strong_gamma[1].kernel, 0.5, H);
  if (strong_gamma[1].certificate.passed) {
    // certificate at a larger gamma than declared: probes narrower regions,
    // so it is not evidence for the declared pair
    CHECK_THROWS_AS(space_maximal_check(g, strong_gamma, gamma, H, geo, f), PreconditionError);
  }
}

TEST_CASE("far-field stability: closed-form scales pass, halved scales fail") {
  auto g = uniform_grid_space(-8.0, 8.0, 161);
  auto norm = normalize(g);

  // Cauchy-type kernels with the analytic tail scale alpha = 1.1 y^s / I(s)
  for (double y : {1.0, 0.1, 0.003}) {
    auto K = poisson_cell_kernel(g, 1.0, y, 0.51);
    auto rep = stability_check_general(norm, K, 1.0, 1.1 * y / kPi, 7.0);
    CHECK(rep.passed);
    CHECK(rep.worst_ratio > 0.9);  // the bound is tight, not slack
    CHECK(rep.pairs_checked == 4245);
  }
  {  // sigma = 1/2 variant
    auto K = poisson_cell_kernel(g, 0.5, 0.01, 0.51);
    const double alpha = 1.1 * std::sqrt(0.01) / kernels::poisson_normalizer(1, 0.5);
    CHECK(stability_check_general(norm, K, 0.5, alpha, 7.0).passed);
  }

  // halving the scale produces a witnessed violation
  auto K = poisson_cell_kernel(g, 1.0, 0.1, 0.51);
  auto fail = stability_check_general(norm, K, 1.0, 0.55 * 0.1 / kPi, 7.0);
  CHECK_FALSE(fail.passed);
  CHECK(fail.worst_ratio == doctest::Approx(1.92481).epsilon(1e-3));
  CHECK(fail.witness_delta > 7.0);
  CHECK(K.at(fail.witness_i, fail.witness_j) * std::pow(fail.witness_delta, 2.0) >
        0.55 * 0.1 / kPi);

  // the Gaussian tail beats every polynomial decay rate
  auto G = kernel_from_point_kernel(g, kernels::gaussian_point_kernel(1, 0.5));
  for (double s : {0.5, 1.0, 3.0}) {
    auto rep = stability_check_general(norm, G, s, 1e-6, 7.0);
    CHECK(rep.passed);
    CHECK(rep.worst_ratio < 1e-10);
  }

  // a kernel constant in distance violates any power decay on far pairs
  auto flat = kernel_from_callable(
      norm, "flat", [](std::size_t, std::size_t) { return 0.3; }, 1.0);
  auto bad = stability_check_general(norm, flat, 1.0, 0.05, 7.0);
  CHECK_FALSE(bad.passed);
  CHECK(bad.witness_delta > 7.0);

  // vacuous pass when no pair reaches beyond R
  auto vac = stability_check_general(norm, flat, 1.0, 0.05, 100.0);
  CHECK(vac.passed);
  CHECK(vac.pairs_checked == 0);

  CHECK_THROWS_AS(stability_check_general(g, flat, 1.0, 0.05, 7.0), PreconditionError);
  CHECK_THROWS_AS(stability_check_general(norm, flat, -1.0, 0.05, 7.0), PreconditionError);
  CHECK_THROWS_AS(stability_check_general(norm, flat, 1.0, 0.0, 7.0), PreconditionError);
  CHECK_THROWS_AS(stability_check_general(norm, flat, 1.0, 0.05, 0.0), PreconditionError);
}

namespace {

// The grid concentration family: Cauchy-type kernels on [-8, 8] whose scale
// schedule drives the far-field parameter alpha toward zero.
struct GridLeg {
  FiniteHomSpace grid = uniform_grid_space(-8.0, 8.0, 161);
  FiniteHomSpace norm;
  std::vector<StableFamilyMember> family;
  GeneralRunConfig cfg;

  GridLeg() {
    norm = normalize(grid);
    auto probes = realized_radius_probes(norm, every_nth(norm.size(), 16), 2.0, 16.5, 10);
    cfg.gamma = 0.04;
    cfg.H = 7500.0;
    cfg.s = 1.0;
    cfg.R = 7.0;
    cfg.lambda = 5.0;
    cfg.normal = {1.0, 0.8, 2.0};
    for (double y : {1.0, 0.3, 0.1, 0.03, 0.01, 0.003}) {
      auto K = poisson_cell_kernel(grid, 1.0, y, 0.51);
      const double alpha = 1.1 * y / kPi;
      family.push_back({K, alpha, certify_space_annulus_harnack(norm, K, cfg.gamma, cfg.H, probes),
                        stability_check_general(norm, K, cfg.s, alpha, cfg.R)});
    }
  }
};

}  // namespace

TEST_CASE("general concentration run: grid family tails collapse") {
  GridLeg leg;
  for (const auto& m : leg.family) {
    REQUIRE(m.harnack.passed);
    REQUIRE(m.stability.passed);
  }

  auto curve = general_concentration_run(leg.norm, leg.family, leg.cfg);
  REQUIRE(curve.points.size() == 6);
  CHECK(curve.nu == doctest::Approx(5.0).epsilon(1e-14));  // 2 c2 / c1
  CHECK(curve.chain_terms == 2);
  CHECK(curve.chain_constant == doctest::Approx(7501.0).epsilon(1e-14));  // 1 + H
  CHECK(curve.nonincreasing);
  CHECK(curve.dominated);
  CHECK(curve.final_over_initial ==
        doctest::Approx(0.0030833774488335732).epsilon(1e-12));
  CHECK(curve.final_over_initial < 0.01);
  CHECK(curve.points.front().tail == doctest::Approx(0.050767635476432593).epsilon(1e-12));
  CHECK(curve.points.back().tail == doctest::Approx(0.00015653578235863552).epsilon(1e-12));

  // the window tail never exceeds the full-line arctan tail, and tracks its
  // order of magnitude
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    const double y = curve.points[k].alpha * kPi / 1.1;
    const double full_line = 1.0 - (2.0 / kPi) * std::atan(leg.cfg.lambda / y);
    CHECK(curve.points[k].tail <= full_line);
    CHECK(curve.points[k].tail > 0.25 * full_line);
    CHECK(curve.points[k].chain_bound >= curve.points[k].tail);
    // the three recorded bounds are separate pointwise maxima: the chain is
    // squeezed between its middle part and the sum of the two parts
    CHECK(curve.points[k].chain_bound >= curve.points[k].middle_bound);
    CHECK(curve.points[k].chain_bound <=
          curve.points[k].middle_bound + curve.points[k].far_bound + 1e-12);
  }

  // CSV view
  auto csv = to_csv(curve);
  CHECK(csv.rfind("alpha,tail,chain_bound,middle_bound,far_bound\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);

  // determinism across thread counts
  auto curve4 = general_concentration_run(leg.norm, leg.family, leg.cfg, 4);
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    CHECK(curve4.points[k].tail == curve.points[k].tail);
    CHECK(curve4.points[k].chain_bound == curve.points[k].chain_bound);
  }
}

TEST_CASE("general concentration run: constant schedule gives a constant curve") {
  GridLeg leg;
  std::vector<StableFamilyMember> same = {leg.family[2], leg.family[2], leg.family[2]};
  auto curve = general_concentration_run(leg.norm, same, leg.cfg);
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.nonincreasing);
  CHECK(curve.final_over_initial == 1.0);
  for (const auto& p : curve.points) {
    CHECK(p.tail == curve.points.front().tail);
    CHECK(p.chain_bound == curve.points.front().chain_bound);
  }
}

TEST_CASE("general concentration run: refusals name the failed hypothesis") {
  GridLeg leg;

  // not normalized
  CHECK_THROWS_WITH_AS(general_concentration_run(leg.grid, leg.family, leg.cfg),
                       doctest::Contains("normalized"), PreconditionError);

  // gamma beyond (c1 / 2 c2)^2
  auto wide = leg.cfg;
  wide.gamma = 0.05;
  CHECK_THROWS_WITH_AS(general_concentration_run(leg.norm, leg.family, wide),
                       doctest::Contains("(c1/(2 c2))^2"), PreconditionError);

  // lambda must sit below R
  auto swapped = leg.cfg;
  swapped.lambda = 8.0;
  CHECK_THROWS_AS(general_concentration_run(leg.norm, leg.family, swapped), PreconditionError);

  // a member with a failed annulus certificate
  auto broken = leg.family;
  broken[0].harnack.passed = false;
  CHECK_THROWS_WITH_AS(general_concentration_run(leg.norm, broken, leg.cfg),
                       doctest::Contains("annulus"), PreconditionError);

  // a member whose certificate is weaker than the declared (gamma, H)
  auto weak = leg.family;
  weak[1].harnack.H = leg.cfg.H * 2.0;
  CHECK_THROWS_WITH_AS(general_concentration_run(leg.norm, weak, leg.cfg),
                       doctest::Contains("certify_space_annulus_harnack"), PreconditionError);

  // a member whose stability report was run at a different R
  auto mismatched = leg.family;
  mismatched[2].stability.R = 6.0;
  CHECK_THROWS_WITH_AS(general_concentration_run(leg.norm, mismatched, leg.cfg),
                       doctest::Contains("stability"), PreconditionError);

  CHECK_THROWS_AS(general_concentration_run(leg.norm, {}, leg.cfg), PreconditionError);
}

TEST_CASE("general concentration run: weighted half-line with a delta-radial family") {
  auto hl = sqrt_weight_halfline_space(0.1, 40.0, 300);
  auto norm = normalize(hl);

  GeneralRunConfig cfg;
  cfg.gamma = 0.04;
  cfg.H = 656.25;  // 1.05 / gamma^2, the radial-profile annulus ratio with margin
  cfg.s = 1.0;
  cfg.R = 8.0;
  cfg.lambda = 2.0;
  cfg.normal = {1.0, 0.94, 2.03};
  const double cap = (cfg.normal.c1 / (2.0 * cfg.normal.c2)) * (cfg.normal.c1 / (2.0 * cfg.normal.c2));
  REQUIRE(cfg.gamma <= cap);

  auto probes = realized_radius_probes(norm, every_nth(norm.size(), 12), 1.0, 11.0, 8);
  std::vector<StableFamilyMember> family;
  for (double beta : {4.0, 1.0, 0.25, 0.06, 0.015, 0.004}) {
    auto K = delta_profile_kernel(norm, 1.0, beta, 1e-9);
    const double alpha = beta / (2.0 * kPi) * (1.0 + 1e-9);
    auto cert = certify_space_annulus_harnack(norm, K, cfg.gamma, cfg.H, probes);
    auto stab = stability_check_general(norm, K, cfg.s, alpha, cfg.R);
    REQUIRE(cert.passed);
    REQUIRE(stab.passed);
    family.push_back({K, alpha, cert, stab});
  }

  auto curve = general_concentration_run(norm, family, cfg);
  CHECK(curve.nonincreasing);
  CHECK(curve.dominated);  // the chain bound holds pointwise at every schedule step
  CHECK(curve.chain_terms == 2);
  CHECK(curve.chain_constant == doctest::Approx(657.25).epsilon(1e-14));
  CHECK(curve.final_over_initial ==
        doctest::Approx(0.0025558652973492399).epsilon(1e-12));
  CHECK(curve.final_over_initial < 0.01);
  CHECK(curve.points.front().tail == doctest::Approx(0.17041808445873818).epsilon(1e-12));
  CHECK(curve.points.back().tail == doctest::Approx(0.00043556566810882077).epsilon(1e-12));

  // half-line quadrature oracle: the tail of the radial profile against a
  // measure with linear delta-growth lies between the c1 and c2 multiples of
  // the profile's own tail integral 1/4 - (1/(2 pi)) atan(lambda/beta) ...
  for (std::size_t k = 0; k < curve.points.size(); ++k) {
    const double beta = curve.points[k].alpha * 2.0 * kPi / (1.0 + 1e-9);
    const double profile_tail = 0.25 - std::atan(cfg.lambda / beta) / (2.0 * kPi);
    CHECK(curve.points[k].tail > 0.5 * 0.9 * profile_tail);
    CHECK(curve.points[k].tail < 2.2 * profile_tail);
  }

  // sandwich on a certified delta-radial kernel at ball scale 1/4
  auto Kb = delta_profile_kernel(norm, 1.0, 0.25, 1e-9);
  auto bcert = certify_space_ball_harnack(norm, Kb, 0.25, 2.75);
  REQUIRE(bcert.passed);
  CHECK(bcert.worst_ratio == doctest::Approx(2.7413159097298818).epsilon(1e-12));
  auto Kt = regularize_space_kernel(norm, Kb, 0.25);
  double worst_up = 0.0, worst_down = 0.0;
  for (std::size_t i = 0; i < norm.size(); ++i)
    for (std::size_t j = 0; j < norm.size(); ++j) {
      if (i == j) continue;
      worst_up = std::max(worst_up, Kb.at(i, j) / Kt.at(i, j));
      worst_down = std::max(worst_down, Kt.at(i, j) / Kb.at(i, j));
    }
  CHECK(worst_up <= 2.75);
  CHECK(worst_down <= 2.75);
}
