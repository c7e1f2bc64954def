#include "stablekern/homspace/space_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <vector>

#include "stablekern/kernels/poisson.hpp"
#include "stablekern/util/error.hpp"
#include "stablekern/util/parallel.hpp"

namespace stablekern::homspace {

namespace {

// Sorted-by-distance view of one center's row: point order, distances, and
// prefix masses, shared by the maximal and regularization scans.
struct CenterView {
  std::vector<std::size_t> order;
  std::vector<double> dist;    // sorted
  std::vector<double> prefix;  // cumulative masses in sorted order
};

CenterView center_view(const FiniteHomSpace& space, std::size_t c) {
  const std::size_t n = space.size();
  CenterView view;
  view.order.resize(n);
  std::iota(view.order.begin(), view.order.end(), std::size_t{0});
  const double* row = space.dist.data() + c * n;
  std::sort(view.order.begin(), view.order.end(),
            [row](std::size_t a, std::size_t b) { return row[a] < row[b]; });
  view.dist.resize(n);
  view.prefix.resize(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    view.dist[k] = row[view.order[k]];
    acc += space.mass[view.order[k]];
    view.prefix[k] = acc;
  }
  return view;
}

void require_same_size(const FiniteHomSpace& space, const SpaceKernel& K, const char* who) {
  if (K.n != space.size() || K.values.size() != K.n * K.n) {
    throw PreconditionError(std::string(who) + ": kernel size does not match the space");
  }
}

}  // namespace

SpaceKernel kernel_from_callable(const FiniteHomSpace& space, const std::string& name,
                                 const std::function<double(std::size_t, std::size_t)>& fn,
                                 double markov_tol, bool absorb_truncation) {
  validate(space);
  if (!(markov_tol >= 0.0)) {
    throw PreconditionError("kernel_from_callable: markov_tol must be nonnegative");
  }
  const std::size_t n = space.size();
  SpaceKernel K;
  K.name = name;
  K.n = n;
  K.markov_tol = markov_tol;
  K.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = fn(i, j);
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw PreconditionError("kernel_from_callable: kernel values must be nonnegative and "
                                "finite (" + name + ")");
      }
      K.set(i, j, v);
    }
  }
  if (absorb_truncation) {
    // Raise each diagonal entry so the row carries unit mass: the correction
    // is the lazy-walk share of the mass the finite window cannot see.  Only
    // diagonal entries change, so symmetry is preserved and every row lands
    // on exactly 1.
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += K.at(i, j) * space.mass[j];
      const double correction = (1.0 - row) / space.mass[i];
      if (correction < 0.0) {
        throw PreconditionError("kernel_from_callable: row mass already exceeds 1, cannot absorb "
                                "truncation at the diagonal (" + name + ")");
      }
      K.values[i * n + i] += correction;
    }
  }
  return K;
}

SpaceKernel kernel_from_point_kernel(const FiniteHomSpace& space, const kernels::PointKernel& K,
                                     bool absorb_truncation) {
  if (K.dim != 1) {
    throw PreconditionError("kernel_from_point_kernel: only 1-d kernels can be sampled on a "
                            "coordinate space");
  }
  return kernel_from_callable(
      space, K.name,
      [&space, &K](std::size_t i, std::size_t j) { return K(space.coord1(i), space.coord1(j)); },
      K.markov_tol, absorb_truncation);
}

SpaceKernel poisson_cell_kernel(const FiniteHomSpace& space, double sigma, double y,
                                double markov_tol, bool absorb_truncation) {
  validate(space);
  if (!(space.cell_volume > 0.0)) {
    throw PreconditionError("poisson_cell_kernel: space must carry its sampling cell width");
  }
  const double h = space.cell_volume;
  std::string name = "poisson_cell(sigma=" + std::to_string(sigma) + ", y=" + std::to_string(y) +
                     ")";
  return kernel_from_callable(
      space, name,
      [&space, sigma, y, h](std::size_t i, std::size_t j) {
        const double offset = std::abs(space.coord1(i) - space.coord1(j));
        return kernels::poisson_segment_mass_1d(sigma, y, offset - 0.5 * h, offset + 0.5 * h) / h;
      },
      markov_tol, absorb_truncation);
}

SpaceKernel delta_profile_kernel(const FiniteHomSpace& normalized, double s, double beta,
                                 double markov_tol) {
  if (!normalized.normalized) {
    throw PreconditionError("delta_profile_kernel: space must be the output of normalize()");
  }
  if (!(s > 0.0) || !(beta > 0.0)) {
    throw PreconditionError("delta_profile_kernel: needs s > 0 and beta > 0");
  }
  const double scale = std::pow(beta, s) / (2.0 * kernels::poisson_normalizer(1, s));
  std::string name = "delta_profile(s=" + std::to_string(s) + ", beta=" + std::to_string(beta) +
                     ")";
  return kernel_from_callable(
      normalized, name,
      [&normalized, s, beta, scale](std::size_t i, std::size_t j) {
        if (i == j) return 0.0;  // the diagonal takes the lazy-walk remainder below
        const double t = normalized.d(i, j);
        return scale * std::pow(beta * beta + t * t, -0.5 * (1.0 + s));
      },
      markov_tol, /*absorb_truncation=*/true);
}

double markov_defect(const FiniteHomSpace& space, const SpaceKernel& K) {
  require_same_size(space, K, "markov_defect");
  const std::size_t n = space.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += K.at(i, j) * space.mass[j];
    worst = std::max(worst, std::abs(row - 1.0));
  }
  return worst;
}

double diagonal_atom_bound(const FiniteHomSpace& space, const SpaceKernel& K) {
  require_same_size(space, K, "diagonal_atom_bound");
  double worst = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    worst = std::max(worst, K.at(i, i) * space.mass[i]);
  }
  return worst;
}

SpaceHarnackCertificate certify_space_ball_harnack(const FiniteHomSpace& space,
                                                   const SpaceKernel& K, double gamma, double H,
                                                   unsigned threads) {
  require_same_size(space, K, "certify_space_ball_harnack");
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw PreconditionError("certify_space_ball_harnack: needs 0 < gamma < 1");
  }
  if (!(H >= 1.0)) throw PreconditionError("certify_space_ball_harnack: needs H >= 1");
  const std::size_t n = space.size();
  SpaceHarnackCertificate cert;
  cert.gamma = gamma;
  cert.H = H;
  std::mutex merge;
  long regions = 0;
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    double local_worst = 1.0;
    std::size_t local_x = 0;
    RadiusProbe local_witness;
    long local_regions = 0;
    for (std::size_t x = begin; x < end; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        const double r = gamma * space.d(x, y);
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        const double* drow = space.dist.data() + y * n;
        const double* krow = K.values.data() + x * n;
        for (std::size_t e = 0; e < n; ++e) {
          if (drow[e] < r) {
            lo = std::min(lo, krow[e]);
            hi = std::max(hi, krow[e]);
          }
        }
        ++local_regions;  // the region holds y itself, so it is never empty
        const double ratio = hi == 0.0 ? 1.0 : hi / lo;  // 0/0: constant zero region
        if (ratio > local_worst) {
          local_worst = ratio;
          local_x = x;
          local_witness = {y, r};
        }
      }
    }
    std::lock_guard<std::mutex> lock(merge);
    regions += local_regions;
    if (local_worst > cert.worst_ratio) {
      cert.worst_ratio = local_worst;
      cert.witness_x = local_x;
      cert.witness = local_witness;
    }
  });
  cert.regions = regions;
  cert.skipped = 0;
  cert.passed = cert.worst_ratio <= H;
  cert.note = "ball regions B(y, gamma d(x,y)) over all ordered pairs";
  return cert;
}

SpaceHarnackCertificate certify_space_annulus_harnack(const FiniteHomSpace& space,
                                                      const SpaceKernel& K, double gamma, double H,
                                                      const std::vector<RadiusProbe>& probes) {
  require_same_size(space, K, "certify_space_annulus_harnack");
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw PreconditionError("certify_space_annulus_harnack: needs 0 < gamma < 1");
  }
  if (!(H >= 1.0)) throw PreconditionError("certify_space_annulus_harnack: needs H >= 1");
  if (probes.empty()) {
    throw PreconditionError("certify_space_annulus_harnack: empty probe schedule");
  }
  const std::size_t n = space.size();
  SpaceHarnackCertificate cert;
  cert.gamma = gamma;
  cert.H = H;
  for (const auto& p : probes) {
    if (p.center >= n || !(p.r > 0.0)) {
      throw PreconditionError("certify_space_annulus_harnack: probe needs a valid center and "
                              "r > 0");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool hit = false;
    const double* drow = space.dist.data() + p.center * n;
    const double* krow = K.values.data() + p.center * n;
    for (std::size_t e = 0; e < n; ++e) {
      if (drow[e] >= gamma * p.r && drow[e] < p.r) {
        lo = std::min(lo, krow[e]);
        hi = std::max(hi, krow[e]);
        hit = true;
      }
    }
    if (!hit) {
      ++cert.skipped;
      continue;
    }
    ++cert.regions;
    const double ratio = hi == 0.0 ? 1.0 : hi / lo;
    if (ratio > cert.worst_ratio) {
      cert.worst_ratio = ratio;
      cert.witness_x = p.center;
      cert.witness = p;
    }
  }
  cert.passed = cert.worst_ratio <= H;
  cert.note = "annulus regions A(x, gamma r, r) over the probe schedule";
  return cert;
}

SpaceKernel regularize_space_kernel(const FiniteHomSpace& space, const SpaceKernel& K,
                                    double gamma) {
  require_same_size(space, K, "regularize_space_kernel");
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw PreconditionError("regularize_space_kernel: needs 0 < gamma < 1");
  }
  const std::size_t n = space.size();
  SpaceKernel out;
  out.name = K.name + " (ball-averaged)";
  out.n = n;
  out.markov_tol = K.markov_tol;
  out.values.assign(n * n, 0.0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) {
        out.values[x * n + y] = K.at(x, x);
        continue;
      }
      const double r = gamma * space.d(x, y);
      double acc = 0.0;
      double vol = 0.0;
      const double* drow = space.dist.data() + y * n;
      const double* krow = K.values.data() + x * n;
      for (std::size_t e = 0; e < n; ++e) {
        if (drow[e] < r) {
          acc += krow[e] * space.mass[e];
          vol += space.mass[e];
        }
      }
      out.values[x * n + y] = acc / vol;  // the ball holds y, so vol > 0
    }
  }
  return out;
}

std::vector<double> space_hl_maximal(const FiniteHomSpace& space, const std::vector<double>& f,
                                     unsigned threads) {
  validate(space);
  const std::size_t n = space.size();
  if (f.size() != n) {
    throw PreconditionError("space_hl_maximal: function size does not match the space");
  }
  // Per center: averages of |f| over the nested prefix balls, cut only at
  // the end of each tie group (an interior cut would split a ball), then a
  // suffix maximum so each point can read off the best ball around that
  // center containing it.
  std::vector<std::vector<double>> center_dist(n);
  std::vector<std::vector<double>> suffix_best(n);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      CenterView view = center_view(space, c);
      std::vector<double> avg(n, 0.0);
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        acc += std::abs(f[view.order[k]]) * space.mass[view.order[k]];
        if (k == 0) {
          // The smallest ball is the center alone; keep its value exact.
          avg[k] = std::abs(f[view.order[0]]);
        } else {
          avg[k] = acc / view.prefix[k];
        }
        const bool group_end = (k + 1 == n) || (view.dist[k + 1] > view.dist[k]);
        if (!group_end) avg[k] = 0.0;  // not a ball; never the suffix winner on its own
      }
      suffix_best[c].resize(n);
      double best = 0.0;
      for (std::size_t k = n; k-- > 0;) {
        best = std::max(best, avg[k]);
        suffix_best[c][k] = best;
      }
      center_dist[c] = std::move(view.dist);
    }
  });
  std::vector<double> out(n, 0.0);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) {
      double best = 0.0;
      for (std::size_t c = 0; c < n; ++c) {
        const double need = space.d(c, x);
        const auto& ds = center_dist[c];
        const std::size_t k =
            static_cast<std::size_t>(std::lower_bound(ds.begin(), ds.end(), need) - ds.begin());
        best = std::max(best, suffix_best[c][k]);
      }
      out[x] = best;
    }
  });
  return out;
}

MaximalCheckReport space_maximal_check(const FiniteHomSpace& space,
                                       const std::vector<CertifiedKernel>& family, double gamma,
                                       double H, const GeometryConstants& geometry,
                                       const std::vector<double>& f, unsigned threads) {
  validate(space);
  const std::size_t n = space.size();
  if (family.empty()) throw PreconditionError("space_maximal_check: empty kernel family");
  if (f.size() != n) {
    throw PreconditionError("space_maximal_check: function size does not match the space");
  }
  if (!(H >= 1.0)) throw PreconditionError("space_maximal_check: needs H >= 1");
  for (const auto& member : family) {
    require_same_size(space, member.kernel, "space_maximal_check");
    const auto& cert = member.certificate;
    if (!cert.passed || !(cert.gamma <= gamma * (1.0 + 1e-12)) || !(cert.H <= H * (1.0 + 1e-12))) {
      throw PreconditionError(
          "space_maximal_check: kernel '" + member.kernel.name +
          "' lacks a passed comparability certificate at least as strong as the declared "
          "(gamma, H); run certify_space_ball_harnack or certify_space_annulus_harnack on this "
          "space first");
    }
  }
  MaximalCheckReport report;
  // The comparability sandwich between each kernel and its ball average
  // costs a factor H^2 on top of the geometric constant.
  report.C = H * H * general_maximal_constant(geometry.tau, geometry.A, gamma);
  report.family_maximal.assign(n, 0.0);
  parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t x = begin; x < end; ++x) {
      double best = 0.0;
      for (const auto& member : family) {
        const double* krow = member.kernel.values.data() + x * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += krow[j] * f[j] * space.mass[j];
        best = std::max(best, std::abs(acc));
      }
      report.family_maximal[x] = best;
    }
  });
  report.hl_maximal = space_hl_maximal(space, f, threads);
  report.passed = true;
  report.worst_ratio = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    if (report.family_maximal[x] > report.C * report.hl_maximal[x]) report.passed = false;
    if (report.hl_maximal[x] > 0.0) {
      const double ratio = report.family_maximal[x] / report.hl_maximal[x];
      if (ratio > report.worst_ratio) {
        report.worst_ratio = ratio;
        report.witness = x;
      }
    }
  }
  report.atom_max = 0.0;
  double atom_tol = 0.0;
  for (const auto& member : family) {
    report.atom_max = std::max(report.atom_max, diagonal_atom_bound(space, member.kernel));
    atom_tol = std::max(atom_tol, member.kernel.markov_tol);
  }
  report.atom_passed = report.atom_max <= 1.0 + atom_tol;
  return report;
}

}  // namespace stablekern::homspace
