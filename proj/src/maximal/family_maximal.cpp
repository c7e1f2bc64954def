#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "stablekern/maximal/maximal.hpp"
#include "stablekern/util/error.hpp"
#include "stablekern/util/parallel.hpp"
#include "stablekern/quadrature/adaptive.hpp"

namespace stablekern::maximal {

namespace {

std::string param_tag(double sigma, double y) {
  std::ostringstream out;
  out.precision(12);
  out << "(sigma=" << sigma << ", y=" << y << ")";
  return out.str();
}

// Integral of the kernel section over one lattice cell, with failures
// re-attributed to the parameter pair that produced the kernel.
double cell_mass(const std::function<double(double)>& section, double a, double b,
                 double sigma, double y) {
  try {
    return quadrature::integrate(section, a, b, 1e-13, 1e-10).value;
  } catch (const Error& e) {
    throw Error(std::string(e.what()) + " while integrating kernel cell " +
                param_tag(sigma, y));
  }
}

}  // namespace

ParamGrid tensor_param_grid(double sigma_lo, double sigma_hi,
                            double y_lo, double y_hi,
                            std::size_t per_axis) {
  if (per_axis < 1) {
    throw PreconditionError("tensor_param_grid: per_axis must be at least 1");
  }
  if (!(sigma_lo > 0.0) || !(sigma_hi >= sigma_lo)) {
    throw PreconditionError("tensor_param_grid: sigma bounds must be positive and ordered");
  }
  if (!(y_lo > 0.0) || !(y_hi >= y_lo)) {
    throw PreconditionError("tensor_param_grid: y bounds must be positive and ordered");
  }
  const std::size_t m = per_axis;
  std::vector<double> sigmas(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = m == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(m - 1);
    sigmas[i] = sigma_lo * std::exp(t * std::log(sigma_hi / sigma_lo));
    ys[i] = y_lo * std::exp(t * std::log(y_hi / y_lo));
  }
  ParamGrid grid;
  grid.pairs.reserve(m * m);
  for (double s : sigmas) {
    for (double y : ys) grid.pairs.emplace_back(s, y);
  }
  return grid;
}

GridFunction family_maximal(const ParamGrid& params, const KernelCtor& make,
                            const GridFunction& f, unsigned threads) {
  const std::size_t n = f.size();
  if (n == 0) {
    throw PreconditionError("family_maximal: empty grid");
  }
  if (!(f.h > 0.0)) {
    throw PreconditionError("family_maximal: node spacing must be positive");
  }
  if (params.pairs.empty()) {
    throw PreconditionError("family_maximal: empty parameter grid");
  }

  GridFunction out = f;
  std::fill(out.values.begin(), out.values.end(), 0.0);
  const double h = f.h;

  for (const auto& [sigma, y] : params.pairs) {
    kernels::PointKernel kernel;
    try {
      kernel = make(sigma, y);
    } catch (const std::exception& e) {
      throw Error(std::string("family_maximal: kernel construction failed ") +
                  param_tag(sigma, y) + ": " + e.what());
    }
    if (kernel.dim != 1) {
      throw PreconditionError("family_maximal: kernels must be one-dimensional, got dim=" +
                              std::to_string(kernel.dim) + " " + param_tag(sigma, y));
    }

    if (kernel.translation_invariant) {
      // Convolution against the cell model: (K*f)(x_j) = sum_i f_i m_{j-i},
      // m_d the kernel mass of the offset-d cell.  One quadrature per offset.
      std::vector<double> mass(2 * n - 1);
      const auto section = [&kernel](double u) { return kernel(u, 0.0); };
      for (std::size_t idx = 0; idx < mass.size(); ++idx) {
        const double d = static_cast<double>(idx) - static_cast<double>(n - 1);
        mass[idx] = cell_mass(section, (d - 0.5) * h, (d + 0.5) * h, sigma, y);
      }
      parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
          double conv = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            conv += f.values[i] * mass[j + (n - 1) - i];
          }
          out.values[j] = std::max(out.values[j], std::abs(conv));
        }
      });
    } else {
      // Genuine two-point kernel: integrate K(x_j, .) over every cell.
      parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t j = begin; j < end; ++j) {
          const double xj = f.node(j);
          const auto section = [&kernel, xj](double zz) { return kernel(xj, zz); };
          double conv = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            if (f.values[i] == 0.0) continue;
            const double zi = f.node(i);
            conv += f.values[i] * cell_mass(section, zi - 0.5 * h, zi + 0.5 * h, sigma, y);
          }
          out.values[j] = std::max(out.values[j], std::abs(conv));
        }
      });
    }
  }
  return out;
}

double domination_constant(int n, double gamma, const kernels::SigmaOrder& sigma) {
  const double w = kernels::unit_sphere_area(n);  // validates the dimension
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    throw PreconditionError("domination_constant: gamma must lie in (0, 1), got " +
                            std::to_string(gamma));
  }
  const double ratio = (1.0 + gamma) / (1.0 - gamma);
  return w * w / std::pow(gamma, n) * std::pow(ratio, 2.0 * n + sigma.value);
}

WeakTypeCurve weak_type_curve(const GridFunction& Tf, const GridFunction& f,
                              std::size_t levels) {
  if (Tf.size() != f.size() || Tf.size() == 0) {
    throw PreconditionError("weak_type_curve: grids must be nonempty and equal-sized");
  }
  const double scale = std::abs(f.h) + std::abs(f.x0) + 1.0;
  if (std::abs(Tf.h - f.h) > 1e-12 * scale || std::abs(Tf.x0 - f.x0) > 1e-12 * scale) {
    throw PreconditionError("weak_type_curve: Tf and f must live on the same lattice");
  }
  if (levels < 2) {
    throw PreconditionError("weak_type_curve: need at least two threshold levels");
  }

  double lo = 0.0, hi = 0.0;
  for (double v : Tf.values) {
    const double a = std::abs(v);
    if (a > 0.0 && (lo == 0.0 || a < lo)) lo = a;
    hi = std::max(hi, a);
  }
  if (hi == 0.0) {
    throw PreconditionError("weak_type_curve: Tf vanishes identically");
  }
  if (!(lo < hi)) lo = hi * 1e-3;  // flat Tf: spread the thresholds below the plateau

  WeakTypeCurve curve;
  curve.f_l1 = l1_norm(f);
  if (curve.f_l1 == 0.0) {
    throw PreconditionError("weak_type_curve: f vanishes identically");
  }
  curve.lambdas.resize(levels);
  curve.values.resize(levels);
  const double log_lo = std::log(lo), log_hi = std::log(hi);
  for (std::size_t k = 0; k < levels; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(levels - 1);
    const double lambda = std::exp(log_lo + t * (log_hi - log_lo));
    std::size_t count = 0;
    for (double v : Tf.values) {
      if (std::abs(v) > lambda) ++count;
    }
    curve.lambdas[k] = lambda;
    curve.values[k] = lambda * Tf.h * static_cast<double>(count);
  }
  return curve;
}

std::string to_csv(const WeakTypeCurve& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "lambda,lambda_times_measure\n";
  for (std::size_t k = 0; k < curve.lambdas.size(); ++k) {
    out << curve.lambdas[k] << ',' << curve.values[k] << '\n';
  }
  return out.str();
}

}  // namespace stablekern::maximal
