#include "stablekern/homspace/general_run.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <vector>

#include "stablekern/util/error.hpp"
#include "stablekern/util/parallel.hpp"

namespace stablekern::homspace {

StabilityReport stability_check_general(const FiniteHomSpace& normalized, const SpaceKernel& K,
                                        double s, double alpha, double R) {
  if (!normalized.normalized) {
    throw PreconditionError("stability_check_general: space must be the output of normalize()");
  }
  if (K.n != normalized.size() || K.values.size() != K.n * K.n) {
    throw PreconditionError("stability_check_general: kernel size does not match the space");
  }
  if (!(s > 0.0) || !(alpha > 0.0) || !(R > 0.0)) {
    throw PreconditionError("stability_check_general: needs s > 0, alpha > 0, R > 0");
  }
  const std::size_t n = normalized.size();
  StabilityReport report;
  report.s = s;
  report.alpha = alpha;
  report.R = R;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double delta = normalized.d(i, j);
      if (!(delta > R)) continue;
      ++report.pairs_checked;
      const double ratio = K.at(i, j) * std::pow(delta, 1.0 + s) / alpha;
      if (ratio > report.worst_ratio) {
        report.worst_ratio = ratio;
        report.witness_i = i;
        report.witness_j = j;
        report.witness_delta = delta;
      }
    }
  }
  report.passed = report.worst_ratio <= 1.0;
  return report;
}

GeneralConcentrationCurve general_concentration_run(const FiniteHomSpace& normalized,
                                                    const std::vector<StableFamilyMember>& family,
                                                    const GeneralRunConfig& config,
                                                    unsigned threads) {
  if (!normalized.normalized) {
    throw PreconditionError(
        "general_concentration_run: hypothesis failed: the space is not normalized; pass the "
        "output of normalize()");
  }
  const auto& nc = config.normal;
  if (!(nc.c1 > 0.0) || !(nc.c2 > nc.c1)) {
    throw PreconditionError("general_concentration_run: needs 0 < c1 < c2");
  }
  const double gamma_cap = (nc.c1 / (2.0 * nc.c2)) * (nc.c1 / (2.0 * nc.c2));
  if (!(config.gamma > 0.0) || config.gamma > gamma_cap) {
    std::ostringstream msg;
    msg << "general_concentration_run: hypothesis failed: gamma = " << config.gamma
        << " exceeds (c1/(2 c2))^2 = " << gamma_cap
        << "; shrink gamma or improve the normal constants";
    throw PreconditionError(msg.str());
  }
  if (!(config.H >= 1.0)) throw PreconditionError("general_concentration_run: needs H >= 1");
  if (!(config.s > 0.0)) throw PreconditionError("general_concentration_run: needs s > 0");
  if (!(config.lambda > 0.0) || !(config.lambda < config.R)) {
    throw PreconditionError("general_concentration_run: needs 0 < lambda < R");
  }
  if (family.empty()) {
    throw PreconditionError("general_concentration_run: empty kernel family");
  }
  const std::size_t n = normalized.size();
  for (const auto& member : family) {
    if (member.kernel.n != n || member.kernel.values.size() != n * n) {
      throw PreconditionError("general_concentration_run: kernel size does not match the space");
    }
    const auto& cert = member.harnack;
    if (!cert.passed || !(cert.gamma <= config.gamma * (1.0 + 1e-12)) ||
        !(cert.H <= config.H * (1.0 + 1e-12))) {
      throw PreconditionError(
          "general_concentration_run: hypothesis failed: kernel '" + member.kernel.name +
          "' lacks a passed annulus comparability certificate at least as strong as the declared "
          "(gamma, H); run certify_space_annulus_harnack on the normalized space first");
    }
    const auto& stab = member.stability;
    if (!stab.passed || stab.s != config.s || stab.R != config.R || stab.alpha != member.alpha) {
      throw PreconditionError(
          "general_concentration_run: hypothesis failed: kernel '" + member.kernel.name +
          "' lacks a passed stability report matching (s, alpha, R); run "
          "stability_check_general with these parameters first");
    }
  }

  GeneralConcentrationCurve curve;
  curve.lambda = config.lambda;
  curve.nu = 2.0 * nc.c2 / nc.c1;
  // Chain depth: smallest J >= 0 with R <= lambda * nu^(J+1), so the nested
  // annuli A(x, R/nu^(j+1), R/nu^j), j = 0..J, reach down past lambda.
  std::size_t J = 0;
  while (config.R > config.lambda * std::pow(curve.nu, static_cast<double>(J + 1))) ++J;
  curve.chain_terms = J + 2;  // one extra ring outside radius R anchors the chain
  curve.chain_constant = 0.0;
  for (std::size_t i = 0; i <= J + 1; ++i) {
    curve.chain_constant += std::pow(config.H, static_cast<double>(i));
  }

  const double far_scale = 1.0 + config.s;
  curve.points.reserve(family.size());
  curve.nonincreasing = true;
  curve.dominated = true;
  for (const auto& member : family) {
    GeneralRunPoint point;
    point.alpha = member.alpha;
    const double middle_scale =
        member.alpha / std::pow(config.R, 1.0 + config.s) * curve.chain_constant;
    double tail_max = 0.0;
    double chain_max = 0.0;
    double middle_max = 0.0;
    double far_max = 0.0;
    bool dominated = true;
    std::mutex merge;
    parallel_for(n, threads, [&](std::size_t begin, std::size_t end) {
      double local_tail = 0.0, local_chain = 0.0, local_middle = 0.0, local_far = 0.0;
      bool local_dominated = true;
      for (std::size_t x = begin; x < end; ++x) {
        const double* drow = normalized.dist.data() + x * n;
        const double* krow = member.kernel.values.data() + x * n;
        double tail = 0.0;
        double ring_mass = 0.0;
        double far = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
          const double delta = drow[y];
          if (delta >= config.lambda) tail += krow[y] * normalized.mass[y];
          if (delta >= config.lambda && delta < config.R) ring_mass += normalized.mass[y];
          if (delta >= config.R) far += normalized.mass[y] / std::pow(delta, far_scale);
        }
        const double middle = middle_scale * ring_mass;
        const double far_bound = member.alpha * far;
        local_tail = std::max(local_tail, tail);
        local_chain = std::max(local_chain, middle + far_bound);
        local_middle = std::max(local_middle, middle);
        local_far = std::max(local_far, far_bound);
        if (tail > middle + far_bound) local_dominated = false;
      }
      std::lock_guard<std::mutex> lock(merge);
      tail_max = std::max(tail_max, local_tail);
      chain_max = std::max(chain_max, local_chain);
      middle_max = std::max(middle_max, local_middle);
      far_max = std::max(far_max, local_far);
      dominated = dominated && local_dominated;
    });
    point.tail = tail_max;
    point.chain_bound = chain_max;
    point.middle_bound = middle_max;
    point.far_bound = far_max;
    if (!dominated) curve.dominated = false;
    if (!curve.points.empty() &&
        point.tail > curve.points.back().tail * (1.0 + 1e-12)) {
      curve.nonincreasing = false;
    }
    curve.points.push_back(point);
  }
  const double first = curve.points.front().tail;
  const double last = curve.points.back().tail;
  curve.final_over_initial = first > 0.0 ? last / first : 1.0;
  return curve;
}

std::string to_csv(const GeneralConcentrationCurve& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "alpha,tail,chain_bound,middle_bound,far_bound\n";
  for (const auto& point : curve.points) {
    out << point.alpha << ',' << point.tail << ',' << point.chain_bound << ','
        << point.middle_bound << ',' << point.far_bound << '\n';
  }
  return out.str();
}

}  // namespace stablekern::homspace
