#include "stablekern/homspace/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "stablekern/util/error.hpp"

namespace stablekern::homspace {

namespace {

std::vector<double> euclidean_matrix(const std::vector<std::vector<double>>& coords) {
  const std::size_t n = coords.size();
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coords[i].size() != coords[j].size()) {
        throw PreconditionError("space: points have mixed coordinate dimensions");
      }
      double acc = 0.0;
      for (std::size_t k = 0; k < coords[i].size(); ++k) {
        const double t = coords[i][k] - coords[j][k];
        acc += t * t;
      }
      const double d = std::sqrt(acc);
      dist[i * n + j] = d;
      dist[j * n + i] = d;
    }
  }
  return dist;
}

// Exact mass of [a, b] under the weight x^{-1/2}: 2(sqrt(b) - sqrt(a)).
double sqrt_weight_mass(double a, double b) { return 2.0 * (std::sqrt(b) - std::sqrt(a)); }

FiniteHomSpace interval_union_space(const std::vector<std::pair<double, double>>& intervals,
                                    std::size_t points_per_interval) {
  if (points_per_interval == 0) {
    throw PreconditionError("space: points_per_interval must be positive");
  }
  FiniteHomSpace space;
  for (const auto& [lo, hi] : intervals) {
    const double h = (hi - lo) / static_cast<double>(points_per_interval);
    for (std::size_t j = 0; j < points_per_interval; ++j) {
      space.coords.push_back({lo + (static_cast<double>(j) + 0.5) * h});
      space.mass.push_back(h);
    }
  }
  space.dist = euclidean_matrix(space.coords);
  space.cell_volume = space.mass.empty() ? 0.0 : space.mass.front();
  space.non_atomic_intent = true;
  space.unbounded_intent = true;
  validate(space);
  return space;
}

}  // namespace

double FiniteHomSpace::coord1(std::size_t i) const {
  if (coords.size() != size() || coords[i].empty()) {
    throw PreconditionError("space: point has no coordinates");
  }
  return coords[i][0];
}

double FiniteHomSpace::total_mass() const {
  double acc = 0.0;
  for (double m : mass) acc += m;
  return acc;
}

double FiniteHomSpace::ball_mass(std::size_t center, double r) const {
  const std::size_t n = size();
  const double* row = dist.data() + center * n;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (row[j] < r) acc += mass[j];
  }
  return acc;
}

double FiniteHomSpace::min_positive_distance() const {
  const std::size_t n = size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      best = std::min(best, d(i, j));
    }
  }
  return best;
}

void validate(const FiniteHomSpace& space) {
  const std::size_t n = space.size();
  if (n == 0) throw PreconditionError("space: no points");
  if (space.dist.size() != n * n) {
    throw PreconditionError("space: distance matrix size does not match point count");
  }
  if (!space.coords.empty() && space.coords.size() != n) {
    throw PreconditionError("space: coordinate count does not match point count");
  }
  if (!space.ids.empty() && space.ids.size() != n) {
    throw PreconditionError("space: id count does not match point count");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(space.mass[i] > 0.0) || !std::isfinite(space.mass[i])) {
      throw PreconditionError("space: mass must be positive and finite at point " +
                              std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (space.d(i, i) != 0.0) {
      throw PreconditionError("space: distance matrix must vanish on the diagonal (point " +
                              std::to_string(i) + ")");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dij = space.d(i, j);
      if (!(dij > 0.0) || !std::isfinite(dij)) {
        throw PreconditionError("space: off-diagonal distances must be positive and finite (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
      }
      if (dij != space.d(j, i)) {
        throw PreconditionError("space: distance matrix must be symmetric (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
      }
    }
  }
}

FiniteHomSpace uniform_grid_space(double x_lo, double x_hi, std::size_t count) {
  if (count < 2 || !(x_hi > x_lo)) {
    throw PreconditionError("uniform_grid_space: needs x_hi > x_lo and at least 2 nodes");
  }
  const double h = (x_hi - x_lo) / static_cast<double>(count - 1);
  FiniteHomSpace space;
  space.coords.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    space.coords.push_back({x_lo + h * static_cast<double>(i)});
    space.mass.push_back(h);
  }
  space.dist = euclidean_matrix(space.coords);
  space.cell_volume = h;
  space.non_atomic_intent = true;
  space.unbounded_intent = true;
  validate(space);
  return space;
}

FiniteHomSpace sqrt_weight_halfline_space(double x_lo, double x_hi, std::size_t count) {
  if (count < 2 || !(x_hi > x_lo)) {
    throw PreconditionError("sqrt_weight_halfline_space: needs x_hi > x_lo and at least 2 nodes");
  }
  const double h = (x_hi - x_lo) / static_cast<double>(count - 1);
  if (!(x_lo - 0.5 * h >= 0.0)) {
    throw PreconditionError("sqrt_weight_halfline_space: first cell must stay in x >= 0");
  }
  FiniteHomSpace space;
  space.coords.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = x_lo + h * static_cast<double>(i);
    space.coords.push_back({x});
    space.mass.push_back(sqrt_weight_mass(x - 0.5 * h, x + 0.5 * h));
  }
  space.dist = euclidean_matrix(space.coords);
  space.cell_volume = h;
  space.non_atomic_intent = true;
  space.unbounded_intent = true;
  validate(space);
  return space;
}

FiniteHomSpace gapped_union_space(long k_min, long k_max, std::size_t points_per_interval) {
  if (k_max < k_min) throw PreconditionError("gapped_union_space: k_max must be >= k_min");
  std::vector<std::pair<double, double>> intervals;
  for (long k = k_min; k <= k_max; ++k) {
    const double c = 2.0 * static_cast<double>(k);
    intervals.emplace_back(c - 0.5, c + 0.5);
  }
  return interval_union_space(intervals, points_per_interval);
}

FiniteHomSpace dyadic_gap_space(int n_min, int n_max, std::size_t points_per_interval) {
  if (n_min < 1 || n_max < n_min) {
    throw PreconditionError("dyadic_gap_space: needs 1 <= n_min <= n_max");
  }
  std::vector<std::pair<double, double>> intervals;
  for (int n = n_min; n <= n_max; ++n) {
    const double c = std::ldexp(1.0, n);  // 2^n
    intervals.emplace_back(c - 1.0, c + 1.0);
  }
  return interval_union_space(intervals, points_per_interval);
}

FiniteHomSpace matrix_space(std::vector<double> dist, std::vector<double> mass) {
  FiniteHomSpace space;
  space.mass = std::move(mass);
  space.dist = std::move(dist);
  validate(space);
  return space;
}

FiniteHomSpace with_metric_power(const FiniteHomSpace& space, double power) {
  if (!(power > 0.0)) throw PreconditionError("with_metric_power: power must be positive");
  FiniteHomSpace out = space;
  for (double& v : out.dist) v = std::pow(v, power);
  out.normalized = false;
  validate(out);
  return out;
}

FiniteHomSpace space_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("space file: ") + e.what());
  }
  try {
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array() ||
        j["points"].empty()) {
      throw ConfigError("space file: needs a nonempty \"points\" array");
    }
    FiniteHomSpace space;
    const auto& pts = j["points"];
    const bool abstract_ids = pts.front().is_string();
    for (const auto& p : pts) {
      if (p.is_number()) {
        space.coords.push_back({p.get<double>()});
      } else if (p.is_array()) {
        space.coords.push_back(p.get<std::vector<double>>());
      } else if (p.is_string() && abstract_ids) {
        space.ids.push_back(p.get<std::string>());
      } else {
        throw ConfigError("space file: points must be all numbers, all arrays, or all strings");
      }
    }
    const std::size_t n = std::max(space.coords.size(), space.ids.size());
    if (space.coords.size() != n && !space.coords.empty()) {
      throw ConfigError("space file: points must be all numbers, all arrays, or all strings");
    }

    const std::string dist_mode = j.value("dist", std::string("euclidean"));
    if (dist_mode == "euclidean") {
      if (space.coords.size() != n) {
        throw ConfigError("space file: \"euclidean\" distance needs numeric points");
      }
      space.dist = euclidean_matrix(space.coords);
    } else if (dist_mode == "matrix") {
      if (!j.contains("dist_matrix") || !j["dist_matrix"].is_array() ||
          j["dist_matrix"].size() != n) {
        throw ConfigError("space file: \"matrix\" distance needs an n x n \"dist_matrix\"");
      }
      space.dist.reserve(n * n);
      for (const auto& row : j["dist_matrix"]) {
        if (!row.is_array() || row.size() != n) {
          throw ConfigError("space file: \"dist_matrix\" rows must all have length n");
        }
        for (const auto& v : row) space.dist.push_back(v.get<double>());
      }
    } else {
      throw ConfigError("space file: \"dist\" must be \"euclidean\" or \"matrix\"");
    }

    if (j.contains("cell_volume")) space.cell_volume = j["cell_volume"].get<double>();

    const auto infer_cell = [&]() -> double {
      if (space.cell_volume > 0.0) return space.cell_volume;
      if (space.coords.size() == n && n >= 2 && space.coords.front().size() == 1) {
        const double h = space.coords[1][0] - space.coords[0][0];
        bool uniform = h > 0.0;
        for (std::size_t i = 1; i + 1 < n && uniform; ++i) {
          const double step = space.coords[i + 1][0] - space.coords[i][0];
          uniform = std::abs(step - h) <= 1e-9 * std::max(1.0, std::abs(h));
        }
        if (uniform) return h;
      }
      return 0.0;
    };

    if (!j.contains("weights") || j["weights"].is_string()) {
      const std::string mode =
          j.contains("weights") ? j["weights"].get<std::string>() : std::string("uniform");
      if (mode == "uniform") {
        const double w = space.cell_volume > 0.0 ? space.cell_volume : 1.0;
        space.mass.assign(n, w);
      } else if (mode == "sqrt_inv") {
        const double h = infer_cell();
        if (!(h > 0.0)) {
          throw ConfigError(
              "space file: \"sqrt_inv\" weights need cell_volume or uniformly spaced 1-d points");
        }
        space.mass.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double x = space.coords[i][0];
          if (!(x - 0.5 * h >= 0.0)) {
            throw ConfigError("space file: \"sqrt_inv\" weights need cells inside x >= 0");
          }
          space.mass.push_back(sqrt_weight_mass(x - 0.5 * h, x + 0.5 * h));
        }
      } else {
        throw ConfigError("space file: \"weights\" must be \"uniform\", \"sqrt_inv\", or an array");
      }
    } else if (j["weights"].is_array()) {
      if (j["weights"].size() != n) {
        throw ConfigError("space file: \"weights\" array must have one entry per point");
      }
      space.mass = j["weights"].get<std::vector<double>>();
    } else {
      throw ConfigError("space file: \"weights\" must be \"uniform\", \"sqrt_inv\", or an array");
    }

    if (j.contains("flags")) {
      const auto& flags = j["flags"];
      space.non_atomic_intent = flags.value("non_atomic", false);
      space.unbounded_intent = flags.value("unbounded", false);
      space.normalized = flags.value("normalized", false);
    }

    try {
      validate(space);
    } catch (const PreconditionError& e) {
      throw ConfigError(std::string("space file: ") + e.what());
    }
    return space;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("space file: ") + e.what());
  }
}

std::string to_json(const FiniteHomSpace& space) {
  nlohmann::json j;
  const std::size_t n = space.size();
  if (!space.coords.empty()) {
    if (space.coords.front().size() == 1) {
      std::vector<double> xs(n);
      for (std::size_t i = 0; i < n; ++i) xs[i] = space.coords[i][0];
      j["points"] = xs;
    } else {
      j["points"] = space.coords;
    }
  } else {
    j["points"] = space.ids;
  }
  j["dist"] = "matrix";
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) rows[i][k] = space.d(i, k);
  }
  j["dist_matrix"] = rows;
  j["weights"] = space.mass;
  if (space.cell_volume > 0.0) j["cell_volume"] = space.cell_volume;
  j["flags"] = {{"non_atomic", space.non_atomic_intent},
                {"unbounded", space.unbounded_intent},
                {"normalized", space.normalized}};
  return j.dump(2);
}

}  // namespace stablekern::homspace
