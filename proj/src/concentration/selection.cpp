#include <cmath>
#include <sstream>

#include "stablekern/concentration/concentration.hpp"
#include "stablekern/util/parallel.hpp"

#include "json.hpp"

namespace stablekern::concentration {

namespace {

void check_decreasing(const std::vector<double>& grid, const char* what) {
  if (grid.size() < 2)
    throw PreconditionError(std::string(what) + ": need at least two points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0))
      throw PreconditionError(std::string(what) + ": points must be positive");
    if (i > 0 && !(grid[i] < grid[i - 1]))
      throw PreconditionError(std::string(what) + ": points must decrease toward 0");
  }
}

}  // namespace

SelectionDiagnostic selection_admissible(const SelectionFunction& selection,
                                         SelectionCriterion criterion,
                                         const std::vector<double>& y_grid,
                                         double threshold) {
  check_decreasing(y_grid, "selection_admissible: y_grid");
  if (!(threshold > 0))
    throw PreconditionError("selection_admissible: threshold must be positive");

  SelectionDiagnostic d;
  d.threshold = threshold;
  d.values.reserve(y_grid.size());
  for (double y : y_grid) {
    const double s = selection.eval(y);
    if (!(s > 0.0 && s < 2.0)) {
      d.range_ok = false;
      std::ostringstream msg;
      msg << "selection '" << selection.label << "' left (0, 2) at y = " << y
          << " (value " << s << ")";
      d.note = msg.str();
      return d;
    }
    const double logy = std::log(y);
    d.values.push_back(criterion == SelectionCriterion::poisson
                           ? std::exp(s * logy)
                           : std::exp((s + 0.5) * logy) / s);
  }
  d.terminal_value = d.values.back();

  // Strict decrease across the final decade of the grid.
  const double cutoff = 10.0 * y_grid.back();
  std::size_t first = y_grid.size() - 1;
  while (first > 0 && y_grid[first - 1] <= cutoff) --first;
  d.decreasing_tail = first + 1 < y_grid.size();
  for (std::size_t i = first + 1; i < y_grid.size(); ++i)
    if (!(d.values[i] < d.values[i - 1])) {
      d.decreasing_tail = false;
      break;
    }

  d.admissible = d.range_ok && d.decreasing_tail && d.terminal_value < threshold;
  if (d.note.empty()) {
    std::ostringstream msg;
    msg << "terminal value " << d.terminal_value << (d.admissible ? " < " : " vs ")
        << "threshold " << threshold << "; final decade "
        << (d.decreasing_tail ? "strictly decreasing" : "not strictly decreasing");
    d.note = msg.str();
  }
  return d;
}

ConcentrationCurve concentration_curve(const KernelFamily& family, double lambda,
                                       const std::vector<double>& schedule,
                                       const std::vector<double>& x_probe,
                                       unsigned threads) {
  check_decreasing(schedule, "concentration_curve: schedule");
  if (!(lambda > 0))
    throw PreconditionError("concentration_curve: lambda must be positive");

  ConcentrationCurve curve;
  curve.params = schedule;
  curve.lambda = lambda;
  curve.x_probe = x_probe.empty() ? std::vector<double>{0.0} : x_probe;
  curve.label = family.label;
  curve.tail_masses.assign(schedule.size(), 0.0);

  parallel_for(schedule.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const kernels::PointKernel K = family.make(schedule[i]);
      double worst = 0.0;
      if (K.translation_invariant) {
        worst = tail_mass(K, curve.x_probe.front(), lambda);
      } else {
        for (double x : curve.x_probe)
          worst = std::max(worst, tail_mass(K, x, lambda));
      }
      curve.tail_masses[i] = worst;
    }
  });
  return curve;
}

std::string to_csv(const ConcentrationCurve& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "param,lambda,max_tail_mass\n";
  for (std::size_t i = 0; i < curve.params.size(); ++i)
    out << curve.params[i] << ',' << curve.lambda << ',' << curve.tail_masses[i]
        << '\n';
  return out.str();
}

std::string to_json(const ConcentrationCurve& curve) {
  nlohmann::json j;
  j["label"] = curve.label;
  j["lambda"] = curve.lambda;
  j["x_probe"] = curve.x_probe;
  j["params"] = curve.params;
  j["max_tail_mass"] = curve.tail_masses;
  return j.dump(2);
}

}  // namespace stablekern::concentration
