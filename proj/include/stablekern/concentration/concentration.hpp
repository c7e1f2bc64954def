#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stablekern/kernels/point_kernel.hpp"

namespace stablekern::concentration {

// Stability-order selection: y > 0 maps to an order in (0, 2).  The label is
// carried into diagnostics and serialized artifacts.
struct SelectionFunction {
  std::function<double(double)> eval;
  std::string label;
};

// Which vanishing functional the selection has to drive to zero:
//   poisson: y^{S(y)}              (exponential form of S(y) log y -> -inf)
//   levy:    y^{S(y) + 1/2} / S(y)
enum class SelectionCriterion { poisson, levy };

// Grid verdict for a selection.  The module never claims a limit: admissible
// means the functional stayed in range, ended below the threshold, and
// decreased strictly across the final decade of the grid.
struct SelectionDiagnostic {
  bool admissible = false;
  bool range_ok = true;         // eval(y) stayed inside (0, 2) at every probe
  bool decreasing_tail = false;  // strictly decreasing over the final decade
  double terminal_value = 0.0;   // functional at the last grid point
  double threshold = 0.0;
  std::vector<double> values;    // functional along the grid, aligned with it
  std::string note;
};

SelectionDiagnostic selection_admissible(const SelectionFunction& selection,
                                         SelectionCriterion criterion,
                                         const std::vector<double>& y_grid,
                                         double threshold = 0.05);

// Mass of K(x, .) outside the closed ball of radius lambda about x, in [0, 1].
// Kernels carrying a radial backing use the family's exact tail formulas;
// synthetic kernels (one-dimensional only) are integrated over the two
// half-lines with a compactifying substitution.
double tail_mass(const kernels::PointKernel& K, double x, double lambda);

// Explicit tail bounds from the concentration proofs.

// 2^{(n + s)/2} (lambda / y)^{-s}: the penultimate display of the
// Cauchy-family concentration proof.  Valid for every lambda, y > 0.
double theorem21_tail_bound(int n, double lambda, double y, double sigma_y);

// (4 pi^2 / lambda^2) sqrt(y) y^{s} / s for the one-dimensional stable
// family.  The derivation takes lambda < 1; larger lambda is clamped to 1,
// recorded in *diagnostic when supplied.
double theorem23_tail_bound(double lambda, double y, double sigma_y,
                            std::string* diagnostic = nullptr);

// 2 w_n a / s + 2 w_n a ((1+g)/(1-g))^n (1+g)^s / ((1+g)^s - (1-g)^s)
// lambda^{-s}: the tail bound for a kernel of stability coefficient a in the
// Harnack class at aperture g.  Linear in a.
double theorem34_tail_bound(int n, const kernels::SigmaOrder& sigma, double gamma,
                            double alpha, double lambda);

// One-parameter family of kernels, the parameter decreasing toward 0.
struct KernelFamily {
  std::function<kernels::PointKernel(double)> make;
  std::string label;
};

// Tail masses along a decreasing parameter schedule at fixed lambda, reduced
// to the max over the probe points (the uniform-in-x reading).
struct ConcentrationCurve {
  std::vector<double> params;
  std::vector<double> tail_masses;  // aligned with params
  double lambda = 1.0;
  std::vector<double> x_probe;
  std::string label;
};

// Evaluates the family tail mass per parameter.  Translation-invariant
// kernels are probed once; others take the max across x_probe.  Parameters
// are processed in parallel across `threads`.
ConcentrationCurve concentration_curve(const KernelFamily& family, double lambda,
                                       const std::vector<double>& schedule,
                                       const std::vector<double>& x_probe,
                                       unsigned threads = 1);

// Serialization: CSV columns (param, lambda, max_tail_mass); JSON carries the
// label and probe metadata alongside the columns.
std::string to_csv(const ConcentrationCurve& curve);
std::string to_json(const ConcentrationCurve& curve);

}  // namespace stablekern::concentration
