#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace stablekern::maximal {

// A real-valued function sampled on a uniform one-dimensional lattice.
//
// The samples are interpreted as cell values: `values[i]` is the constant
// value of the function on the cell [node(i) - h/2, node(i) + h/2], and the
// function vanishes outside the lattice extent.  All averaging and
// convolution operators in this module are exact for that piecewise-constant
// model, which is what makes their outputs reproducible to machine precision.
struct GridFunction {
  double x0 = 0.0;             // coordinate of the first node
  double h = 1.0;              // node spacing, > 0
  std::vector<double> values;  // one value per node

  std::size_t size() const { return values.size(); }
  double node(std::size_t i) const { return x0 + h * static_cast<double>(i); }
  double x_lo() const { return x0; }
  double x_hi() const { return x0 + h * static_cast<double>(values.empty() ? 0 : values.size() - 1); }
};

// Uniform lattice with `count` nodes spanning [x_lo, x_hi] inclusive.
// Values are initialised to zero.  Requires count >= 2 and x_hi > x_lo.
GridFunction make_grid(double x_lo, double x_hi, std::size_t count);

// Lattice L1 norm: h * sum_i |values[i]| (the integral of |f| for the cell
// model).
double l1_norm(const GridFunction& f);

// CSV round trip.  Format: header "x,value", then one "x,value" row per node
// with 17 significant digits.  Import checks that the x column is uniformly
// spaced (relative tolerance 1e-9 on the step) and strictly increasing.
std::string to_csv(const GridFunction& f);
GridFunction grid_from_csv(const std::string& text);

}  // namespace stablekern::maximal
