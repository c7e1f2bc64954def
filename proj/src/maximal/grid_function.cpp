#include "stablekern/maximal/grid_function.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "stablekern/util/error.hpp"

namespace stablekern::maximal {

GridFunction make_grid(double x_lo, double x_hi, std::size_t count) {
  if (count < 2) {
    throw PreconditionError("make_grid: need at least two nodes");
  }
  if (!(x_hi > x_lo)) {
    throw PreconditionError("make_grid: x_hi must exceed x_lo");
  }
  GridFunction g;
  g.x0 = x_lo;
  g.h = (x_hi - x_lo) / static_cast<double>(count - 1);
  g.values.assign(count, 0.0);
  return g;
}

double l1_norm(const GridFunction& f) {
  double sum = 0.0;
  for (double v : f.values) sum += std::abs(v);
  return sum * f.h;
}

std::string to_csv(const GridFunction& f) {
  std::ostringstream out;
  out.precision(17);
  out << "x,value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out << f.node(i) << ',' << f.values[i] << '\n';
  }
  return out.str();
}

GridFunction grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> xs;
  std::vector<double> vals;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    if (first) {
      first = false;
      if (line.rfind("x,", 0) == 0) continue;  // header row
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw PreconditionError("grid_from_csv: row without a comma: " + line);
    }
    char* end = nullptr;
    const std::string xs_text = line.substr(0, comma);
    const std::string vs_text = line.substr(comma + 1);
    const double x = std::strtod(xs_text.c_str(), &end);
    if (end == xs_text.c_str()) {
      throw PreconditionError("grid_from_csv: bad x field: " + xs_text);
    }
    const double v = std::strtod(vs_text.c_str(), &end);
    if (end == vs_text.c_str()) {
      throw PreconditionError("grid_from_csv: bad value field: " + vs_text);
    }
    xs.push_back(x);
    vals.push_back(v);
  }
  if (xs.size() < 2) {
    throw PreconditionError("grid_from_csv: need at least two rows");
  }
  const double h = xs[1] - xs[0];
  if (!(h > 0.0)) {
    throw PreconditionError("grid_from_csv: x column must be strictly increasing");
  }
  const double scale = std::abs(xs.back() - xs.front());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double step = xs[i] - xs[i - 1];
    if (std::abs(step - h) > 1e-9 * (std::abs(h) + scale)) {
      throw PreconditionError("grid_from_csv: x column is not uniformly spaced");
    }
  }
  GridFunction g;
  g.x0 = xs.front();
  g.h = h;
  g.values = std::move(vals);
  return g;
}

}  // namespace stablekern::maximal
