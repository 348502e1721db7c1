#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "rpm/errors.hpp"

namespace rpm {

/// Central difference of order 1..4 at x with step h. Every stencil has an
/// error expansion in even powers of h.
template <class F>
double central_difference(F&& f, double x, int order, double h) {
  switch (order) {
    case 1:
      return (f(x + h) - f(x - h)) / (2 * h);
    case 2:
      return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
    case 3:
      return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
    case 4:
      return (f(x + 2 * h) - 4 * f(x + h) + 6 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / (h * h * h * h);
    default:
      throw InvalidArgument("central_difference: order must be in 1..4");
  }
}

/// Richardson extrapolation of a sequence of estimates computed at steps
/// h, h/2, h/4, ... whose error expands in powers h^(p), h^(2p), ...
/// `ratio_power` is 2^p (4 for central stencils, 2 for one-sided ones).
inline double richardson(std::vector<double> table, double ratio_power) {
  double factor = ratio_power;
  for (std::size_t level = 1; level < table.size(); ++level) {
    for (std::size_t k = table.size() - 1; k >= level; --k)
      table[k] = (factor * table[k] - table[k - 1]) / (factor - 1);
    factor *= ratio_power;
  }
  return table.back();
}

/// d^order f / dx^order at x: central differences at h, h/2, ... (levels
/// estimates) combined by Richardson extrapolation.
template <class F>
double richardson_derivative(F&& f, double x, int order, double h = 1e-2, int levels = 3) {
  std::vector<double> t;
  for (int k = 0; k < levels; ++k, h /= 2) t.push_back(central_difference(f, x, order, h));
  return richardson(std::move(t), 4.0);
}

/// Mixed second derivative d^2 f / dx dy, f called as f(x, y).
template <class F>
double richardson_mixed(F&& f, double x, double y, double h = 1e-2, int levels = 3) {
  std::vector<double> t;
  for (int k = 0; k < levels; ++k, h /= 2)
    t.push_back((f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h));
  return richardson(std::move(t), 4.0);
}

/// One-sided derivative of order 1..4 using only points x + s*k*h, k >= 0,
/// s = +1 (forward) or -1 (backward). Errors expand in all powers of h.
template <class F>
double one_sided_derivative(F&& f, double x, int order, int side, double h, int levels = 4) {
  static constexpr std::array<std::array<double, 5>, 4> kBinom = {
      {{-1, 1, 0, 0, 0}, {1, -2, 1, 0, 0}, {-1, 3, -3, 1, 0}, {1, -4, 6, -4, 1}}};
  if (order < 1 || order > 4) throw InvalidArgument("one_sided_derivative: order must be in 1..4");
  std::vector<double> t;
  for (int lv = 0; lv < levels; ++lv, h /= 2) {
    double acc = 0;
    for (int k = 0; k <= order; ++k) acc += kBinom[order - 1][k] * f(x + side * k * h);
    t.push_back(acc / std::pow(side * h, order));
  }
  return richardson(std::move(t), 2.0);
}

}  // namespace rpm
