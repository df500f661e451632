#pragma once

#include <complex>
#include <vector>

namespace pilotnn {

// Composite Gauss-Legendre quadrature on [a, b]. The interval is split at the
// supplied interior breakpoints (integrand kinks or jumps must land there for
// the panel rule to keep its accuracy), and the requested node budget is
// distributed over the pieces proportionally to their length, with 8-node
// panels inside each piece.
//
// Breakpoints outside (a, b) are ignored; duplicates are merged.
std::vector<std::pair<double, double>> quadrature_nodes(
    double a, double b, std::vector<double> breakpoints, int n_points);

template <typename F>
auto integrate(F&& f, double a, double b, std::vector<double> breakpoints,
               int n_points) {
  using value_type = decltype(f(a));
  value_type acc{};
  for (const auto& [x, w] : quadrature_nodes(a, b, std::move(breakpoints), n_points))
    acc += w * f(x);
  return acc;
}

}  // namespace pilotnn
