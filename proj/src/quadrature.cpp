#include "pilotnn/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pilotnn {

namespace {

// 8-node Gauss-Legendre rule on [-1, 1] (positive half; the rule is symmetric).
constexpr double kGlNode[4] = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168};
constexpr double kGlWeight[4] = {
    0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

}  // namespace

std::vector<std::pair<double, double>> quadrature_nodes(
    double a, double b, std::vector<double> breakpoints, int n_points) {
  if (!(a < b)) throw std::invalid_argument("quadrature: empty interval");
  if (n_points < 8) throw std::invalid_argument("quadrature: need >= 8 points");

  std::vector<double> edges;
  edges.push_back(a);
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double x : breakpoints)
    if (x > a + 1e-15 && x < b - 1e-15 &&
        (edges.empty() || x - edges.back() > 1e-13))
      edges.push_back(x);
  edges.push_back(b);

  const double total = b - a;
  const int panels_budget = std::max<int>(n_points / 8, static_cast<int>(edges.size()));
  std::vector<std::pair<double, double>> nodes;
  nodes.reserve(static_cast<std::size_t>(panels_budget) * 8 + 64);

  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double lo = edges[s], hi = edges[s + 1];
    const int panels =
        std::max(1, static_cast<int>(std::lround(panels_budget * (hi - lo) / total)));
    const double h = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * h;
      const double half = 0.5 * h;
      for (int i = 0; i < 4; ++i) {
        nodes.emplace_back(mid - half * kGlNode[i], half * kGlWeight[i]);
        nodes.emplace_back(mid + half * kGlNode[i], half * kGlWeight[i]);
      }
    }
  }
  return nodes;
}

}  // namespace pilotnn
