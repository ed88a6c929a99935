#include "donorspin/grid.hpp"

#include <algorithm>
#include <cmath>

namespace donorspin {

// Nodes are placed by integrating a target spacing function
//   h(x) = min(ha + s (x - a), hb + s (b - x), hmax),   s = growth - 1,
// which ramps the element size away from both endpoints. Equal steps in the
// integrated node density 1/h(x) give a mesh whose local spacing tracks h(x)
// while landing exactly on both endpoints.
std::vector<double> graded_segment(double a, double b, double ha, double hb,
                                   double growth, double hmax) {
  if (!(b > a)) throw std::invalid_argument("graded_segment: requires b > a");
  if (!(ha > 0) || !(hb > 0) || !(growth > 1.0) || !(hmax > 0))
    throw std::invalid_argument("graded_segment: bad spacing parameters");

  const double len = b - a;
  const double s = growth - 1.0;
  auto h = [&](double x) {
    return std::min({ha + s * (x - a), hb + s * (b - x), hmax});
  };

  // Cumulative node density on a fine uniform sampling (trapezoid rule).
  const int ns = 4096;
  std::vector<double> cum(ns + 1, 0.0);
  const double dx = len / ns;
  double prev = 1.0 / h(a);
  for (int i = 1; i <= ns; ++i) {
    const double cur = 1.0 / h(a + i * dx);
    cum[i] = cum[i - 1] + 0.5 * (prev + cur) * dx;
    prev = cur;
  }

  const int n_cells = std::max(1, static_cast<int>(std::lround(cum[ns])));
  std::vector<double> nodes(n_cells + 1);
  nodes[0] = a;
  nodes[n_cells] = b;
  int j = 0;
  for (int k = 1; k < n_cells; ++k) {
    const double target = cum[ns] * k / n_cells;
    while (j < ns && cum[j + 1] < target) ++j;
    const double t = (target - cum[j]) / std::max(cum[j + 1] - cum[j], 1e-300);
    nodes[k] = a + (j + t) * dx;
  }
  return nodes;
}

std::vector<double> join_axes(const std::vector<std::vector<double>>& parts) {
  std::vector<double> out;
  for (const auto& p : parts) {
    for (double q : p) {
      if (out.empty() || q > out.back() + 1e-18) out.push_back(q);
    }
  }
  return out;
}

std::vector<double> mirror_axis(const std::vector<double>& half) {
  std::vector<double> out;
  out.reserve(half.size() * 2);
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    if (*it > 0) out.push_back(-*it);
  for (double q : half)
    if (q >= 0) out.push_back(q);
  return out;
}

}  // namespace donorspin
