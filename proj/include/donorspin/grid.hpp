#pragma once

#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace donorspin {

// Rectilinear 2D grid. x is the lateral coordinate (wire centered at x = 0),
// y is depth below the substrate surface. Fields are stored row-major with y
// as the outer index: value(ix, iy) = v[iy * nx + ix].
struct RectGrid {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t nx() const { return x.size(); }
  std::size_t ny() const { return y.size(); }
  std::size_t size() const { return x.size() * y.size(); }
  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx() + ix; }

  bool same_axes(const RectGrid& other) const { return x == other.x && y == other.y; }

  // Trapezoidal dual-cell width around node i of a monotone axis.
  static double node_weight(const std::vector<double>& axis, std::size_t i) {
    if (axis.size() < 2) return 1.0;
    const double lo = (i == 0) ? axis[0] : 0.5 * (axis[i - 1] + axis[i]);
    const double hi = (i + 1 == axis.size()) ? axis.back() : 0.5 * (axis[i] + axis[i + 1]);
    return hi - lo;
  }

  double cell_area(std::size_t ix, std::size_t iy) const {
    return node_weight(x, ix) * node_weight(y, iy);
  }
};

struct GridField {
  RectGrid grid;
  std::vector<double> v;

  GridField() = default;
  explicit GridField(RectGrid g) : grid(std::move(g)), v(grid.size(), 0.0) {}

  double& at(std::size_t ix, std::size_t iy) { return v[grid.index(ix, iy)]; }
  double at(std::size_t ix, std::size_t iy) const { return v[grid.index(ix, iy)]; }
};

// Index of the last axis node <= q, clamped to [0, n-2] for interpolation.
inline std::size_t axis_cell(const std::vector<double>& axis, double q) {
  if (axis.size() < 2) return 0;
  if (q <= axis.front()) return 0;
  if (q >= axis.back()) return axis.size() - 2;
  std::size_t lo = 0, hi = axis.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (axis[mid] <= q) lo = mid; else hi = mid;
  }
  return lo;
}

// Bilinear interpolation; clamps outside the grid extent.
inline double sample_bilinear(const RectGrid& grid, const std::vector<double>& v,
                              double x, double y) {
  if (grid.nx() == 0 || grid.ny() == 0) throw std::invalid_argument("empty grid");
  const std::size_t ix = axis_cell(grid.x, x);
  const std::size_t iy = axis_cell(grid.y, y);
  auto frac = [](const std::vector<double>& axis, std::size_t i, double q) {
    if (axis.size() < 2) return 0.0;
    const double d = axis[i + 1] - axis[i];
    if (d <= 0) return 0.0;
    double t = (q - axis[i]) / d;
    return t < 0 ? 0.0 : (t > 1 ? 1.0 : t);
  };
  const double tx = frac(grid.x, ix, x);
  const double ty = frac(grid.y, iy, y);
  const std::size_t nx = grid.nx();
  const double v00 = v[iy * nx + ix];
  const double v10 = (grid.nx() > 1) ? v[iy * nx + ix + 1] : v00;
  const double v01 = (grid.ny() > 1) ? v[(iy + 1) * nx + ix] : v00;
  const double v11 = (grid.nx() > 1 && grid.ny() > 1) ? v[(iy + 1) * nx + ix + 1] : v10;
  return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

// Graded 1D mesh segment from a to b. Spacing starts at ha near a and hb near
// b, growing geometrically by `growth` toward the middle, capped at hmax.
// Both endpoints are included; interior nodes are rescaled so the last step
// lands exactly on b.
std::vector<double> graded_segment(double a, double b, double ha, double hb,
                                   double growth, double hmax);

// Concatenate segments that share endpoints into one monotone axis.
std::vector<double> join_axes(const std::vector<std::vector<double>>& parts);

// Mirror a half axis [0 .. end] into a symmetric axis [-end .. end].
std::vector<double> mirror_axis(const std::vector<double>& half);

}  // namespace donorspin
