#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace donorspin {

// Donor density against depth, piecewise linear (1/m^3 vs m). Zero outside
// the tabulated range.
struct DonorProfile {
  std::vector<double> depth;
  std::vector<double> density;

  double at(double y) const {
    if (depth.empty() || y < depth.front() || y > depth.back()) return 0.0;
    for (std::size_t i = 1; i < depth.size(); ++i) {
      if (y <= depth[i]) {
        const double t = (y - depth[i - 1]) / (depth[i] - depth[i - 1]);
        return density[i - 1] + t * (density[i] - density[i - 1]);
      }
    }
    return 0.0;
  }

  // Implantation profile stand-in: Gaussian at peak_depth with width sigma,
  // tabulated over +-4 sigma (clipped at the surface).
  static DonorProfile gaussian(double peak_depth = 75e-9, double sigma = 25e-9,
                               double peak_density = 4e22) {
    if (sigma <= 0 || peak_density < 0) throw std::invalid_argument("bad donor profile");
    DonorProfile p;
    const double lo = std::max(0.0, peak_depth - 4 * sigma);
    const double hi = peak_depth + 4 * sigma;
    const int n = 121;
    for (int i = 0; i < n; ++i) {
      const double y = lo + (hi - lo) * i / (n - 1);
      const double u = (y - peak_depth) / sigma;
      p.depth.push_back(y);
      p.density.push_back(peak_density * std::exp(-0.5 * u * u));
    }
    return p;
  }
};

}  // namespace donorspin
