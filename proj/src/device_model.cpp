#include "donorspin/device_model.hpp"

#include <cmath>
#include <stdexcept>

#include "donorspin/constants.hpp"
#include "donorspin/parallel.hpp"

namespace donorspin {

double ResonatorParams::vacuum_current() const {
  return omega0 * std::sqrt(kHbar / (2 * z0));
}

void ResonatorParams::validate() const {
  if (!(omega0 > 0) || !(z0 > 0) || !(kappa_i > 0) || !(kappa_c > 0))
    throw std::invalid_argument("resonator parameters must be positive");
}

void PulseParams::validate() const {
  if (!(beta > 0) || !(t_p > 0) || !(t_rep > 0) || !(bandwidth > 0))
    throw std::invalid_argument("pulse parameters must be positive");
  if (t_rep < t_p) throw std::invalid_argument("t_rep must be >= t_p");
}

CurrentDistribution current_distribution(double width, double thickness, double lambda_london,
                                         CurrentModel model, int samples) {
  if (!(width > 0) || !(thickness > 0) || !(lambda_london > 0) || samples < 8)
    throw std::invalid_argument("current_distribution: bad arguments");
  CurrentDistribution dist;
  dist.x.resize(samples);
  dist.j.resize(samples);
  const double a = 0.5 * width;
  const double dx = width / samples;
  for (int i = 0; i < samples; ++i) dist.x[i] = -a + (i + 0.5) * dx;

  if (model == CurrentModel::kUniform) {
    for (int i = 0; i < samples; ++i) dist.j[i] = 1.0 / width;
    return dist;
  }
  const double cutoff = std::max(lambda_london * lambda_london / thickness, dx);
  double total = 0;
  for (int i = 0; i < samples; ++i) {
    dist.j[i] = 1.0 / std::sqrt(std::max(a * a - dist.x[i] * dist.x[i], 0.0) + cutoff * cutoff);
    total += dist.j[i] * dx;
  }
  for (int i = 0; i < samples; ++i) dist.j[i] /= total;
  return dist;
}

GridField vacuum_field(const ResonatorParams& params, const CurrentDistribution& current,
                       const RectGrid& grid, double wire_thickness) {
  params.validate();
  const double di = params.vacuum_current();
  const double y_src = -0.5 * wire_thickness;  // mid-film, above the surface
  const double dx_src = current.x.size() > 1 ? current.x[1] - current.x[0] : 1.0;

  GridField field(grid);
  const std::size_t nx = grid.nx();
  parallel_blocks(grid.ny(), 4, [&](std::size_t, std::size_t y0, std::size_t y1) {
    for (std::size_t iy = y0; iy < y1; ++iy) {
      const double y = grid.y[iy];
      for (std::size_t ix = 0; ix < nx; ++ix) {
        const double x = grid.x[ix];
        double bx = 0, by = 0;
        for (std::size_t s = 0; s < current.x.size(); ++s) {
          const double ddx = x - current.x[s];
          const double ddy = y - y_src;
          const double r2 = ddx * ddx + ddy * ddy;
          const double c = kMu0 * di * current.j[s] * dx_src / (kTwoPi * r2);
          bx += -c * ddy;
          by += c * ddx;
        }
        field.v[iy * nx + ix] = std::sqrt(bx * bx + by * by);
      }
    }
  });
  return field;
}

CouplingMap coupling_map(const GridField& b1, double sx_element, double gamma_e,
                         const ResonatorParams& params, const PulseParams& pulse) {
  params.validate();
  pulse.validate();
  if (sx_element < 0) throw std::invalid_argument("sx_element must be >= 0");
  const double kappa = params.kappa();
  CouplingMap map;
  map.grid = b1.grid;
  const std::size_t n = b1.v.size();
  map.b1 = b1.v;
  map.g0.resize(n);
  map.gamma_p.resize(n);
  map.theta.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double g0 = gamma_e * sx_element * b1.v[k];
    map.g0[k] = g0;
    map.gamma_p[k] = 4 * g0 * g0 / kappa;
    map.theta[k] = 4 * g0 * pulse.beta * pulse.t_p / std::sqrt(kappa);
  }
  return map;
}

}  // namespace donorspin
