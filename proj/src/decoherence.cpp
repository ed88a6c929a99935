#include "donorspin/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "donorspin/parallel.hpp"

namespace donorspin {

double id_rate(double rho, double gamma_eff, double theta, double gamma_res) {
  if (rho < 0) throw std::invalid_argument("id_rate: rho must be >= 0");
  const double s = std::sin(0.5 * theta);
  return gamma_res +
         rho * gamma_eff * gamma_eff * (kTwoPi / 2 * kHbar * kMu0 / (9 * std::sqrt(3.0))) * s * s;
}

double id_effective_density(double rho, double bandwidth, double broadening) {
  if (broadening <= 0) return rho;
  return rho * std::min(1.0, bandwidth / broadening);
}

double SurfaceBath::sigma_at(double x) const {
  const double u = (std::abs(x) - 0.5 * wire_width) / interp_width;
  double s;
  if (u <= -0.5) {
    s = 0.0;
  } else if (u >= 0.5) {
    s = 1.0;
  } else {
    const double t = u + 0.5;
    s = t * t * (3 - 2 * t);
  }
  return sigma2 + (sigma1 - sigma2) * s;
}

void SurfaceBath::validate() const {
  if (sigma1 < 0 || sigma2 < 0) throw std::invalid_argument("bath densities must be >= 0");
  if (!(interp_width > 0)) throw std::invalid_argument("bath interpolation width must be > 0");
  if (!(wire_width > 0)) throw std::invalid_argument("bath wire width must be > 0");
  if (!(moment > 0)) throw std::invalid_argument("bath moment must be > 0");
}

BathExtent bath_extent(const RectGrid& grid, double margin) {
  BathExtent e;
  e.x_min = grid.x.front() - margin;
  e.x_max = grid.x.back() + margin;
  e.z_min = -margin;
  e.z_max = margin;
  return e;
}

std::vector<Dipole> sample_bath(const SurfaceBath& bath, const BathExtent& extent,
                                CounterRng rng) {
  bath.validate();
  if (!(extent.x_max > extent.x_min) || !(extent.z_max > extent.z_min))
    throw std::invalid_argument("sample_bath: empty extent");
  const double sigma_max = std::max(bath.sigma1, bath.sigma2);
  if (sigma_max == 0) return {};
  const double area = (extent.x_max - extent.x_min) * (extent.z_max - extent.z_min);
  const std::uint64_t n = rng.poisson(sigma_max * area);
  std::vector<Dipole> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    Dipole d;
    d.x = rng.uniform(extent.x_min, extent.x_max);
    d.z = rng.uniform(extent.z_min, extent.z_max);
    const double keep = rng.uniform();
    rng.unit_sphere(d.mx, d.my, d.mz);
    if (keep * sigma_max > bath.sigma_at(d.x)) continue;  // thinning
    out.push_back(d);
  }
  return out;
}

NoiseMap noise_map(const SurfaceBath& bath, const BathExtent& extent, const RectGrid& grid,
                   int realizations, std::uint64_t seed) {
  if (realizations < 1) throw std::invalid_argument("noise_map: need >= 1 realization");
  const CounterRng master(seed);
  const double pref = kMu0 / (2 * kTwoPi) * bath.moment;  // mu0 m / 4pi

  NoiseMap map;
  map.grid = grid;
  map.db.assign(grid.size(), 0.0);

  std::vector<std::vector<double>> partial(realizations);
  parallel_blocks(realizations, 1, [&](std::size_t, std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
      const auto dipoles = sample_bath(bath, extent, master.derive(r));
      std::vector<double> acc(grid.size(), 0.0);
      for (const Dipole& d : dipoles) {
        for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
          const double y = grid.y[iy];
          for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
            const double rx = grid.x[ix] - d.x;
            const double rz = -d.z;
            const double r2 = rx * rx + y * y + rz * rz;
            const double inv_r = 1.0 / std::sqrt(r2);
            const double inv_r3 = inv_r * inv_r * inv_r;
            const double mr = (d.mx * rx + d.my * y + d.mz * rz) * inv_r;
            const double bz = pref * inv_r3 * (3 * mr * rz * inv_r - d.mz);
            acc[grid.index(ix, iy)] += bz * bz;
          }
        }
      }
      partial[r] = std::move(acc);
    }
  });
  for (int r = 0; r < realizations; ++r)
    for (std::size_t k = 0; k < map.db.size(); ++k) map.db[k] += partial[r][k];
  for (double& v : map.db) v = std::sqrt(v / realizations);
  return map;
}

NoiseMap expected_noise_map(const SurfaceBath& bath, const RectGrid& grid) {
  bath.validate();
  const double pref = kMu0 / (2 * kTwoPi) * bath.moment;
  const double kernel = pref * pref * 3 * (kTwoPi / 2) / 16;  // (mu0 m/4pi)^2 3pi/16

  // 16-point Gauss-Legendre nodes/weights on (-1, 1).
  static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                               0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
  static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                               0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                               0.0622535239386479, 0.0271524594117541};

  NoiseMap map;
  map.grid = grid;
  map.db.assign(grid.size(), 0.0);
  const double a = 0.5 * bath.wire_width;
  parallel_blocks(grid.ny(), 2, [&](std::size_t, std::size_t y0, std::size_t y1) {
    for (std::size_t iy = y0; iy < y1; ++iy) {
      const double y = std::max(grid.y[iy], 1e-12);
      for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
        const double x = grid.x[ix];
        // Lateral integral via u = y tan(psi), split at the smoothstep
        // breakpoints so the 16-point panels see smooth integrands.
        std::vector<double> psi{-kTwoPi / 4, kTwoPi / 4};
        for (double ub : {-a - 0.5 * bath.interp_width, -a + 0.5 * bath.interp_width,
                          a - 0.5 * bath.interp_width, a + 0.5 * bath.interp_width})
          psi.push_back(std::atan((ub - x) / y));
        std::sort(psi.begin(), psi.end());
        double integral = 0;
        for (std::size_t seg = 0; seg + 1 < psi.size(); ++seg) {
          const double c = 0.5 * (psi[seg] + psi[seg + 1]);
          const double h = 0.5 * (psi[seg + 1] - psi[seg]);
          if (h <= 0) continue;
          for (int q = 0; q < 8; ++q) {
            for (double sgn : {-1.0, 1.0}) {
              const double p = c + sgn * h * gx[q];
              const double cp = std::cos(p);
              integral += gw[q] * h * bath.sigma_at(x + y * std::tan(p)) * cp * cp * cp;
            }
          }
        }
        map.db[grid.index(ix, iy)] = std::sqrt(kernel * integral / (y * y * y * y));
      }
    }
  });
  return map;
}

void apply_depth_factor(NoiseMap& map, const std::vector<double>& depth,
                        const std::vector<double>& factor) {
  if (depth.size() != factor.size() || depth.size() < 2)
    throw std::invalid_argument("apply_depth_factor: bad table");
  auto interp = [&](double y) {
    if (y <= depth.front()) return factor.front();
    if (y >= depth.back()) return factor.back();
    const std::size_t i = axis_cell(depth, y);
    const double t = (y - depth[i]) / (depth[i + 1] - depth[i]);
    return factor[i] + t * (factor[i + 1] - factor[i]);
  };
  for (std::size_t iy = 0; iy < map.grid.ny(); ++iy) {
    const double f = interp(map.grid.y[iy]);
    for (std::size_t ix = 0; ix < map.grid.nx(); ++ix) map.db[map.grid.index(ix, iy)] *= f;
  }
}

T2Map t2_map(const NoiseMap& noise, double gamma_eff, double gamma_non, double c_t2) {
  return t2_map(noise, gamma_eff, std::vector<double>(noise.db.size(), gamma_non), c_t2);
}

T2Map t2_map(const NoiseMap& noise, double gamma_eff, const std::vector<double>& gamma_non,
             double c_t2) {
  if (gamma_non.size() != noise.db.size())
    throw std::invalid_argument("t2_map: gamma_non size mismatch");
  if (!(c_t2 > 0)) throw std::invalid_argument("t2_map: c_t2 must be > 0");
  T2Map map;
  map.grid = noise.grid;
  map.t2.resize(noise.db.size());
  for (std::size_t k = 0; k < map.t2.size(); ++k) {
    if (gamma_non[k] < 0) throw std::invalid_argument("t2_map: Gamma_non must be >= 0");
    const double rate = gamma_non[k] + std::abs(gamma_eff) * noise.db[k] / (kTwoPi * c_t2);
    map.t2[k] = 1.0 / rate;
  }
  return map;
}

EchoCurve aggregate_echo_decay(const EchoModel& model, double sx_element, double f_target,
                               double half_bandwidth, const T2Map& t2,
                               std::vector<double> two_tau) {
  model.validate();
  if (!t2.grid.same_axes(model.shift.grid))
    throw std::invalid_argument("aggregate_echo_decay: T2 map grid mismatch");

  // Eq.-8 weights over the iso-shift band, in fixed grid order.
  const RectGrid& grid = model.shift.grid;
  const double kappa = model.resonator.kappa();
  const double g0_per_b1 = model.gamma_e * sx_element;
  std::vector<double> w, t2v;
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double rho = model.profile.at(grid.y[iy]);
    if (rho == 0) continue;
    const double wy = RectGrid::node_weight(grid.y, iy);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const std::size_t k = grid.index(ix, iy);
      if (std::abs(model.shift.f_delta[k] - f_target) > half_bandwidth) continue;
      const double mask = model.density_mask.empty() ? 1.0 : model.density_mask[k];
      if (mask == 0) continue;
      const double g0 = g0_per_b1 * model.b1.v[k];
      const double gamma_p = 4 * g0 * g0 / kappa;
      const double area = RectGrid::node_weight(grid.x, ix) * wy;
      w.push_back(area * rho * mask * g0 * (1 - std::exp(-gamma_p * model.pulse.t_rep)));
      t2v.push_back(t2.t2[k]);
    }
  }
  if (w.empty()) throw std::runtime_error("aggregate_echo_decay: no spins at this shift");
  const double prefactor = 2 * std::sqrt(model.resonator.kappa_c) / kappa * model.wire_length;

  auto evaluate = [&](const std::vector<double>& taus) {
    std::vector<double> amp(taus.size(), 0.0);
    for (std::size_t i = 0; i < taus.size(); ++i) {
      double s = 0;
      for (std::size_t c = 0; c < w.size(); ++c) {
        const double u = taus[i] / t2v[c];
        s += w[c] * std::exp(-u * u);
      }
      amp[i] = prefactor * s;
    }
    return amp;
  };

  EchoCurve curve;
  if (!two_tau.empty()) {
    curve.two_tau = std::move(two_tau);
    curve.amplitude = evaluate(curve.two_tau);
    curve.exponential = fit_exponential_decay(curve.two_tau, curve.amplitude);
    curve.gaussian = fit_gaussian_decay(curve.two_tau, curve.amplitude);
  } else {
    // Start from the weight-averaged T2 and iterate the sampling window
    // [0.1, 3] x T2 to self-consistency with the exponential fit.
    double t2_est = 0, wsum = 0;
    for (std::size_t c = 0; c < w.size(); ++c) {
      t2_est += w[c] * t2v[c];
      wsum += w[c];
    }
    t2_est /= wsum;
    for (int pass = 0; pass < 6; ++pass) {
      curve.two_tau.resize(40);
      for (int i = 0; i < 40; ++i)
        curve.two_tau[i] = t2_est * (0.1 + (3.0 - 0.1) * i / 39.0);
      curve.amplitude = evaluate(curve.two_tau);
      curve.exponential = fit_exponential_decay(curve.two_tau, curve.amplitude);
      curve.gaussian = fit_gaussian_decay(curve.two_tau, curve.amplitude);
      const double next = curve.exponential.t2;
      if (std::abs(next - t2_est) <= 0.02 * t2_est) break;
      t2_est = next;
    }
  }
  curve.exponential_preferred = curve.exponential.rss < curve.gaussian.rss;
  return curve;
}

std::optional<double> effective_noise(double t2, double gamma_eff) {
  if (!(t2 > 0)) throw std::invalid_argument("effective_noise: T2 must be > 0");
  if (gamma_eff == 0) return std::nullopt;
  return kTwoPi / (std::abs(gamma_eff) * t2);
}

double flip_flop_limit(double rho_per_um3) {
  if (!(rho_per_um3 > 0)) throw std::invalid_argument("flip_flop_limit: rho must be > 0");
  return 1e3 / rho_per_um3;
}

double charge_noise_t2(double e_r, double sqrt_s_e, const SpinSystem& sys) {
  if (!(e_r > 0)) throw std::invalid_argument("charge_noise_t2: E_r must be > 0");
  if (sqrt_s_e < 0) throw std::invalid_argument("charge_noise_t2: sqrt(S_E) must be >= 0");
  if (sqrt_s_e == 0) return std::numeric_limits<double>::infinity();
  const double rate =
      10 * std::abs(sys.stark_eta) * sys.hyperfine * e_r * sqrt_s_e / kTwoPi;
  return 1.0 / rate;
}

GridField strip_field_shape(const RectGrid& grid, double wire_width) {
  const double a = 0.5 * wire_width;
  GridField shape(grid);
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double y = std::max(grid.y[iy], 1e-12);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double x = grid.x[ix];
      const double rm = y * y + (a - x) * (a - x);
      const double rp = y * y + (a + x) * (a + x);
      const double ex = y / rm - y / rp;
      const double ey = (a - x) / rm + (a + x) / rp;
      shape.v[grid.index(ix, iy)] = std::hypot(ex, ey) / (kTwoPi / 2);
    }
  }
  return shape;
}

double dd_scaling(double t2_single, int n_pulses, double alpha) {
  if (n_pulses < 1) throw std::invalid_argument("dd_scaling: N must be >= 1");
  if (!(alpha > 0)) throw std::invalid_argument("dd_scaling: alpha must be > 0");
  return t2_single * std::pow(n_pulses, alpha / (1 + alpha));
}

ThermalFactors thermal_scaling(double n_th) {
  if (n_th < 0) throw std::invalid_argument("thermal_scaling: n_th must be >= 0");
  const double f = 1.0 / (2 * n_th + 1);
  return ThermalFactors{f, f};
}

}  // namespace donorspin
