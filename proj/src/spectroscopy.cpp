#include "donorspin/spectroscopy.hpp"

#include <cmath>
#include <stdexcept>

#include "donorspin/constants.hpp"
#include "donorspin/parallel.hpp"

namespace donorspin {

void TransitionWeights::validate() const {
  for (double w : p)
    if (w < 0) throw std::invalid_argument("transition weights must be >= 0");
}

void EchoModel::validate() const {
  if (!shift.grid.same_axes(b1.grid))
    throw std::invalid_argument("shift and coupling maps must share one grid");
  if (!density_mask.empty() && density_mask.size() != shift.grid.size())
    throw std::invalid_argument("density mask size mismatch");
  if (!(wire_length > 0) || !(gamma_e > 0))
    throw std::invalid_argument("echo model: bad wire length or gamma_e");
  resonator.validate();
  pulse.validate();
}

namespace {

double echo_amplitude_impl(const EchoModel& m, double sx, double f_target, double half_band,
                           double beta) {
  const double kappa = m.resonator.kappa();
  const double g0_per_b1 = m.gamma_e * sx;
  const double theta_per_g0 = 4 * beta * m.pulse.t_p / std::sqrt(kappa);
  const RectGrid& grid = m.shift.grid;
  double sum = 0;
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double rho = m.profile.at(grid.y[iy]);
    if (rho == 0) continue;
    const double wy = RectGrid::node_weight(grid.y, iy);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const std::size_t k = grid.index(ix, iy);
      if (std::abs(m.shift.f_delta[k] - f_target) > half_band) continue;
      const double mask = m.density_mask.empty() ? 1.0 : m.density_mask[k];
      if (mask == 0) continue;
      const double g0 = g0_per_b1 * m.b1.v[k];
      const double gamma_p = 4 * g0 * g0 / kappa;
      const double theta = theta_per_g0 * g0;
      const double s = std::sin(theta);
      const double area = RectGrid::node_weight(grid.x, ix) * wy;
      sum += area * rho * mask * g0 * (1 - std::exp(-gamma_p * m.pulse.t_rep)) * s * s * s;
    }
  }
  return 2 * std::sqrt(m.resonator.kappa_c) / kappa * m.wire_length * sum;
}

}  // namespace

double echo_amplitude(const EchoModel& model, double sx_element, double f_target,
                      double half_bandwidth) {
  model.validate();
  if (!(half_bandwidth > 0)) throw std::invalid_argument("half_bandwidth must be > 0");
  return echo_amplitude_impl(model, sx_element, f_target, half_bandwidth, model.pulse.beta);
}

SmoothedComponent convolve_inhomogeneity(const std::vector<double>& b0,
                                         const std::vector<double>& chi,
                                         const std::vector<double>& sigma_b) {
  if (b0.size() != chi.size() || b0.size() != sigma_b.size())
    throw std::invalid_argument("convolve_inhomogeneity: size mismatch");
  const std::size_t n = b0.size();
  SmoothedComponent out;
  out.v.assign(n, 0.0);
  const double step = n > 1 ? (b0.back() - b0.front()) / (n - 1) : 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (sigma_b[j] < 0) throw std::invalid_argument("sigma_b must be >= 0");
    if (chi[j] == 0) continue;
    if (sigma_b[j] <= step) {
      out.v[j] += chi[j];
      if (sigma_b[j] > 0) out.identity_fallback = true;
      continue;
    }
    // Spread sample j with its own normalized kernel (integral preserving).
    const double s2 = 2 * sigma_b[j] * sigma_b[j];
    const std::size_t reach = static_cast<std::size_t>(6 * sigma_b[j] / step) + 1;
    const std::size_t k0 = j > reach ? j - reach : 0;
    const std::size_t k1 = std::min(n - 1, j + reach);
    double norm = 0;
    for (std::size_t k = k0; k <= k1; ++k) {
      const double d = b0[k] - b0[j];
      norm += std::exp(-d * d / s2);
    }
    for (std::size_t k = k0; k <= k1; ++k) {
      const double d = b0[k] - b0[j];
      out.v[k] += chi[j] * std::exp(-d * d / s2) / norm;
    }
  }
  return out;
}

SmoothedComponent convolve_inhomogeneity(const std::vector<double>& b0,
                                         const std::vector<double>& chi, double sigma_b) {
  return convolve_inhomogeneity(b0, chi, std::vector<double>(b0.size(), sigma_b));
}

Spectrum total_spectrum(const SpinSystem& sys, const EchoModel& model,
                        const TransitionWeights& weights, const std::vector<double>& b0,
                        const SpectrumOptions& options) {
  model.validate();
  weights.validate();
  if (b0.size() < 3) throw std::invalid_argument("total_spectrum: sweep needs >= 3 points");
  const std::size_t n = b0.size();
  const double half_band = model.resonator.kappa() / kTwoPi;

  // Transition frequencies for every sweep point (branches keyed by order in
  // the per-field transition list, which is stable).
  std::vector<std::vector<Transition>> trans(n);
  parallel_blocks(n, 16, [&](std::size_t, std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i)
      trans[i] = list_transitions(sys, levels_at(sys, b0[i]));
  });
  const std::size_t n_branches = trans[0].size();

  Spectrum spec;
  spec.b0 = b0;
  spec.total.assign(n, 0.0);
  for (auto& c : spec.components) c.assign(n, 0.0);

  std::vector<std::vector<double>> branch_raw(n_branches);
  parallel_blocks(n_branches, 1, [&](std::size_t, std::size_t t0, std::size_t t1) {
    for (std::size_t t = t0; t < t1; ++t) {
      std::vector<double> raw(n, 0.0), sigma(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const Transition& tr = trans[i][t];
        const double f_delta = (model.resonator.omega0 - tr.omega) / kTwoPi;
        raw[i] = echo_amplitude_impl(model, tr.sx_element, f_delta, half_band,
                                     model.pulse.beta);
        // Local slope of this branch along the sweep for the kernel width.
        const std::size_t ia = i == 0 ? 0 : i - 1;
        const std::size_t ib = i + 1 == n ? i : i + 1;
        const double gamma_eff =
            (trans[ib][t].omega - trans[ia][t].omega) / (b0[ib] - b0[ia]);
        if (gamma_eff != 0)
          sigma[i] = options.sigma_b_factor * std::abs(f_delta) * kTwoPi / std::abs(gamma_eff);
      }
      branch_raw[t] = convolve_inhomogeneity(b0, raw, sigma).v;
    }
  });

  for (std::size_t t = 0; t < n_branches; ++t) {
    const int line = trans[0][t].line;
    if (line < 1 || line > 10) continue;
    for (std::size_t i = 0; i < n; ++i)
      spec.components[line - 1][i] += options.branch_weight * branch_raw[t][i];
  }
  for (int line = 0; line < 10; ++line) {
    for (std::size_t i = 0; i < n; ++i) {
      double c = spec.components[line][i] * weights.p[line];
      if (options.magnitude_detection) c = std::abs(c);
      spec.components[line][i] = c;
      spec.total[i] += c;
    }
  }
  return spec;
}

std::vector<double> schottky_mask(const RectGrid& grid, double wire_width, double depth) {
  if (depth < 0) throw std::invalid_argument("schottky depth must be >= 0");
  std::vector<double> mask(grid.size(), 1.0);
  if (depth == 0) return mask;
  const double a = 0.5 * wire_width;
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    const double y = grid.y[iy];
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      const double dx = std::max(0.0, std::abs(grid.x[ix]) - a);
      if (dx * dx + y * y <= depth * depth) mask[grid.index(ix, iy)] = 0.0;
    }
  }
  return mask;
}

double schottky_depth_for_barrier(double barrier_ev) {
  if (barrier_ev <= 0) return 0.0;
  if (std::abs(barrier_ev - 0.3) < 1e-9) return 60e-9;
  if (std::abs(barrier_ev - 0.7) < 1e-9) return 100e-9;
  throw std::invalid_argument("unknown Schottky barrier scenario (use 0, 0.3 or 0.7 eV)");
}

std::vector<double> rabi_response(const EchoModel& model, double sx_element, double f_target,
                                  double half_bandwidth, const std::vector<double>& betas) {
  model.validate();
  std::vector<double> out(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    out[i] = betas[i] == 0
                 ? 0.0
                 : echo_amplitude_impl(model, sx_element, f_target, half_bandwidth, betas[i]);
  }
  return out;
}

double field_for_shift(const SpinSystem& sys, int line, int branch, double omega0,
                       double f_target, double b_lo, double b_hi) {
  auto shift_at = [&](double b) {
    const auto ts = list_transitions(sys, levels_at(sys, b));
    const auto t = find_transition(ts, line, branch);
    if (!t) throw std::invalid_argument("field_for_shift: unknown transition");
    return (omega0 - t->omega) / kTwoPi - f_target;
  };
  double lo = b_lo, hi = b_hi;
  double flo = shift_at(lo), fhi = shift_at(hi);
  if ((flo < 0) == (fhi < 0))
    throw std::invalid_argument("field_for_shift: target shift not bracketed in field window");
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = shift_at(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
    if (hi - lo < 1e-9) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace donorspin
