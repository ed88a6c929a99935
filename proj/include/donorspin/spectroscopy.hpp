#pragma once

#include <array>
#include <vector>

#include "donorspin/device_model.hpp"
#include "donorspin/strain_solver.hpp"

namespace donorspin {

struct TransitionWeights {
  std::array<double, 10> p{1, 1, 1, 1, 1, 1, 1, 1, 1, 1};  // per resolved line

  void validate() const;
};

// Everything Eq.-4-style echo integrals need, on one shared grid.
struct EchoModel {
  ShiftMap shift;          // strain shift f_delta(x, y), Hz
  GridField b1;            // vacuum field magnitude, T
  DonorProfile profile;    // rho(y)
  ResonatorParams resonator;
  PulseParams pulse;
  double wire_length = 700e-6;
  double gamma_e = 0.0;
  std::vector<double> density_mask;  // optional per-node factor (ionization), empty = 1

  void validate() const;
};

// Echo amplitude of one transition branch at the field where its shift is
// f_target:  2 sqrt(kappa_c)/kappa * sum over the iso-shift band of
// l rho(y) g0 [1 - exp(-Gamma_P t_rep)] sin^3(theta), midpoint rule on the
// grid's dual cells. Empty band gives 0.
double echo_amplitude(const EchoModel& model, double sx_element, double f_target,
                      double half_bandwidth);

struct SmoothedComponent {
  std::vector<double> v;
  bool identity_fallback = false;  // sigma below grid resolution somewhere
};

// Gaussian smoothing along the sweep axis with a per-sample kernel width
// (tesla). Each input sample spreads its weight over the output with its own
// normalized kernel, so the integral over the sweep is preserved exactly.
SmoothedComponent convolve_inhomogeneity(const std::vector<double>& b0,
                                         const std::vector<double>& chi,
                                         const std::vector<double>& sigma_b);

SmoothedComponent convolve_inhomogeneity(const std::vector<double>& b0,
                                         const std::vector<double>& chi, double sigma_b);

struct Spectrum {
  std::vector<double> b0;
  std::vector<double> total;
  std::array<std::vector<double>, 10> components;  // per resolved line, weight applied
};

struct SpectrumOptions {
  double sigma_b_factor = 0.2;      // sigma_B = factor |f_delta| 2pi / |gamma_eff|
  bool magnitude_detection = true;  // report |chi| per line component
  double branch_weight = 1.0;       // population weight of each branch in a line
};

// Field-swept echo spectrum: per-branch Eq. 4 amplitudes against the branch's
// own f_delta(i, B0) = (omega0 - omega_i(B0)) / 2pi, smoothed by the local
// strain inhomogeneity kernel, branches summed into their resolved line and
// lines combined with weights p_i.
Spectrum total_spectrum(const SpinSystem& sys, const EchoModel& model,
                        const TransitionWeights& weights, const std::vector<double>& b0,
                        const SpectrumOptions& options = {});

// Ionization mask for a Schottky depletion region: density suppressed within
// `depth` of the wire footprint segment (rectangle under the strip with
// quarter-circle corner rounding). depth = 0 keeps everything.
std::vector<double> schottky_mask(const RectGrid& grid, double wire_width, double depth);

// Known scenario depths: none, 0.3 eV -> 60 nm, 0.7 eV -> 100 nm.
double schottky_depth_for_barrier(double barrier_ev);

// Echo amplitude against pulse amplitude at fixed transition and shift.
std::vector<double> rabi_response(const EchoModel& model, double sx_element, double f_target,
                                  double half_bandwidth, const std::vector<double>& betas);

// B0 at which branch (line, branch) has shift f_target, on [b_lo, b_hi].
double field_for_shift(const SpinSystem& sys, int line, int branch, double omega0,
                       double f_target, double b_lo = 1e-5, double b_hi = 0.05);

}  // namespace donorspin
