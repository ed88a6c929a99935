#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "donorspin/constants.hpp"
#include "donorspin/fit.hpp"
#include "donorspin/grid.hpp"
#include "donorspin/rng.hpp"
#include "donorspin/spectroscopy.hpp"

namespace donorspin {

// Instantaneous diffusion:
//   1/T2 = Gamma_res + rho gamma_eff^2 (pi hbar mu0 / (9 sqrt(3))) sin^2(theta/2)
double id_rate(double rho, double gamma_eff, double theta, double gamma_res);

// Local inhomogeneous broadening suppresses ID when it exceeds the pulse
// bandwidth; modeled as an effective flipped-spin density
// rho min(1, Omega / Omega_broadening).
double id_effective_density(double rho, double bandwidth, double broadening);

// Fluctuating surface spins at the Si/SiO2 interface: density sigma1 far from
// the wire, sigma2 under it, smoothstep crossover of width `interp_width`
// centered on the wire edge.
struct SurfaceBath {
  double sigma1 = 4e16;          // 1/m^2  (4e12 cm^-2)
  double sigma2 = 1e16;          // 1/m^2  (1e12 cm^-2)
  double interp_width = 500e-9;  // m
  double wire_width = 5e-6;      // m
  double moment = kBohrMagneton; // J/T

  double sigma_at(double x) const;
  void validate() const;
};

struct Dipole {
  double x = 0, z = 0;           // position on the y = 0 plane
  double mx = 0, my = 0, mz = 0; // unit orientation
};

struct BathExtent {
  double x_min = 0, x_max = 0, z_min = 0, z_max = 0;
};

// Extent covering the grid with the given margin on every side (margin should
// be >= 10x the deepest donor).
BathExtent bath_extent(const RectGrid& grid, double margin);

// One realization: Poisson-distributed positions with intensity sigma(x)
// (thinning against max(sigma1, sigma2)), orientations uniform on the sphere.
std::vector<Dipole> sample_bath(const SurfaceBath& bath, const BathExtent& extent,
                                CounterRng rng);

struct NoiseMap {
  RectGrid grid;
  std::vector<double> db;  // rms z-component of the bath field, T

  double sample(double x, double y) const { return sample_bilinear(grid, db, x, y); }
};

// Monte Carlo rms map: db^2 = mean over realizations of the summed squared
// dipole-field z components. Realization r uses the stream seed.derive(r).
NoiseMap noise_map(const SurfaceBath& bath, const BathExtent& extent, const RectGrid& grid,
                   int realizations, std::uint64_t seed);

// Infinite-realization limit of noise_map: the position/orientation average
// reduces to db^2(x,y) = (mu0 m/4pi)^2 (3pi/16) Int sigma(x') ((x-x')^2+y^2)^(-5/2) dx'.
// Used as the fast path for T2 maps; the Monte Carlo route cross-checks it.
NoiseMap expected_noise_map(const SurfaceBath& bath, const RectGrid& grid);

// Multiply db by a depth-dependent factor (Meissner screening correction).
void apply_depth_factor(NoiseMap& map, const std::vector<double>& depth,
                        const std::vector<double>& factor);

struct T2Map {
  RectGrid grid;
  std::vector<double> t2;  // s
};

// Pointwise 1/T2 = Gamma_non + gamma_eff db / (2 pi c_t2); the per-point decay
// is Gaussian with this constant. Gamma_non may be a map (e.g. charge noise).
T2Map t2_map(const NoiseMap& noise, double gamma_eff, double gamma_non, double c_t2 = 1.0);
T2Map t2_map(const NoiseMap& noise, double gamma_eff, const std::vector<double>& gamma_non,
             double c_t2 = 1.0);

struct EchoCurve {
  std::vector<double> two_tau;
  std::vector<double> amplitude;
  DecayFit exponential;
  DecayFit gaussian;
  bool exponential_preferred = false;

  double t2() const { return exponential_preferred ? exponential.t2 : gaussian.t2; }
};

// Synthetic echo decay of the donors in the iso-shift band at f_target:
//   chi(2 tau) = 2 sqrt(kappa_c)/kappa Int l rho g0 [1-exp(-Gamma_P t_rep)]
//                exp[-(2 tau / T2(x,y))^2]
// Fits both exponential and Gaussian decays and flags the lower-residual one.
// With an empty two_tau the grid spans [0.1, 3] x T2, iterated to
// self-consistency on the exponential fit. Throws std::runtime_error when no
// donors sit at this shift.
EchoCurve aggregate_echo_decay(const EchoModel& model, double sx_element, double f_target,
                               double half_bandwidth, const T2Map& t2,
                               std::vector<double> two_tau = {});

// delta_B = 2 pi / (gamma_eff T2); nullopt at a clock transition.
std::optional<double> effective_noise(double t2, double gamma_eff);

// Direct flip-flop scaling T2 = 1e3 s / rho, rho in um^-3.
double flip_flop_limit(double rho_per_um3);

// Charge-noise-limited coherence around a residual field E_r for 1/f field
// noise of spectral amplitude sqrt_s_e ((V/m) at 1 Hz):
//   T2 = 2 pi / (10 |eta| A E_r sqrt_s_e)
double charge_noise_t2(double e_r, double sqrt_s_e, const SpinSystem& sys);

// |E| per volt of wire potential for a strip electrode held at fixed
// potential on the surface of a grounded half space (1/m). Shapes the
// spatial profile of the charge-noise channel.
GridField strip_field_shape(const RectGrid& grid, double wire_width);

// Dynamical decoupling: T2(N) = T2(1) N^(alpha/(1+alpha)).
double dd_scaling(double t2_single, int n_pulses, double alpha);

struct ThermalFactors {
  double echo = 1.0;
  double t1 = 1.0;
};

// Thermal photons halve both at n_th = 0.5: factor 1/(2 n_th + 1).
ThermalFactors thermal_scaling(double n_th);

}  // namespace donorspin
