#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "donorspin/constants.hpp"

namespace donorspin {

// Laterally infinite superconducting film of thickness `film_thickness` above
// the substrate, separated by a non-magnetic oxide gap. Source dipoles sit on
// the Si/SiO2 interface plane (y = 0); observation points are at depth y > 0
// in the substrate. lambda = infinity disables screening.
struct ScreeningConfig {
  double film_thickness = 50e-9;
  double oxide_gap = 5e-9;
  double lambda = 50e-9;
  double moment = kBohrMagneton;
  double kmax_factor = 50.0;  // k integrals truncated at kmax_factor / min(depth, lambda)
  double rel_tol = 1e-4;      // panel-doubling stop for the quadratures

  void validate() const;
};

// Reflection amplitude of the London slab for transverse wavenumber k, felt
// below the film (0 = transparent, 1 = perfect screen).
double slab_reflection(const ScreeningConfig& cfg, double k);

// Field of a point dipole at (x, 0, z) with unit orientation m (y axis points
// into the substrate), observed at (x, y, z), y > 0: free dipole field plus
// the London-slab response evaluated as Hankel-transform integrals.
std::array<double, 3> screened_dipole_field(const ScreeningConfig& cfg,
                                            const std::array<double, 3>& dipole_pos,
                                            const std::array<double, 3>& moment_dir,
                                            const std::array<double, 3>& obs);

std::array<double, 3> free_dipole_field(double moment, const std::array<double, 3>& dipole_pos,
                                        const std::array<double, 3>& moment_dir,
                                        const std::array<double, 3>& obs);

struct NoiseVsDepth {
  std::vector<double> depth;
  std::vector<double> db;           // sqrt(<db_z^2>), T
  std::vector<double> db_free;      // same with lambda -> infinity
  std::vector<double> enhancement;  // db / db_free
};

// Orientation- and position-averaged rms z field of a homogeneous interface
// density sigma (1/m^2) against depth:
//   <db_z^2>(y) = sigma m^2 mu0^2 / (24 pi) Int k^3 e^(-2ky) (1 + rho(k)^2) dk,
// rho(k) = R(k) e^(-2 k gap); the free-space reference is the same integral
// with rho = 0 (analytically sigma m^2 mu0^2 / (64 pi y^4)).
NoiseVsDepth averaged_noise_vs_depth(const ScreeningConfig& cfg, double sigma,
                                     const std::vector<double>& depths);

// Same average by direct Monte Carlo over dipole positions (Poisson, density
// sigma) using screened_dipole_field, orientation average taken analytically
// per dipole. Runs until the standard error is below se_target or max_real
// realizations. Cross-checks the quadrature route.
double mc_averaged_noise(const ScreeningConfig& cfg, double sigma, double depth,
                         std::uint64_t seed, double se_target = 0.01, int max_real = 4000);

}  // namespace donorspin
