#pragma once

#include <vector>

#include "donorspin/grid.hpp"
#include "donorspin/profiles.hpp"

namespace donorspin {

struct ResonatorParams {
  double omega0 = 0.0;   // rad/s
  double z0 = 50.0;      // ohm
  double kappa_i = 0.0;  // 1/s
  double kappa_c = 0.0;  // 1/s

  double kappa() const { return kappa_i + kappa_c; }
  // rms vacuum current fluctuation of the LC mode.
  double vacuum_current() const;
  void validate() const;
};

enum class CurrentModel { kStrip, kUniform };

// Supercurrent density across the strip, normalized to unit total current.
// The strip model is j(x) ~ 1 / sqrt((w/2)^2 - x^2 + b^2) with the edge
// regularized over b = max(lambda^2 / thickness, min spacing); the uniform
// model is a sensitivity fallback.
struct CurrentDistribution {
  std::vector<double> x;  // sample positions across the strip
  std::vector<double> j;  // linear current density (1/m), integrates to 1
};

CurrentDistribution current_distribution(double width, double thickness, double lambda_london,
                                         CurrentModel model = CurrentModel::kStrip,
                                         int samples = 400);

// |B_transverse|(x, y) of the vacuum current delta_i flowing along the wire,
// by 2D Biot-Savart over the current distribution. The source sheet sits at
// mid-film height; B0 is along the wire, so the full in-plane magnitude
// drives the spins.
GridField vacuum_field(const ResonatorParams& params, const CurrentDistribution& current,
                       const RectGrid& grid, double wire_thickness);

struct PulseParams {
  double beta = 5e6;        // drive amplitude, s^-1/2
  double t_p = 2e-6;        // pulse duration, s
  double t_rep = 10.0;      // sequence repetition time, s
  double bandwidth = 9.2e5; // excitation bandwidth Omega, rad/s

  void validate() const;
};

struct CouplingMap {
  RectGrid grid;
  std::vector<double> b1;       // T
  std::vector<double> g0;       // rad/s
  std::vector<double> gamma_p;  // 1/s
  std::vector<double> theta;    // rad, for the pulse used to build the map
};

// g0 = gamma_e <S_x> dB1, Gamma_P = 4 g0^2 / kappa, theta = 4 g0 beta t_p / sqrt(kappa).
CouplingMap coupling_map(const GridField& b1, double sx_element, double gamma_e,
                         const ResonatorParams& params, const PulseParams& pulse);

}  // namespace donorspin
