#pragma once

#include <string>
#include <vector>

#include "donorspin/scenario.hpp"

namespace donorspin {

inline constexpr const char* kVersion = "0.1.0";

// Strain solve plus the donor-region maps every echo pipeline consumes.
struct MapBundle {
  SpinSystem sys;
  StrainField strain;   // full FEM grid
  ShiftMap shift_full;  // full FEM grid
  EchoModel echo;       // donor-region map grid
};

MapBundle build_maps(const ScenarioParams& p);

// Noise and T2 maps for one transition on the bundle's grid.
struct CoherenceMaps {
  NoiseMap noise;
  T2Map t2;
  double field = 0.0;      // B0 probing target.f_delta on target.line
  double gamma_eff = 0.0;  // at that field
  double sx = 0.0;
};

CoherenceMaps build_coherence_maps(const ScenarioParams& p, const MapBundle& maps);

// Charge-noise rate map: Gamma_non(x, y) from the strip-electrode field shape
// normalized so the rate at (0, donor peak depth) matches the configured
// sqrt(S_E).
std::vector<double> charge_noise_rate_map(const ScenarioParams& p, const RectGrid& grid);

// Executes one CLI subcommand; writes CSV artifacts plus manifest.json into
// out_dir and returns the list of files written.
std::vector<std::string> run_subcommand(const std::string& name, const ScenarioParams& p,
                                        const std::string& out_dir);

const std::vector<std::string>& subcommand_names();

}  // namespace donorspin
