#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "donorspin/decoherence.hpp"
#include "donorspin/device_model.hpp"
#include "donorspin/meissner.hpp"
#include "donorspin/spectroscopy.hpp"
#include "donorspin/strain_solver.hpp"
#include "donorspin/toml_lite.hpp"

namespace donorspin {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every tunable of the pipeline in the units the config files use. Presets
// res1/res2/res3 carry the published resonator and material tables; "custom"
// starts from res1. The same table of bindings drives TOML parsing,
// --override handling and the run manifest, so a parameter cannot be consumed
// without appearing in the manifest.
struct ScenarioParams {
  std::string preset = "res1";

  // spin
  double spin_nuclear_spin = 4.5;
  double spin_hyperfine_ghz = 1.475;
  double spin_gamma_e_ghz_per_t = 28.0;
  double spin_gamma_n_mhz_per_t = 7.0;
  double spin_strain_k = 19.1;
  double spin_strain_l = 9720.0;
  double spin_stark_eta_um2_per_v2 = -0.26e-3;

  // resonator (Table 1)
  double resonator_omega0_ghz = 7.338;
  double resonator_z0_ohm = 40.0;
  double resonator_kappa_i_per_s = 4.6e5;
  double resonator_kappa_c_per_s = 4.6e5;

  // wire and simulation domain
  double wire_width_um = 5.0;
  double wire_thickness_nm = 50.0;
  double wire_length_um = 700.0;
  double wire_lambda_london_nm = 50.0;
  std::string wire_current_model = "strip";
  double geometry_domain_halfwidth_um = 50.0;
  double geometry_domain_depth_um = 25.0;
  double geometry_map_halfwidth_um = 25.0;
  double geometry_map_depth_nm = 400.0;

  // mesh
  double mesh_edge_resolution_nm = 10.0;
  double mesh_surface_resolution_nm = 5.0;
  double mesh_growth = 1.30;
  double mesh_film_layers = 4;

  // materials (Table 2)
  double film_alpha_per_k = 14.3e-6;
  double film_youngs_gpa = 70.0;
  double film_poisson = 0.33;
  bool film_cubic = false;
  double film_c11_gpa = 103.0;
  double film_c12_gpa = 51.0;
  double film_c44_gpa = 26.0;
  double substrate_alpha_per_k = 0.7e-6;
  double substrate_c11_gpa = 166.0;
  double substrate_c12_gpa = 64.0;
  double substrate_c44_gpa = 80.0;
  double thermal_t_dep_k = 300.0;
  double thermal_t_op_k = 0.015;

  // donors
  double donor_peak_depth_nm = 75.0;
  double donor_sigma_nm = 25.0;
  double donor_peak_density_per_um3 = 4e4;
  std::vector<double> donor_profile_depth_nm;       // optional tabulated profile
  std::vector<double> donor_profile_density_per_um3;

  // pulses (beta calibrated per resonator, see README)
  double pulse_beta = 5e5;
  double pulse_beta2 = 1.5e6;
  double pulse_t_p_us = 2.0;
  double pulse_t_rep_s = 10.0;
  double pulse_bandwidth_khz = 150.0;

  // spectrum
  double spectrum_b0_min_mt = 1.0;
  double spectrum_b0_max_mt = 5.0;
  double spectrum_b0_step_ut = 4.0;
  double spectrum_sigma_b_factor = 0.2;
  bool spectrum_magnitude_detection = true;
  double spectrum_branch_weight = 1.0;
  std::vector<double> spectrum_weights{1, 1, 1, 1, 1, 1, 1, 1, 1, 1};

  // Schottky depletion (0 = none)
  double schottky_depth_nm = 0.0;

  // surface bath
  double bath_sigma1_per_cm2 = 4e12;
  double bath_sigma2_per_cm2 = 1e12;
  double bath_interp_width_nm = 500.0;
  double bath_realizations = 200;
  double bath_margin_um = 3.0;
  std::string bath_method = "expectation";

  // coherence model
  double noise_gamma_non_per_s = 5.0;
  double noise_c_t2 = 1.0;
  bool noise_screening_correction = false;
  std::string noise_gamma_non_model = "constant";  // or "charge"

  // charge noise
  double charge_e_r_mv_per_nm = 0.1;
  double charge_sqrt_s_v_mv = 1.5;
  double charge_field_per_volt_per_m = 5.8e3;

  // Meissner screening
  double screening_lambda_nm = 50.0;
  double screening_film_thickness_nm = 50.0;
  double screening_oxide_gap_nm = 5.0;
  double screening_kmax_factor = 50.0;
  double screening_rel_tol = 1e-4;
  double screening_sigma_per_cm2 = 1e12;
  double screening_depth_min_nm = 20.0;
  double screening_depth_max_nm = 500.0;
  double screening_depth_points = 25;

  // per-subcommand knobs
  double levels_b0_min_mt = 0.0;
  double levels_b0_max_mt = 30.0;
  double levels_points = 301;
  double transitions_b0_mt = 1.4;
  double clock_line = 5;
  double target_line = 1;
  double target_branch = 1;
  double target_f_delta_mhz = -2.5;
  double rabi_beta_max = 3e7;
  double rabi_points = 120;
  double id_rho_per_cm3 = 5e14;
  double id_gamma_res_per_s = 133.0;
  double id_broadening_mhz = 1.0;
  double id_points = 25;
  double dd_alpha = 1.0;
  double dd_t2_single_ms = 7.5;
  double dd_n_max = 64;
  double thermal_n_th_max = 2.0;
  double thermal_points = 41;

  double run_seed = 1;

  static ScenarioParams preset_named(const std::string& name);
  static std::vector<std::string> registered_keys();

  // Unknown keys or type mismatches raise ConfigError listing the paths.
  void apply(const TomlTable& table);
  void apply_override(const std::string& assignment);  // "key=value"

  std::string manifest_parameters_json() const;  // all keys, sorted

  // Derived module inputs (base units).
  SpinSystem spin_system() const;
  ResonatorParams resonator() const;
  DeviceGeometry geometry() const;
  MaterialProps film_material() const;
  MaterialProps substrate_material() const;
  MeshOptions mesh_options() const;
  DonorProfile donor_profile() const;
  PulseParams pulse() const;
  TransitionWeights weights() const;
  SpectrumOptions spectrum_options() const;
  SurfaceBath surface_bath() const;
  ScreeningConfig screening_config() const;
  double sqrt_s_e() const;  // charge.field_per_volt x sqrt(S_V)
};

}  // namespace donorspin
