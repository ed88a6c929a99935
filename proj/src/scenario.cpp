#include "donorspin/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "donorspin/csv.hpp"

namespace donorspin {

namespace {

struct Bindings {
  std::map<std::string, double ScenarioParams::*> doubles;
  std::map<std::string, bool ScenarioParams::*> bools;
  std::map<std::string, std::string ScenarioParams::*> strings;
  std::map<std::string, std::vector<double> ScenarioParams::*> arrays;
};

const Bindings& bindings() {
  static const Bindings b = [] {
    Bindings t;
    auto& d = t.doubles;
    d["spin.nuclear_spin"] = &ScenarioParams::spin_nuclear_spin;
    d["spin.hyperfine_GHz"] = &ScenarioParams::spin_hyperfine_ghz;
    d["spin.gamma_e_GHz_per_T"] = &ScenarioParams::spin_gamma_e_ghz_per_t;
    d["spin.gamma_n_MHz_per_T"] = &ScenarioParams::spin_gamma_n_mhz_per_t;
    d["spin.strain_k"] = &ScenarioParams::spin_strain_k;
    d["spin.strain_l"] = &ScenarioParams::spin_strain_l;
    d["spin.stark_eta_um2_per_V2"] = &ScenarioParams::spin_stark_eta_um2_per_v2;
    d["resonator.omega0_GHz"] = &ScenarioParams::resonator_omega0_ghz;
    d["resonator.z0_ohm"] = &ScenarioParams::resonator_z0_ohm;
    d["resonator.kappa_i_per_s"] = &ScenarioParams::resonator_kappa_i_per_s;
    d["resonator.kappa_c_per_s"] = &ScenarioParams::resonator_kappa_c_per_s;
    d["wire.width_um"] = &ScenarioParams::wire_width_um;
    d["wire.thickness_nm"] = &ScenarioParams::wire_thickness_nm;
    d["wire.length_um"] = &ScenarioParams::wire_length_um;
    d["wire.lambda_london_nm"] = &ScenarioParams::wire_lambda_london_nm;
    d["geometry.domain_halfwidth_um"] = &ScenarioParams::geometry_domain_halfwidth_um;
    d["geometry.domain_depth_um"] = &ScenarioParams::geometry_domain_depth_um;
    d["geometry.map_halfwidth_um"] = &ScenarioParams::geometry_map_halfwidth_um;
    d["geometry.map_depth_nm"] = &ScenarioParams::geometry_map_depth_nm;
    d["mesh.edge_resolution_nm"] = &ScenarioParams::mesh_edge_resolution_nm;
    d["mesh.surface_resolution_nm"] = &ScenarioParams::mesh_surface_resolution_nm;
    d["mesh.growth"] = &ScenarioParams::mesh_growth;
    d["mesh.film_layers"] = &ScenarioParams::mesh_film_layers;
    d["film.alpha_per_K"] = &ScenarioParams::film_alpha_per_k;
    d["film.youngs_GPa"] = &ScenarioParams::film_youngs_gpa;
    d["film.poisson"] = &ScenarioParams::film_poisson;
    d["film.c11_GPa"] = &ScenarioParams::film_c11_gpa;
    d["film.c12_GPa"] = &ScenarioParams::film_c12_gpa;
    d["film.c44_GPa"] = &ScenarioParams::film_c44_gpa;
    d["substrate.alpha_per_K"] = &ScenarioParams::substrate_alpha_per_k;
    d["substrate.c11_GPa"] = &ScenarioParams::substrate_c11_gpa;
    d["substrate.c12_GPa"] = &ScenarioParams::substrate_c12_gpa;
    d["substrate.c44_GPa"] = &ScenarioParams::substrate_c44_gpa;
    d["thermal.t_dep_K"] = &ScenarioParams::thermal_t_dep_k;
    d["thermal.t_op_K"] = &ScenarioParams::thermal_t_op_k;
    d["donor.peak_depth_nm"] = &ScenarioParams::donor_peak_depth_nm;
    d["donor.sigma_nm"] = &ScenarioParams::donor_sigma_nm;
    d["donor.peak_density_per_um3"] = &ScenarioParams::donor_peak_density_per_um3;
    d["pulse.beta"] = &ScenarioParams::pulse_beta;
    d["pulse.beta2"] = &ScenarioParams::pulse_beta2;
    d["pulse.t_p_us"] = &ScenarioParams::pulse_t_p_us;
    d["pulse.t_rep_s"] = &ScenarioParams::pulse_t_rep_s;
    d["pulse.bandwidth_kHz"] = &ScenarioParams::pulse_bandwidth_khz;
    d["spectrum.b0_min_mT"] = &ScenarioParams::spectrum_b0_min_mt;
    d["spectrum.b0_max_mT"] = &ScenarioParams::spectrum_b0_max_mt;
    d["spectrum.b0_step_uT"] = &ScenarioParams::spectrum_b0_step_ut;
    d["spectrum.sigma_b_factor"] = &ScenarioParams::spectrum_sigma_b_factor;
    d["spectrum.branch_weight"] = &ScenarioParams::spectrum_branch_weight;
    d["schottky.depth_nm"] = &ScenarioParams::schottky_depth_nm;
    d["bath.sigma1_per_cm2"] = &ScenarioParams::bath_sigma1_per_cm2;
    d["bath.sigma2_per_cm2"] = &ScenarioParams::bath_sigma2_per_cm2;
    d["bath.interp_width_nm"] = &ScenarioParams::bath_interp_width_nm;
    d["bath.realizations"] = &ScenarioParams::bath_realizations;
    d["bath.margin_um"] = &ScenarioParams::bath_margin_um;
    d["noise.gamma_non_per_s"] = &ScenarioParams::noise_gamma_non_per_s;
    d["noise.c_t2"] = &ScenarioParams::noise_c_t2;
    d["charge.e_r_mV_per_nm"] = &ScenarioParams::charge_e_r_mv_per_nm;
    d["charge.sqrt_s_v_mV"] = &ScenarioParams::charge_sqrt_s_v_mv;
    d["charge.field_per_volt_per_m"] = &ScenarioParams::charge_field_per_volt_per_m;
    d["screening.lambda_nm"] = &ScenarioParams::screening_lambda_nm;
    d["screening.film_thickness_nm"] = &ScenarioParams::screening_film_thickness_nm;
    d["screening.oxide_gap_nm"] = &ScenarioParams::screening_oxide_gap_nm;
    d["screening.kmax_factor"] = &ScenarioParams::screening_kmax_factor;
    d["screening.rel_tol"] = &ScenarioParams::screening_rel_tol;
    d["screening.sigma_per_cm2"] = &ScenarioParams::screening_sigma_per_cm2;
    d["screening.depth_min_nm"] = &ScenarioParams::screening_depth_min_nm;
    d["screening.depth_max_nm"] = &ScenarioParams::screening_depth_max_nm;
    d["screening.depth_points"] = &ScenarioParams::screening_depth_points;
    d["levels.b0_min_mT"] = &ScenarioParams::levels_b0_min_mt;
    d["levels.b0_max_mT"] = &ScenarioParams::levels_b0_max_mt;
    d["levels.points"] = &ScenarioParams::levels_points;
    d["transitions.b0_mT"] = &ScenarioParams::transitions_b0_mt;
    d["clock.line"] = &ScenarioParams::clock_line;
    d["target.line"] = &ScenarioParams::target_line;
    d["target.branch"] = &ScenarioParams::target_branch;
    d["target.f_delta_MHz"] = &ScenarioParams::target_f_delta_mhz;
    d["rabi.beta_max"] = &ScenarioParams::rabi_beta_max;
    d["rabi.points"] = &ScenarioParams::rabi_points;
    d["id.rho_per_cm3"] = &ScenarioParams::id_rho_per_cm3;
    d["id.gamma_res_per_s"] = &ScenarioParams::id_gamma_res_per_s;
    d["id.broadening_MHz"] = &ScenarioParams::id_broadening_mhz;
    d["id.points"] = &ScenarioParams::id_points;
    d["dd.alpha"] = &ScenarioParams::dd_alpha;
    d["dd.t2_single_ms"] = &ScenarioParams::dd_t2_single_ms;
    d["dd.n_max"] = &ScenarioParams::dd_n_max;
    d["thermal.n_th_max"] = &ScenarioParams::thermal_n_th_max;
    d["thermal.points"] = &ScenarioParams::thermal_points;
    d["run.seed"] = &ScenarioParams::run_seed;
    t.bools["film.cubic"] = &ScenarioParams::film_cubic;
    t.bools["spectrum.magnitude_detection"] = &ScenarioParams::spectrum_magnitude_detection;
    t.bools["noise.screening_correction"] = &ScenarioParams::noise_screening_correction;
    t.strings["preset"] = &ScenarioParams::preset;
    t.strings["noise.gamma_non_model"] = &ScenarioParams::noise_gamma_non_model;
    t.strings["wire.current_model"] = &ScenarioParams::wire_current_model;
    t.strings["bath.method"] = &ScenarioParams::bath_method;
    t.arrays["spectrum.weights"] = &ScenarioParams::spectrum_weights;
    t.arrays["donor.profile_depth_nm"] = &ScenarioParams::donor_profile_depth_nm;
    t.arrays["donor.profile_density_per_um3"] = &ScenarioParams::donor_profile_density_per_um3;
    return t;
  }();
  return b;
}

}  // namespace

ScenarioParams ScenarioParams::preset_named(const std::string& name) {
  ScenarioParams p;
  p.preset = name;
  p.noise_c_t2 = 2.0;
  if (name == "res1" || name == "custom") {
    // defaults above are Res1
  } else if (name == "res2") {
    p.resonator_omega0_ghz = 7.402;
    p.resonator_z0_ohm = 40.0;
    p.resonator_kappa_i_per_s = 4.6e5;
    p.resonator_kappa_c_per_s = 4.6e5;
    p.wire_width_um = 2.0;
    p.wire_length_um = 450.0;
    p.geometry_domain_halfwidth_um = 20.0;
    p.geometry_domain_depth_um = 10.0;
    p.geometry_map_halfwidth_um = 12.0;
    p.pulse_beta = 2.25e5;
    p.pulse_beta2 = 6.75e5;
    p.pulse_t_rep_s = 2.0;
    p.thermal_t_dep_k = 230.0;
    p.spectrum_b0_min_mt = 0.6;
    p.spectrum_b0_max_mt = 2.6;
    p.spectrum_weights = {1, 1, 1, 1, 1, 1, 1.8, 1.5, 1.2, 1};
    p.target_line = 10;
    p.target_branch = 0;
  } else if (name == "res3") {
    p.resonator_omega0_ghz = 6.945;
    p.resonator_z0_ohm = 45.0;
    p.resonator_kappa_i_per_s = 5.5e5;
    p.resonator_kappa_c_per_s = 1.5e5;
    p.wire_width_um = 1.0;
    p.wire_length_um = 450.0;
    p.geometry_domain_halfwidth_um = 10.0;
    p.geometry_domain_depth_um = 5.0;
    p.geometry_map_halfwidth_um = 8.0;
    p.pulse_beta = 5e4;
    p.pulse_beta2 = 1.5e5;
    p.pulse_t_rep_s = 0.5;
    p.thermal_t_dep_k = 190.0;
    p.spectrum_b0_min_mt = 15.5;
    p.spectrum_b0_max_mt = 18.0;
  } else {
    throw ConfigError("unknown preset '" + name + "' (use res1, res2, res3 or custom)");
  }
  if (name == "res1") p.spectrum_weights = {1, 1.2, 1, 1, 1, 1, 1, 1, 1, 1};
  return p;
}

std::vector<std::string> ScenarioParams::registered_keys() {
  std::vector<std::string> keys;
  const Bindings& b = bindings();
  for (const auto& [k, _] : b.doubles) keys.push_back(k);
  for (const auto& [k, _] : b.bools) keys.push_back(k);
  for (const auto& [k, _] : b.strings) keys.push_back(k);
  for (const auto& [k, _] : b.arrays) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  return keys;
}

void ScenarioParams::apply(const TomlTable& table) {
  const Bindings& b = bindings();
  std::vector<std::string> bad;
  for (const auto& [key, value] : table.items()) {
    if (auto it = b.doubles.find(key); it != b.doubles.end()) {
      if (!value.is_number()) {
        bad.push_back(key + " (expected a number)");
        continue;
      }
      this->*(it->second) = std::get<double>(value.v);
    } else if (auto ib = b.bools.find(key); ib != b.bools.end()) {
      if (!value.is_bool()) {
        bad.push_back(key + " (expected true/false)");
        continue;
      }
      this->*(ib->second) = std::get<bool>(value.v);
    } else if (auto is = b.strings.find(key); is != b.strings.end()) {
      if (!value.is_string()) {
        bad.push_back(key + " (expected a string)");
        continue;
      }
      this->*(is->second) = std::get<std::string>(value.v);
    } else if (auto ia = b.arrays.find(key); ia != b.arrays.end()) {
      if (!std::holds_alternative<std::vector<double>>(value.v)) {
        bad.push_back(key + " (expected a numeric array)");
        continue;
      }
      this->*(ia->second) = std::get<std::vector<double>>(value.v);
    } else {
      bad.push_back(key + " (unknown key)");
    }
  }
  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& m : bad) msg += "\n  " + m;
    throw ConfigError(msg);
  }
}

void ScenarioParams::apply_override(const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  std::string value = assignment.substr(eq + 1);
  // String-typed keys take the raw text; shells usually eat the quotes.
  if (bindings().strings.count(key) && (value.empty() || value.front() != '"'))
    value = "\"" + value + "\"";
  TomlTable t;
  try {
    t = TomlTable::parse(key + " = " + value);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad override: ") + e.what());
  }
  apply(t);
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string ScenarioParams::manifest_parameters_json() const {
  const Bindings& b = bindings();
  std::map<std::string, std::string> rendered;
  for (const auto& [k, m] : b.doubles) rendered[k] = format_g9(this->*m);
  for (const auto& [k, m] : b.bools) rendered[k] = (this->*m) ? "true" : "false";
  for (const auto& [k, m] : b.strings) rendered[k] = "\"" + json_escape(this->*m) + "\"";
  for (const auto& [k, m] : b.arrays) {
    std::string s = "[";
    const auto& arr = this->*m;
    for (std::size_t i = 0; i < arr.size(); ++i)
      s += format_g9(arr[i]) + (i + 1 < arr.size() ? "," : "");
    rendered[k] = s + "]";
  }
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : rendered) {
    out += std::string(first ? "" : ",") + "\n    \"" + json_escape(k) + "\": " + v;
    first = false;
  }
  return out + "\n  }";
}

SpinSystem ScenarioParams::spin_system() const {
  SpinSystem s;
  s.nuclear_spin = spin_nuclear_spin;
  s.hyperfine = kTwoPi * spin_hyperfine_ghz * 1e9;
  s.gamma_e = kTwoPi * spin_gamma_e_ghz_per_t * 1e9;
  s.gamma_n = kTwoPi * spin_gamma_n_mhz_per_t * 1e6;
  s.strain_k = spin_strain_k;
  s.strain_l = spin_strain_l;
  s.stark_eta = spin_stark_eta_um2_per_v2 * 1e-12;
  if (!(s.hyperfine > 0) || !(s.gamma_e > 0))
    throw ConfigError("spin.hyperfine_GHz and spin.gamma_e_GHz_per_T must be > 0");
  return s;
}

ResonatorParams ScenarioParams::resonator() const {
  ResonatorParams r;
  r.omega0 = kTwoPi * resonator_omega0_ghz * 1e9;
  r.z0 = resonator_z0_ohm;
  r.kappa_i = resonator_kappa_i_per_s;
  r.kappa_c = resonator_kappa_c_per_s;
  try {
    r.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return r;
}

DeviceGeometry ScenarioParams::geometry() const {
  DeviceGeometry g;
  g.wire_width = wire_width_um * 1e-6;
  g.wire_thickness = wire_thickness_nm * 1e-9;
  g.wire_length = wire_length_um * 1e-6;
  g.domain_halfwidth = geometry_domain_halfwidth_um * 1e-6;
  g.domain_depth = geometry_domain_depth_um * 1e-6;
  g.t_dep = thermal_t_dep_k;
  g.t_op = thermal_t_op_k;
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return g;
}

MaterialProps ScenarioParams::film_material() const {
  try {
    if (film_cubic)
      return MaterialProps::cubic(film_c11_gpa * 1e9, film_c12_gpa * 1e9, film_c44_gpa * 1e9,
                                  film_alpha_per_k);
    return MaterialProps::isotropic(film_youngs_gpa * 1e9, film_poisson, film_alpha_per_k);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("film material: ") + e.what());
  }
}

MaterialProps ScenarioParams::substrate_material() const {
  try {
    return MaterialProps::cubic(substrate_c11_gpa * 1e9, substrate_c12_gpa * 1e9,
                                substrate_c44_gpa * 1e9, substrate_alpha_per_k);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("substrate material: ") + e.what());
  }
}

MeshOptions ScenarioParams::mesh_options() const {
  MeshOptions m;
  m.edge_resolution = mesh_edge_resolution_nm * 1e-9;
  m.surface_resolution = mesh_surface_resolution_nm * 1e-9;
  m.growth = mesh_growth;
  m.film_layers = static_cast<int>(mesh_film_layers);
  if (m.film_layers < 1 || !(m.growth > 1))
    throw ConfigError("mesh.film_layers must be >= 1 and mesh.growth > 1");
  return m;
}

DonorProfile ScenarioParams::donor_profile() const {
  if (!donor_profile_depth_nm.empty() || !donor_profile_density_per_um3.empty()) {
    if (donor_profile_depth_nm.size() != donor_profile_density_per_um3.size() ||
        donor_profile_depth_nm.size() < 2)
      throw ConfigError("donor.profile_depth_nm and donor.profile_density_per_um3 "
                        "must have equal length >= 2");
    DonorProfile p;
    for (std::size_t i = 0; i < donor_profile_depth_nm.size(); ++i) {
      p.depth.push_back(donor_profile_depth_nm[i] * 1e-9);
      p.density.push_back(donor_profile_density_per_um3[i] * 1e18);
      if (p.density.back() < 0) throw ConfigError("donor densities must be >= 0");
      if (i > 0 && p.depth[i] <= p.depth[i - 1])
        throw ConfigError("donor.profile_depth_nm must be strictly increasing");
    }
    return p;
  }
  return DonorProfile::gaussian(donor_peak_depth_nm * 1e-9, donor_sigma_nm * 1e-9,
                                donor_peak_density_per_um3 * 1e18);
}

PulseParams ScenarioParams::pulse() const {
  PulseParams p;
  p.beta = pulse_beta;
  p.t_p = pulse_t_p_us * 1e-6;
  p.t_rep = pulse_t_rep_s;
  p.bandwidth = kTwoPi * pulse_bandwidth_khz * 1e3;
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return p;
}

TransitionWeights ScenarioParams::weights() const {
  if (spectrum_weights.size() != 10)
    throw ConfigError("spectrum.weights must have exactly 10 entries");
  TransitionWeights w;
  for (int i = 0; i < 10; ++i) {
    if (spectrum_weights[i] < 0) throw ConfigError("spectrum.weights must be >= 0");
    w.p[i] = spectrum_weights[i];
  }
  return w;
}

SpectrumOptions ScenarioParams::spectrum_options() const {
  SpectrumOptions o;
  o.sigma_b_factor = spectrum_sigma_b_factor;
  o.magnitude_detection = spectrum_magnitude_detection;
  o.branch_weight = spectrum_branch_weight;
  return o;
}

SurfaceBath ScenarioParams::surface_bath() const {
  SurfaceBath b;
  b.sigma1 = bath_sigma1_per_cm2 * 1e4;
  b.sigma2 = bath_sigma2_per_cm2 * 1e4;
  b.interp_width = bath_interp_width_nm * 1e-9;
  b.wire_width = wire_width_um * 1e-6;
  try {
    b.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return b;
}

ScreeningConfig ScenarioParams::screening_config() const {
  ScreeningConfig c;
  c.film_thickness = screening_film_thickness_nm * 1e-9;
  c.oxide_gap = screening_oxide_gap_nm * 1e-9;
  c.lambda = screening_lambda_nm <= 0 ? std::numeric_limits<double>::infinity()
                                      : screening_lambda_nm * 1e-9;
  c.kmax_factor = screening_kmax_factor;
  c.rel_tol = screening_rel_tol;
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return c;
}

double ScenarioParams::sqrt_s_e() const {
  return charge_field_per_volt_per_m * charge_sqrt_s_v_mv * 1e-3;
}

}  // namespace donorspin
