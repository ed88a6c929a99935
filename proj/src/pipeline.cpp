#include "donorspin/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "donorspin/csv.hpp"

namespace donorspin {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
  return v;
}

std::vector<double> b0_sweep(const ScenarioParams& p) {
  const double lo = p.spectrum_b0_min_mt * 1e-3;
  const double hi = p.spectrum_b0_max_mt * 1e-3;
  const double step = p.spectrum_b0_step_ut * 1e-6;
  if (!(hi > lo) || !(step > 0)) throw ConfigError("bad spectrum sweep range");
  const int n = static_cast<int>(std::lround((hi - lo) / step)) + 1;
  if (n < 3 || n > 2'000'000) throw ConfigError("spectrum sweep has unreasonable point count");
  return linspace(lo, hi, n);
}

RectGrid donor_region_grid(const ScenarioParams& p, const RectGrid& fem) {
  RectGrid g;
  const double xmax = p.geometry_map_halfwidth_um * 1e-6;
  const double ymax = p.geometry_map_depth_nm * 1e-9;
  for (double x : fem.x)
    if (std::abs(x) <= xmax * (1 + 1e-12)) g.x.push_back(x);
  for (double y : fem.y)
    if (y <= ymax * (1 + 1e-12)) g.y.push_back(y);
  if (g.x.size() < 4 || g.y.size() < 3)
    throw ConfigError("map region too small for the solver mesh");
  return g;
}

int target_branch_or_valid(const SpinSystem& sys, int line, int branch) {
  const auto ts = list_transitions(sys, levels_at(sys, 1e-3));
  if (find_transition(ts, line, branch)) return branch;
  const int other = 1 - branch;
  if (find_transition(ts, line, other)) return other;
  throw ConfigError("target.line has no such transition branch");
}

struct ManifestWriter {
  ordered_json files = ordered_json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::vector<std::string> written;

  void add_csv(const fs::path& dir, const std::string& name, const CsvWriter& csv) {
    const std::string text = csv.str();
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << text;
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a(text.data(), text.size())));
    files[name] = std::string(hex);
    written.push_back((dir / name).string());
  }

  void add_file(const fs::path& dir, const std::string& name, std::uint64_t hash) {
    char hex[20];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    files[name] = std::string(hex);
    written.push_back((dir / name).string());
  }

  void finish(const fs::path& dir, const std::string& subcommand, const ScenarioParams& p,
              ordered_json results = ordered_json::object()) {
    ordered_json m;
    m["program"] = "donorspin";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    m["seed"] = static_cast<std::uint64_t>(p.run_seed);
    // parameters rendered via the binding registry (sorted, all keys)
    m["parameters"] = ordered_json::parse(p.manifest_parameters_json());
    if (!results.empty()) m["results"] = results;
    m["outputs"] = files;
    m["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream f(dir / "manifest.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write manifest.json");
    f << m.dump(2) << "\n";
    written.push_back((dir / "manifest.json").string());
  }
};

fs::path prepare_out_dir(const std::string& out_dir) {
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

}  // namespace

MapBundle build_maps(const ScenarioParams& p) {
  MapBundle b;
  b.sys = p.spin_system();
  b.strain = solve_thermoelastic(p.geometry(), p.film_material(), p.substrate_material(),
                                 p.mesh_options());
  b.shift_full = shift_map(b.strain, b.sys);

  const RectGrid grid = donor_region_grid(p, b.strain.grid);
  b.echo.shift = resample(b.shift_full, grid);

  CurrentModel model;
  if (p.wire_current_model == "strip") {
    model = CurrentModel::kStrip;
  } else if (p.wire_current_model == "uniform") {
    model = CurrentModel::kUniform;
  } else {
    throw ConfigError("wire.current_model must be 'strip' or 'uniform'");
  }
  const auto dist = current_distribution(p.wire_width_um * 1e-6, p.wire_thickness_nm * 1e-9,
                                         p.wire_lambda_london_nm * 1e-9, model);
  b.echo.b1 = vacuum_field(p.resonator(), dist, grid, p.wire_thickness_nm * 1e-9);
  b.echo.profile = p.donor_profile();
  b.echo.resonator = p.resonator();
  b.echo.pulse = p.pulse();
  b.echo.wire_length = p.wire_length_um * 1e-6;
  b.echo.gamma_e = b.sys.gamma_e;
  if (p.schottky_depth_nm > 0)
    b.echo.density_mask = schottky_mask(grid, p.wire_width_um * 1e-6, p.schottky_depth_nm * 1e-9);
  return b;
}

CoherenceMaps build_coherence_maps(const ScenarioParams& p, const MapBundle& maps) {
  CoherenceMaps c;
  const int line = static_cast<int>(p.target_line);
  const int branch = target_branch_or_valid(maps.sys, line, static_cast<int>(p.target_branch));
  c.field = field_for_shift(maps.sys, line, branch, maps.echo.resonator.omega0,
                            p.target_f_delta_mhz * 1e6);
  c.gamma_eff = effective_gamma(maps.sys, line, branch, c.field);
  const auto ts = list_transitions(maps.sys, levels_at(maps.sys, c.field));
  c.sx = find_transition(ts, line, branch)->sx_element;

  const SurfaceBath bath = p.surface_bath();
  if (p.bath_method == "expectation") {
    c.noise = expected_noise_map(bath, maps.echo.shift.grid);
  } else if (p.bath_method == "monte-carlo") {
    const auto extent = bath_extent(maps.echo.shift.grid, p.bath_margin_um * 1e-6);
    c.noise = noise_map(bath, extent, maps.echo.shift.grid,
                        static_cast<int>(p.bath_realizations),
                        static_cast<std::uint64_t>(p.run_seed));
  } else {
    throw ConfigError("bath.method must be 'expectation' or 'monte-carlo'");
  }
  if (p.noise_screening_correction) {
    const auto table = averaged_noise_vs_depth(
        p.screening_config(), p.screening_sigma_per_cm2 * 1e4,
        linspace(std::max(1e-9, maps.echo.shift.grid.y.front() + 1e-9),
                 maps.echo.shift.grid.y.back() + 1e-9, 24));
    apply_depth_factor(c.noise, table.depth, table.enhancement);
  }
  if (p.noise_gamma_non_model == "charge") {
    c.t2 = t2_map(c.noise, c.gamma_eff,
                  charge_noise_rate_map(p, maps.echo.shift.grid), p.noise_c_t2);
  } else if (p.noise_gamma_non_model == "constant") {
    c.t2 = t2_map(c.noise, c.gamma_eff, p.noise_gamma_non_per_s, p.noise_c_t2);
  } else {
    throw ConfigError("noise.gamma_non_model must be 'constant' or 'charge'");
  }
  return c;
}

std::vector<double> charge_noise_rate_map(const ScenarioParams& p, const RectGrid& grid) {
  const SpinSystem sys = p.spin_system();
  const GridField shape = strip_field_shape(grid, p.wire_width_um * 1e-6);
  const double ref =
      sample_bilinear(grid, shape.v, 0.0, p.donor_peak_depth_nm * 1e-9);
  if (!(ref > 0)) throw ConfigError("charge map reference point outside grid");
  const double e_r = p.charge_e_r_mv_per_nm * 1e6;  // mV/nm -> V/m
  const double rate_ref = 1.0 / charge_noise_t2(e_r, p.sqrt_s_e(), sys);
  std::vector<double> rate(grid.size());
  for (std::size_t k = 0; k < rate.size(); ++k) rate[k] = rate_ref * shape.v[k] / ref;
  return rate;
}

namespace {

void run_levels(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw) {
  const SpinSystem sys = p.spin_system();
  const auto b0s = linspace(p.levels_b0_min_mt * 1e-3, p.levels_b0_max_mt * 1e-3,
                            static_cast<int>(p.levels_points));
  std::vector<std::string> cols{"b0_T"};
  const auto labels = levels_at(sys, std::max(b0s.back(), 1e-4)).labels;
  for (const auto& l : labels)
    cols.push_back("e_f" + std::to_string(l.f) + "_m" + std::to_string(l.m) + "_GHz");
  CsvWriter csv(cols, {"eigenfrequencies of the donor spin Hamiltonian",
                       "columns labeled by |F,m> assignment at the sweep end"});
  for (double b0 : b0s) {
    const auto lv = levels_at(sys, b0);
    std::vector<double> row{b0};
    for (int k = 0; k < lv.eigenvalues.size(); ++k) row.push_back(lv.eigenvalues(k) / kTwoPi / 1e9);
    csv.add_row(row);
  }
  mw.add_csv(dir, "levels.csv", csv);
}

void run_transitions(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw) {
  const SpinSystem sys = p.spin_system();
  const double b0 = p.transitions_b0_mt * 1e-3;
  const auto ts = list_transitions(sys, levels_at(sys, b0));
  CsvWriter csv({"line", "branch", "lower_m", "upper_m", "freq_GHz", "sx_element",
                 "gamma_eff_GHz_per_T"},
                {"EPR transitions at b0_T = " + format_g9(b0)});
  for (const auto& t : ts) {
    const double ge = effective_gamma(sys, t.line, t.branch, b0);
    csv.add_row({static_cast<double>(t.line), static_cast<double>(t.branch),
                 static_cast<double>(t.lower_m), static_cast<double>(t.upper_m),
                 t.omega / kTwoPi / 1e9, t.sx_element, ge / kTwoPi / 1e9});
  }
  mw.add_csv(dir, "transitions.csv", csv);
}

void run_clock(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw,
               ordered_json& results) {
  const SpinSystem sys = p.spin_system();
  CsvWriter csv({"line", "found", "branch", "b_ct_T", "freq_GHz", "gamma_eff_GHz_per_T"},
                {"clock transitions (zero d omega / d B0) searched in (0, 100 mT)"});
  for (int line = 1; line <= 10; ++line) {
    const auto ct = find_clock_transition(sys, line);
    if (ct) {
      const auto ts = list_transitions(sys, levels_at(sys, ct->field));
      const auto t = find_transition(ts, line, ct->branch);
      const double ge = effective_gamma(sys, line, ct->branch, ct->field);
      csv.add_row({static_cast<double>(line), 1.0, static_cast<double>(ct->branch), ct->field,
                   t->omega / kTwoPi / 1e9, ge / kTwoPi / 1e9});
      if (line == static_cast<int>(p.clock_line)) {
        results["b0_ct_T"] = ct->field;
        results["freq_ct_GHz"] = t->omega / kTwoPi / 1e9;
      }
    } else {
      csv.add_row({static_cast<double>(line), 0.0, 0.0, 0.0, 0.0, 0.0});
    }
  }
  mw.add_csv(dir, "clock.csv", csv);
}

void run_strain(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw) {
  const auto maps = build_maps(p);
  const auto hydro = hydrostatic(maps.strain);
  {
    CsvWriter csv({"x_m", "y_m", "exx", "eyy", "ezz", "exy", "hydrostatic"},
                  {"thermoelastic strain in the substrate (y = depth below surface)"});
    const RectGrid& g = maps.strain.grid;
    for (std::size_t iy = 0; iy < g.ny(); ++iy)
      for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        const std::size_t k = g.index(ix, iy);
        csv.add_row({g.x[ix], g.y[iy], maps.strain.exx[k], maps.strain.eyy[k],
                     maps.strain.ezz[k], maps.strain.exy[k], hydro[k]});
      }
    mw.add_csv(dir, "strain.csv", csv);
    write_binary_grid((dir / "strain.bin").string(), g.x, g.y,
                      {&maps.strain.exx, &maps.strain.eyy, &maps.strain.ezz, &maps.strain.exy});
    std::uint64_t h = fnv1a(maps.strain.exx);
    h = fnv1a(maps.strain.eyy.data(), maps.strain.eyy.size() * 8, h);
    mw.add_file(dir, "strain.bin", h);
  }
  {
    CsvWriter csv({"x_m", "y_m", "f_delta_Hz"}, {"strain-induced frequency shift map"});
    const RectGrid& g = maps.shift_full.grid;
    for (std::size_t iy = 0; iy < g.ny(); ++iy)
      for (std::size_t ix = 0; ix < g.nx(); ++ix)
        csv.add_row({g.x[ix], g.y[iy], maps.shift_full.f_delta[g.index(ix, iy)]});
    mw.add_csv(dir, "shift.csv", csv);
    write_binary_grid((dir / "shift.bin").string(), g.x, g.y, {&maps.shift_full.f_delta});
    mw.add_file(dir, "shift.bin", fnv1a(maps.shift_full.f_delta));
  }
  {
    // coupling map of the target transition on the donor-region grid
    const int line = static_cast<int>(p.target_line);
    const int branch = target_branch_or_valid(maps.sys, line, static_cast<int>(p.target_branch));
    const double field = field_for_shift(maps.sys, line, branch, maps.echo.resonator.omega0,
                                         p.target_f_delta_mhz * 1e6);
    const auto ts = list_transitions(maps.sys, levels_at(maps.sys, field));
    const double sx = find_transition(ts, line, branch)->sx_element;
    const auto cmap = coupling_map(maps.echo.b1, sx, maps.sys.gamma_e, maps.echo.resonator,
                                   maps.echo.pulse);
    CsvWriter csv({"x_m", "y_m", "b1_T", "g0_rad_per_s", "gamma_p_per_s", "theta_rad"},
                  {"vacuum field and spin-photon coupling for the target transition"});
    const RectGrid& g = cmap.grid;
    for (std::size_t iy = 0; iy < g.ny(); ++iy)
      for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        const std::size_t k = g.index(ix, iy);
        csv.add_row({g.x[ix], g.y[iy], cmap.b1[k], cmap.g0[k], cmap.gamma_p[k], cmap.theta[k]});
      }
    mw.add_csv(dir, "coupling.csv", csv);
    write_binary_grid((dir / "coupling.bin").string(), g.x, g.y,
                      {&cmap.b1, &cmap.g0, &cmap.gamma_p, &cmap.theta});
    std::uint64_t h = fnv1a(cmap.b1);
    h = fnv1a(cmap.g0.data(), cmap.g0.size() * 8, h);
    mw.add_file(dir, "coupling.bin", h);
  }
}

void run_spectrum(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw) {
  const auto maps = build_maps(p);
  const auto sweep = b0_sweep(p);
  const auto spec = total_spectrum(maps.sys, maps.echo, p.weights(), sweep,
                                   p.spectrum_options());
  std::vector<std::string> cols{"b0_T", "chi_total"};
  for (int i = 1; i <= 10; ++i) cols.push_back("chi_line" + std::to_string(i));
  CsvWriter csv(cols, {"echo-detected field-swept spectrum (arbitrary units)"});
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    std::vector<double> row{sweep[i], spec.total[i]};
    for (int l = 0; l < 10; ++l) row.push_back(spec.components[l][i]);
    csv.add_row(row);
  }
  mw.add_csv(dir, "spectrum.csv", csv);
}

void run_rabi(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw,
              ordered_json& results) {
  const auto maps = build_maps(p);
  const int line = static_cast<int>(p.target_line);
  const int branch = target_branch_or_valid(maps.sys, line, static_cast<int>(p.target_branch));
  const double field = field_for_shift(maps.sys, line, branch, maps.echo.resonator.omega0,
                                       p.target_f_delta_mhz * 1e6);
  const auto ts = list_transitions(maps.sys, levels_at(maps.sys, field));
  const double sx = find_transition(ts, line, branch)->sx_element;
  const auto betas = linspace(0.0, p.rabi_beta_max, static_cast<int>(p.rabi_points));
  const auto chi = rabi_response(maps.echo, sx, p.target_f_delta_mhz * 1e6,
                                 maps.echo.resonator.kappa() / kTwoPi, betas);
  CsvWriter csv({"beta", "chi_e"}, {"echo amplitude against pulse amplitude"});
  for (std::size_t i = 0; i < betas.size(); ++i) csv.add_row({betas[i], chi[i]});
  mw.add_csv(dir, "rabi.csv", csv);
  results["b0_T"] = field;
  results["sx_element"] = sx;
}

void run_coherence_map(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw,
                       ordered_json& results) {
  const auto maps = build_maps(p);
  const auto coh = build_coherence_maps(p, maps);
  const RectGrid& g = coh.noise.grid;
  CsvWriter csv({"x_m", "y_m", "db_T", "t2_s"},
                {"surface-bath rms field and coherence map for the target transition"});
  for (std::size_t iy = 0; iy < g.ny(); ++iy)
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const std::size_t k = g.index(ix, iy);
      csv.add_row({g.x[ix], g.y[iy], coh.noise.db[k], coh.t2.t2[k]});
    }
  mw.add_csv(dir, "coherence_map.csv", csv);
  write_binary_grid((dir / "coherence_map.bin").string(), g.x, g.y,
                    {&coh.noise.db, &coh.t2.t2});
  std::uint64_t h = fnv1a(coh.noise.db);
  h = fnv1a(coh.t2.t2.data(), coh.t2.t2.size() * 8, h);
  mw.add_file(dir, "coherence_map.bin", h);
  results["b0_T"] = coh.field;
  results["gamma_eff_GHz_per_T"] = coh.gamma_eff / kTwoPi / 1e9;
}

void run_decay(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw,
               ordered_json& results) {
  const auto maps = build_maps(p);
  const auto coh = build_coherence_maps(p, maps);
  const auto curve = aggregate_echo_decay(maps.echo, coh.sx, p.target_f_delta_mhz * 1e6,
                                          maps.echo.resonator.kappa() / kTwoPi, coh.t2);
  CsvWriter csv({"two_tau_s", "chi_e"}, {"synthetic Hahn-echo decay (arbitrary units)"});
  for (std::size_t i = 0; i < curve.two_tau.size(); ++i)
    csv.add_row({curve.two_tau[i], curve.amplitude[i]});
  mw.add_csv(dir, "decay.csv", csv);
  results["t2_exponential_s"] = curve.exponential.t2;
  results["t2_gaussian_s"] = curve.gaussian.t2;
  results["preferred_model"] = curve.exponential_preferred ? "exponential" : "gaussian";
  results["b0_T"] = coh.field;
}

void run_id_scan(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw) {
  const SpinSystem sys = p.spin_system();
  const int line = static_cast<int>(p.target_line);
  const int branch = target_branch_or_valid(sys, line, static_cast<int>(p.target_branch));
  const double b0 = p.transitions_b0_mt * 1e-3;
  const double ge = effective_gamma(sys, line, branch, b0);
  const double rho = id_effective_density(p.id_rho_per_cm3 * 1e6, p.pulse().bandwidth,
                                          kTwoPi * p.id_broadening_mhz * 1e6);
  CsvWriter csv({"theta_rad", "sin2_half_theta", "inv_t2_per_s"},
                {"instantaneous-diffusion rate against refocusing angle"});
  const int n = static_cast<int>(p.id_points);
  for (int i = 0; i < n; ++i) {
    const double theta = kTwoPi / 2 * i / (n - 1);
    const double s = std::sin(0.5 * theta);
    csv.add_row({theta, s * s, id_rate(rho, ge, theta, p.id_gamma_res_per_s)});
  }
  mw.add_csv(dir, "id_scan.csv", csv);
}

void run_dd(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw) {
  CsvWriter csv({"n_pulses", "t2_s"}, {"dynamical decoupling scaling"});
  for (int n = 1; n <= static_cast<int>(p.dd_n_max); ++n)
    csv.add_row({static_cast<double>(n), dd_scaling(p.dd_t2_single_ms * 1e-3, n, p.dd_alpha)});
  mw.add_csv(dir, "dd.csv", csv);
}

void run_thermal(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw) {
  CsvWriter csv({"n_th", "echo_factor", "t1_factor"}, {"thermal photon scaling"});
  const int n = static_cast<int>(p.thermal_points);
  for (int i = 0; i < n; ++i) {
    const double nth = p.thermal_n_th_max * i / (n - 1);
    const auto f = thermal_scaling(nth);
    csv.add_row({nth, f.echo, f.t1});
  }
  mw.add_csv(dir, "thermal.csv", csv);
}

void run_meissner(const ScenarioParams& p, const fs::path& dir, ManifestWriter& mw) {
  const auto cfg = p.screening_config();
  const int n = static_cast<int>(p.screening_depth_points);
  std::vector<double> depths(n);
  const double lo = p.screening_depth_min_nm * 1e-9;
  const double hi = p.screening_depth_max_nm * 1e-9;
  for (int i = 0; i < n; ++i)
    depths[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  const auto table = averaged_noise_vs_depth(cfg, p.screening_sigma_per_cm2 * 1e4, depths);
  CsvWriter csv({"depth_m", "db_T", "db_free_T", "enhancement"},
                {"orientation/position-averaged rms z field below the film"});
  for (int i = 0; i < n; ++i)
    csv.add_row({table.depth[i], table.db[i], table.db_free[i], table.enhancement[i]});
  mw.add_csv(dir, "meissner.csv", csv);
}

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{
      "levels", "transitions", "clock",     "strain", "spectrum", "rabi",
      "coherence-map", "decay", "id-scan",  "dd",     "thermal",  "meissner"};
  return names;
}

std::vector<std::string> run_subcommand(const std::string& name, const ScenarioParams& p,
                                        const std::string& out_dir) {
  const fs::path dir = prepare_out_dir(out_dir);
  ManifestWriter mw;
  ordered_json results = ordered_json::object();
  if (name == "levels") {
    run_levels(p, dir, mw);
  } else if (name == "transitions") {
    run_transitions(p, dir, mw);
  } else if (name == "clock") {
    run_clock(p, dir, mw, results);
  } else if (name == "strain") {
    run_strain(p, dir, mw);
  } else if (name == "spectrum") {
    run_spectrum(p, dir, mw);
  } else if (name == "rabi") {
    run_rabi(p, dir, mw, results);
  } else if (name == "coherence-map") {
    run_coherence_map(p, dir, mw, results);
  } else if (name == "decay") {
    run_decay(p, dir, mw, results);
  } else if (name == "id-scan") {
    run_id_scan(p, dir, mw);
  } else if (name == "dd") {
    run_dd(p, dir, mw);
  } else if (name == "thermal") {
    run_thermal(p, dir, mw);
  } else if (name == "meissner") {
    run_meissner(p, dir, mw);
  } else {
    throw ConfigError("unknown subcommand: " + name);
  }
  mw.finish(dir, name, p, results);
  return mw.written;
}

}  // namespace donorspin
