#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "donorspin/scenario.hpp"

using namespace donorspin;

TEST_CASE("toml subset: sections, types, comments, errors") {
  const auto t = TomlTable::parse(R"(
# scenario
preset = "res1"
[pulse]
beta = 5e5   # amplitude
t_rep_s = 10
[spectrum]
magnitude_detection = true
weights = [1, 1.2, 1, 1, 1, 1, 1, 1, 1, 1]
)");
  CHECK(std::get<std::string>(t.at("preset").v) == "res1");
  CHECK(std::get<double>(t.at("pulse.beta").v) == doctest::Approx(5e5));
  CHECK(std::get<bool>(t.at("spectrum.magnitude_detection").v) == true);
  CHECK(std::get<std::vector<double>>(t.at("spectrum.weights").v).size() == 10);

  CHECK_THROWS(TomlTable::parse("key"));
  CHECK_THROWS(TomlTable::parse("a = [1, 2"));
  CHECK_THROWS(TomlTable::parse("a = 1\na = 2"));
  CHECK_THROWS(TomlTable::parse("a = what"));
}

TEST_CASE("presets carry the published resonator and material tables") {
  const auto r1 = ScenarioParams::preset_named("res1");
  CHECK(r1.resonator_omega0_ghz == 7.338);
  CHECK(r1.resonator_z0_ohm == 40.0);
  CHECK(r1.resonator_kappa_i_per_s == 4.6e5);
  CHECK(r1.resonator_kappa_c_per_s == 4.6e5);
  CHECK(r1.wire_width_um == 5.0);
  CHECK(r1.wire_length_um == 700.0);
  CHECK(r1.spectrum_weights[1] == 1.2);

  const auto r2 = ScenarioParams::preset_named("res2");
  CHECK(r2.resonator_omega0_ghz == 7.402);
  CHECK(r2.wire_width_um == 2.0);
  CHECK(r2.wire_length_um == 450.0);
  CHECK(r2.spectrum_weights[6] == 1.8);
  CHECK(r2.spectrum_weights[7] == 1.5);
  CHECK(r2.spectrum_weights[8] == 1.2);

  const auto r3 = ScenarioParams::preset_named("res3");
  CHECK(r3.resonator_omega0_ghz == 6.945);
  CHECK(r3.resonator_z0_ohm == 45.0);
  CHECK(r3.resonator_kappa_i_per_s == 5.5e5);
  CHECK(r3.resonator_kappa_c_per_s == 1.5e5);
  CHECK(r3.wire_width_um == 1.0);

  // Table 2 material constants
  CHECK(r1.substrate_c11_gpa == 166.0);
  CHECK(r1.substrate_c12_gpa == 64.0);
  CHECK(r1.substrate_c44_gpa == 80.0);
  CHECK(r1.substrate_alpha_per_k == 0.7e-6);
  CHECK(r1.film_alpha_per_k == 14.3e-6);
  CHECK(r1.film_youngs_gpa == 70.0);
  CHECK(r1.film_poisson == 0.33);
  CHECK(r1.film_c11_gpa == 103.0);

  CHECK_THROWS_AS(ScenarioParams::preset_named("res9"), ConfigError);
}

TEST_CASE("unknown keys and type mismatches are rejected with their paths") {
  ScenarioParams p = ScenarioParams::preset_named("res1");
  const auto bad = TomlTable::parse("[pulse]\nbeta = 1e6\nbogus_knob = 3\n");
  try {
    p.apply(bad);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("pulse.bogus_knob") != std::string::npos);
  }
  CHECK(p.pulse_beta == 1e6);  // valid keys applied before the error list

  const auto wrong_type = TomlTable::parse("[pulse]\nbeta = \"strong\"\n");
  CHECK_THROWS_AS(p.apply(wrong_type), ConfigError);
}

TEST_CASE("overrides parse like config lines") {
  ScenarioParams p = ScenarioParams::preset_named("res1");
  p.apply_override("thermal.t_dep_K=270");
  CHECK(p.thermal_t_dep_k == 270.0);
  p.apply_override("bath.method=\"monte-carlo\"");
  CHECK(p.bath_method == "monte-carlo");
  CHECK_THROWS_AS(p.apply_override("no_equals_sign"), ConfigError);
  CHECK_THROWS_AS(p.apply_override("unknown.key=1"), ConfigError);
}

TEST_CASE("manifest lists every registered parameter") {
  const ScenarioParams p = ScenarioParams::preset_named("res2");
  const auto parsed = nlohmann::json::parse(p.manifest_parameters_json());
  const auto keys = ScenarioParams::registered_keys();
  CHECK(parsed.size() == keys.size());
  for (const auto& k : keys) CHECK(parsed.contains(k));
  CHECK(parsed["resonator.omega0_GHz"] == 7.402);
  CHECK(parsed["preset"] == "res2");
}

TEST_CASE("unit conversions into base units") {
  const ScenarioParams p = ScenarioParams::preset_named("res1");
  const SpinSystem sys = p.spin_system();
  CHECK(sys.hyperfine == doctest::Approx(kTwoPi * 1.475e9));
  CHECK(sys.gamma_n == doctest::Approx(kTwoPi * 7e6));
  CHECK(sys.stark_eta == doctest::Approx(-0.26e-15));

  const DeviceGeometry g = p.geometry();
  CHECK(g.wire_width == doctest::Approx(5e-6));
  CHECK(g.wire_thickness == doctest::Approx(50e-9));

  const SurfaceBath b = p.surface_bath();
  CHECK(b.sigma1 == doctest::Approx(4e16));
  CHECK(b.sigma2 == doctest::Approx(1e16));
  CHECK(b.interp_width == doctest::Approx(500e-9));

  // eta pitfall: 0.1 mV/nm and the preset transfer give sqrt(S_E) in V/m
  CHECK(p.sqrt_s_e() == doctest::Approx(5.8e3 * 1.5e-3));

  ScenarioParams bad = p;
  bad.spectrum_weights = {1, 2, 3};
  CHECK_THROWS_AS(bad.weights(), ConfigError);
  bad = p;
  bad.donor_profile_depth_nm = {0, 50, 100};
  bad.donor_profile_density_per_um3 = {0, 4e4};
  CHECK_THROWS_AS(bad.donor_profile(), ConfigError);
}

TEST_CASE("tabulated donor profile overrides the Gaussian default") {
  ScenarioParams p = ScenarioParams::preset_named("res1");
  p.donor_profile_depth_nm = {0, 50, 100, 150};
  p.donor_profile_density_per_um3 = {0, 4e4, 4e4, 0};
  const DonorProfile prof = p.donor_profile();
  CHECK(prof.at(75e-9) == doctest::Approx(4e22));
  CHECK(prof.at(25e-9) == doctest::Approx(2e22));
  CHECK(prof.at(200e-9) == 0.0);
}
