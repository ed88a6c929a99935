#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "donorspin/pipeline.hpp"

using namespace donorspin;

namespace {

const MapBundle& res1() {
  static const MapBundle maps = build_maps(ScenarioParams::preset_named("res1"));
  return maps;
}

}  // namespace

TEST_CASE("charge-noise rate map: calibrated at the donor peak, larger at the edges") {
  const ScenarioParams p = ScenarioParams::preset_named("res1");
  RectGrid g;
  for (int i = 0; i <= 35; ++i) g.x.push_back(i * 0.1e-6);
  g.y = {40e-9, 75e-9, 150e-9};
  const auto rate = charge_noise_rate_map(p, g);

  // at (0, peak depth) the rate is the configured charge-noise T2 (0.3 s)
  const double center = sample_bilinear(g, rate, 0.0, 75e-9);
  CHECK(center == doctest::Approx(1.0 / 0.30).epsilon(0.02));
  const double edge = sample_bilinear(g, rate, 2.5e-6, 75e-9);
  CHECK(edge > 2 * center);
}

TEST_CASE("coherence pipeline: magnetic transition uses the constant Gamma_non") {
  ScenarioParams p = ScenarioParams::preset_named("res1");
  const auto coh = build_coherence_maps(p, res1());
  CHECK(std::abs(coh.gamma_eff) / res1().sys.gamma_e == doctest::Approx(0.9).epsilon(0.02));
  // under-wire T2 values sit in the millisecond range
  const double t2_center = sample_bilinear(coh.t2.grid, coh.t2.t2, 0.0, 75e-9);
  CHECK(t2_center > 1e-3);
  CHECK(t2_center < 20e-3);
}

TEST_CASE("coherence pipeline at the clock transition with the charge-noise channel") {
  // park the resonator just below the line-5 frequency minimum so the band
  // sits next to the clock transition
  const auto ct = find_clock_transition(SpinSystem::bismuth(), 5);
  REQUIRE(ct.has_value());
  const auto ts = list_transitions(SpinSystem::bismuth(),
                                   levels_at(SpinSystem::bismuth(), ct->field));
  const double omega_ct = find_transition(ts, 5, ct->branch)->omega;

  // the maximum attainable shift is (omega0 - omega_CT)/2pi = -2.5 MHz, so a
  // -2.6 MHz band has its lower-field root right beside the CT
  ScenarioParams p = ScenarioParams::preset_named("res1");
  p.resonator_omega0_ghz = (omega_ct - kTwoPi * 2.5e6) / kTwoPi / 1e9;
  p.target_line = 5;
  p.target_branch = ct->branch;
  p.target_f_delta_mhz = -2.6;
  p.noise_gamma_non_model = "charge";

  // shrink the field window so the lower of the two roots is bracketed
  const auto maps = build_maps(p);
  CoherenceMaps coh;
  const double field = field_for_shift(maps.sys, 5, ct->branch,
                                       maps.echo.resonator.omega0, -2.6e6, 1e-3, ct->field);
  CHECK(field == doctest::Approx(ct->field).epsilon(0.1));
  const double ge = effective_gamma(maps.sys, 5, ct->branch, field);
  // near the CT the residual slope is far below the low-field lines
  CHECK(std::abs(ge) < 0.02 * maps.sys.gamma_e);

  const auto noise = expected_noise_map(p.surface_bath(), maps.echo.shift.grid);
  const auto t2 = t2_map(noise, ge, charge_noise_rate_map(p, maps.echo.shift.grid),
                         p.noise_c_t2);
  // charge-noise-limited plateau of a few hundred ms under the wire,
  // decreasing toward the edges
  const double center = sample_bilinear(t2.grid, t2.t2, 0.0, 75e-9);
  const double edge = sample_bilinear(t2.grid, t2.t2, 2.4e-6, 75e-9);
  CHECK(center > 0.05);
  CHECK(center < 0.5);
  CHECK(edge < center);
}
