#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "donorspin/strain_solver.hpp"

using namespace donorspin;

namespace {

DeviceGeometry res1_geometry() {
  DeviceGeometry g;
  g.wire_width = 5e-6;
  g.wire_thickness = 50e-9;
  g.wire_length = 700e-6;
  g.domain_halfwidth = 50e-6;
  g.domain_depth = 25e-6;
  g.t_dep = 300.0;
  g.t_op = 0.015;
  return g;
}

// One shared solve for the tests below.
const StrainField& res1_field() {
  static const StrainField field = solve_thermoelastic(
      res1_geometry(), MaterialProps::aluminum(), MaterialProps::silicon());
  return field;
}

double hyd_at(const StrainField& f, double x, double y) {
  const auto e = f.sample(x, y);
  return (e.exx + e.eyy + e.ezz) / 3;
}

}  // namespace

TEST_CASE("geometry and material validation") {
  DeviceGeometry g = res1_geometry();
  g.domain_halfwidth = 20e-6;  // < 10 w
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = res1_geometry();
  g.t_dep = g.t_op;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  CHECK_THROWS_AS(MaterialProps::cubic(10e9, 20e9, 5e9, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(MaterialProps::cubic(166e9, 64e9, 80e9, 0.0), std::invalid_argument);
}

TEST_CASE("identical expansion coefficients give zero strain") {
  MaterialProps film = MaterialProps::aluminum();
  film.thermal_expansion = MaterialProps::silicon().thermal_expansion;
  DeviceGeometry g = res1_geometry();
  g.domain_halfwidth = 50e-6;
  MeshOptions coarse;
  coarse.edge_resolution = 40e-9;
  coarse.surface_resolution = 20e-9;
  const auto f = solve_thermoelastic(g, film, MaterialProps::silicon(), coarse);
  for (double v : f.exx) CHECK(v == 0.0);
  for (double v : f.exy) CHECK(v == 0.0);
}

TEST_CASE("mirror symmetry and far-field decay") {
  const StrainField& f = res1_field();
  const RectGrid& g = f.grid;
  double peak = 0, asym = 0, boundary = 0;
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const std::size_t k = g.index(ix, iy);
      const std::size_t km = g.index(g.nx() - 1 - ix, iy);
      peak = std::max(peak, std::abs(f.exx[k]));
      asym = std::max({asym, std::abs(f.exx[k] - f.exx[km]),
                       std::abs(f.eyy[k] - f.eyy[km]), std::abs(f.exy[k] + f.exy[km])});
      if (ix == 0 || ix + 1 == g.nx() || iy + 1 == g.ny())
        boundary = std::max({boundary, std::abs(f.exx[k]), std::abs(f.eyy[k])});
    }
  }
  CHECK(asym < 1e-8 * peak);
  CHECK(boundary < 0.01 * peak);
}

TEST_CASE("plane strain: e_zz identically zero") {
  for (double v : res1_field().ezz) CHECK(v == 0.0);
}

TEST_CASE("linearity in the thermal mismatch") {
  DeviceGeometry g2 = res1_geometry();
  g2.t_dep = g2.t_op + 2 * (300.0 - 0.015);
  MeshOptions coarse;
  coarse.edge_resolution = 25e-9;
  coarse.surface_resolution = 10e-9;
  const auto f1 = solve_thermoelastic(res1_geometry(), MaterialProps::aluminum(),
                                      MaterialProps::silicon(), coarse);
  const auto f2 = solve_thermoelastic(g2, MaterialProps::aluminum(),
                                      MaterialProps::silicon(), coarse);
  CHECK(hyd_at(f2, 0, 75e-9) / hyd_at(f1, 0, 75e-9) == doctest::Approx(2.0).epsilon(0.005));
  CHECK(hyd_at(f2, 2e-6, 40e-9) / hyd_at(f1, 2e-6, 40e-9) == doctest::Approx(2.0).epsilon(0.005));
}

TEST_CASE("scale invariance of the dimensionless elastic problem") {
  const double s = 10.0;
  DeviceGeometry g = res1_geometry();
  g.wire_width *= s;
  g.wire_thickness *= s;
  g.wire_length *= s;
  g.domain_halfwidth *= s;
  g.domain_depth *= s;
  MeshOptions m;
  m.edge_resolution = 10e-9 * s;
  m.surface_resolution = 5e-9 * s;
  const auto scaled = solve_thermoelastic(g, MaterialProps::aluminum(),
                                          MaterialProps::silicon(), m);
  CHECK(hyd_at(scaled, 0, 75e-9 * s) ==
        doctest::Approx(hyd_at(res1_field(), 0, 75e-9)).epsilon(0.01));
}

TEST_CASE("mesh refinement convergence at the probe point") {
  MeshOptions coarse;
  coarse.edge_resolution = 20e-9;
  coarse.surface_resolution = 10e-9;
  MeshOptions fine;
  fine.edge_resolution = 10e-9;
  fine.surface_resolution = 5e-9;
  const auto fc = solve_thermoelastic(res1_geometry(), MaterialProps::aluminum(),
                                      MaterialProps::silicon(), coarse);
  const auto ff = solve_thermoelastic(res1_geometry(), MaterialProps::aluminum(),
                                      MaterialProps::silicon(), fine);
  CHECK(hyd_at(fc, 0, 75e-9) ==
        doctest::Approx(hyd_at(ff, 0, 75e-9)).epsilon(0.02));
}

TEST_CASE("hydrostatic helper") {
  StrainField f;
  f.grid = RectGrid{{0.0, 1.0}, {0.0}};
  f.exx = {3e-4, 1e-4};
  f.eyy = {3e-4, -1e-4};
  f.ezz = {3e-4, 0.0};
  f.exy = {0.0, 5e-4};
  const auto h = hydrostatic(f);
  CHECK(h[0] == doctest::Approx(3e-4));
  CHECK(h[1] == doctest::Approx(0.0));  // pure shear
}

TEST_CASE("under-wire compression with opposite-sign lobes past the edges") {
  const StrainField& f = res1_field();
  CHECK(hyd_at(f, 0, 75e-9) < 0);
  CHECK(hyd_at(f, 2.4e-6, 75e-9) < 0);
  CHECK(hyd_at(f, 2.7e-6, 75e-9) > 0);  // sign change near x = w/2
  CHECK(hyd_at(f, 3.5e-6, 75e-9) > 0);
}

TEST_CASE("shift map: under-wire plateau in the MHz range, lobed sign pattern") {
  const auto shifts = shift_map(res1_field(), SpinSystem::bismuth());
  const double center = shifts.sample(0, 75e-9);
  CHECK(center < -1e6);
  CHECK(center > -10e6);
  CHECK(shifts.sample(3.0e-6, 75e-9) > 0);
  CHECK(std::abs(shifts.sample(shifts.grid.x.back(), 75e-9)) < 0.01 * std::abs(center));
}

TEST_CASE("iso-shift regions move toward the wire edge for larger shifts") {
  const auto shifts = shift_map(res1_field(), SpinSystem::bismuth());
  const auto profile = DonorProfile::gaussian();

  // very wide band covers every node
  const auto all = iso_shift_region(shifts, 0.0, 1e12, profile);
  CHECK(std::count(all.mask.begin(), all.mask.end(), 1) ==
        static_cast<long>(shifts.grid.size()));

  const auto r25 = iso_shift_region(shifts, -2.5e6, 146e3, profile);
  const auto r40 = iso_shift_region(shifts, -4.0e6, 146e3, profile);
  REQUIRE_FALSE(r25.empty());
  REQUIRE_FALSE(r40.empty());
  // f = -2.5 MHz selects donors well inside the wire footprint
  CHECK(r25.mean_abs_x < 1.3e-6);
  // larger |shift|: closer to the edge and to the surface
  CHECK(r40.mean_abs_x > r25.mean_abs_x);
  CHECK(r40.mean_depth < r25.mean_depth);

  // empty band is a result, not an error
  const auto none = iso_shift_region(shifts, -500e6, 1e3, profile);
  CHECK(none.empty());
  CHECK(none.area == 0.0);
}
