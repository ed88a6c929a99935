#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "donorspin/meissner.hpp"

using namespace donorspin;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScreeningConfig config(double lambda) {
  ScreeningConfig c;
  c.lambda = lambda;
  return c;
}

}  // namespace

TEST_CASE("reflection amplitude limits") {
  const ScreeningConfig cfg = config(50e-9);
  // transparent at lambda = infinity
  for (double k : {1e6, 1e8, 1e9}) CHECK(slab_reflection(config(kInf), k) == 0.0);
  // perfect screen at lambda -> 0
  for (double k : {1e6, 1e8, 1e9})
    CHECK(slab_reflection(config(1e-14), k) == doctest::Approx(1.0).epsilon(1e-4));
  // in between: bounded, decreasing with k
  double prev = 1.0;
  for (double k : {1e5, 1e6, 1e7, 1e8, 1e9}) {
    const double r = slab_reflection(cfg, k);
    CHECK(r > 0.0);
    CHECK(r <= 1.0);
    CHECK(r < prev + 1e-12);
    prev = r;
  }
}

TEST_CASE("lambda = infinity reproduces the free dipole field") {
  const ScreeningConfig cfg = config(kInf);
  for (double y : {20e-9, 100e-9, 500e-9}) {
    const std::array<double, 3> obs{130e-9, y, -40e-9};
    for (const std::array<double, 3>& m :
         {std::array<double, 3>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) {
      const auto a = screened_dipole_field(cfg, {0, 0, 0}, m, obs);
      const auto b = free_dipole_field(cfg.moment, {0, 0, 0}, m, obs);
      for (int i = 0; i < 3; ++i)
        CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("perfect-screen limit matches the image-dipole solution") {
  const ScreeningConfig cfg = config(1e-14);
  for (double y : {30e-9, 120e-9, 400e-9}) {
    for (double xo : {0.0, 90e-9}) {
      const std::array<double, 3> obs{xo, y, 25e-9};
      for (const std::array<double, 3>& m :
           {std::array<double, 3>{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) {
        const auto tot = screened_dipole_field(cfg, {0, 0, 0}, m, obs);
        const auto fr = free_dipole_field(cfg.moment, {0, 0, 0}, m, obs);
        // image: mirrored across the film bottom, tangential moment kept,
        // normal component reversed
        const auto im = free_dipole_field(cfg.moment, {0, -2 * cfg.oxide_gap, 0},
                                          {m[0], -m[1], m[2]}, obs);
        double scale = 0;
        for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(tot[i]));
        for (int i = 0; i < 3; ++i)
          CHECK(tot[i] == doctest::Approx(fr[i] + im[i]).epsilon(1e-3).scale(scale));
      }
    }
  }
}

TEST_CASE("perpendicular dipoles screened, parallel dipoles enhanced") {
  const ScreeningConfig cfg = config(50e-9);
  for (const std::array<double, 3>& obs :
       {std::array<double, 3>{60e-9, 80e-9, 40e-9}, {150e-9, 120e-9, 60e-9}}) {
    const auto perp_s = screened_dipole_field(cfg, {0, 0, 0}, {0, 1, 0}, obs);
    const auto perp_f = free_dipole_field(cfg.moment, {0, 0, 0}, {0, 1, 0}, obs);
    CHECK(std::abs(perp_s[2]) < std::abs(perp_f[2]));
    const auto par_s = screened_dipole_field(cfg, {0, 0, 0}, {1, 0, 0}, obs);
    const auto par_f = free_dipole_field(cfg.moment, {0, 0, 0}, {1, 0, 0}, obs);
    CHECK(std::abs(par_s[2]) > std::abs(par_f[2]));
  }
}

TEST_CASE("averaged noise: 1/y^2 law, quadratic moment response, moderate enhancement") {
  const std::vector<double> depths{50e-9, 100e-9, 200e-9, 300e-9};
  const double sigma = 1e16;  // 1e12 cm^-2 as in the reference figure

  const auto free_table = averaged_noise_vs_depth(config(kInf), sigma, depths);
  for (std::size_t i = 0; i < depths.size(); ++i) {
    CHECK(free_table.enhancement[i] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(free_table.db[i] * depths[i] * depths[i] ==
          doctest::Approx(free_table.db[0] * depths[0] * depths[0]).epsilon(1e-6));
  }

  // db^2 is quadratic in the dipole moment
  ScreeningConfig big = config(50e-9);
  big.moment = 2 * kBohrMagneton;
  const auto base = averaged_noise_vs_depth(config(50e-9), sigma, depths);
  const auto doubled = averaged_noise_vs_depth(big, sigma, depths);
  for (std::size_t i = 0; i < depths.size(); ++i)
    CHECK(doubled.db[i] == doctest::Approx(2 * base.db[i]).epsilon(1e-9));
  // and linear in sqrt(sigma)
  const auto denser = averaged_noise_vs_depth(config(50e-9), 4 * sigma, depths);
  CHECK(denser.db[1] == doctest::Approx(2 * base.db[1]).epsilon(1e-9));

  // net enhancement over free space, but moderate (< 2) at lambda = 50 nm
  double prev = 10.0;
  for (double lam : {50e-9, 100e-9, 200e-9, 400e-9}) {
    const auto t = averaged_noise_vs_depth(config(lam), sigma, depths);
    for (std::size_t i = 0; i < depths.size(); ++i) {
      CHECK(t.enhancement[i] > 1.0);
      CHECK(t.enhancement[i] < 2.0);
    }
    // enhancement decreases monotonically toward 1 as lambda grows
    CHECK(t.enhancement[2] < prev);
    prev = t.enhancement[2];
  }
}

TEST_CASE("Monte Carlo average agrees with the quadrature within 3%") {
  const ScreeningConfig cfg = config(50e-9);
  const double sigma = 1e14;
  for (double y : {80e-9, 150e-9}) {
    const double mc = mc_averaged_noise(cfg, sigma, y, 12345);
    const auto quad = averaged_noise_vs_depth(cfg, sigma, {y});
    CHECK(mc == doctest::Approx(quad.db[0]).epsilon(0.03));
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(screened_dipole_field(config(50e-9), {0, 10e-9, 0}, {0, 0, 1},
                                        {0, 50e-9, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(screened_dipole_field(config(50e-9), {0, 0, 0}, {0, 0, 1}, {0, -5e-9, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(averaged_noise_vs_depth(config(50e-9), -1.0, {50e-9}),
                  std::invalid_argument);
}
