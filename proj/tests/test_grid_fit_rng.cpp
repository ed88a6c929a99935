#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "donorspin/fit.hpp"
#include "donorspin/grid.hpp"
#include "donorspin/rng.hpp"

using namespace donorspin;

TEST_CASE("graded segment hits endpoints with requested resolution") {
  const auto seg = graded_segment(0.0, 2.5e-6, 100e-9, 10e-9, 1.3, 300e-9);
  CHECK(seg.front() == 0.0);
  CHECK(seg.back() == 2.5e-6);
  for (std::size_t i = 1; i < seg.size(); ++i) CHECK(seg[i] > seg[i - 1]);
  // last spacing tracks the fine end
  CHECK(seg[seg.size() - 1] - seg[seg.size() - 2] < 25e-9);
}

TEST_CASE("mirror axis is symmetric and strictly increasing") {
  const auto half = graded_segment(0.0, 1e-6, 50e-9, 20e-9, 1.3, 200e-9);
  const auto full = mirror_axis(half);
  REQUIRE(full.size() == 2 * half.size() - 1);
  for (std::size_t i = 0; i < full.size(); ++i)
    CHECK(full[i] == doctest::Approx(-full[full.size() - 1 - i]).epsilon(1e-14));
}

TEST_CASE("node weights tile the axis exactly") {
  const std::vector<double> axis{0.0, 1.0, 2.5, 7.0, 7.5};
  double total = 0;
  for (std::size_t i = 0; i < axis.size(); ++i) total += RectGrid::node_weight(axis, i);
  CHECK(total == doctest::Approx(7.5).epsilon(1e-14));
}

TEST_CASE("bilinear sampling reproduces nodal and interior values") {
  RectGrid g{{0.0, 1.0, 3.0}, {0.0, 2.0}};
  std::vector<double> v(g.size());
  for (std::size_t iy = 0; iy < g.ny(); ++iy)
    for (std::size_t ix = 0; ix < g.nx(); ++ix)
      v[g.index(ix, iy)] = 2 * g.x[ix] - 3 * g.y[iy] + 1;  // bilinear-exact
  CHECK(sample_bilinear(g, v, 1.0, 2.0) == doctest::Approx(-3.0));
  CHECK(sample_bilinear(g, v, 2.0, 1.0) == doctest::Approx(2.0));
  CHECK(sample_bilinear(g, v, -5.0, 0.0) == doctest::Approx(1.0));  // clamped
}

TEST_CASE("decay fits recover exact model parameters") {
  std::vector<double> t, ye, yg;
  for (int i = 1; i <= 30; ++i) {
    t.push_back(3e-3 * i / 30.0);
    ye.push_back(2.0 * std::exp(-t.back() / 1e-3));
    yg.push_back(2.0 * std::exp(-(t.back() / 1e-3) * (t.back() / 1e-3)));
  }
  const auto fe = fit_exponential_decay(t, ye);
  CHECK(fe.t2 == doctest::Approx(1e-3).epsilon(1e-8));
  CHECK(fe.amplitude == doctest::Approx(2.0).epsilon(1e-8));
  const auto fg = fit_gaussian_decay(t, yg);
  CHECK(fg.t2 == doctest::Approx(1e-3).epsilon(1e-8));

  // the wrong model leaves a visibly worse residual
  CHECK(fit_gaussian_decay(t, ye).rss > 100 * fe.rss);
}

TEST_CASE("log-log slope of a power law") {
  std::vector<double> x{1.0, 2.0, 4.0, 8.0}, y;
  for (double xi : x) y.push_back(7.0 * std::pow(xi, -2.0));
  CHECK(fit_loglog_slope(x, y) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("counter rng: deterministic, derived streams independent") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

  CounterRng c = CounterRng(42).derive(7);
  CounterRng d = CounterRng(42).derive(8);
  int same = 0;
  for (int i = 0; i < 64; ++i) same += (c.next_u64() == d.next_u64());
  CHECK(same == 0);
}

TEST_CASE("rng moments: uniform, normal, sphere, poisson") {
  CounterRng rng(123);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sz = 0;
  for (int i = 0; i < n; ++i) {
    su += rng.uniform();
    const double g = rng.normal();
    sn += g;
    sn2 += g * g;
    double x, y, z;
    rng.unit_sphere(x, y, z);
    CHECK(std::abs(x * x + y * y + z * z - 1) < 1e-12);
    sz += z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(5e-3));
  CHECK(sn / n == doctest::Approx(0.0).epsilon(1).scale(0.01));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(std::abs(sz / n) < 0.01);

  double sp = 0;
  const int np = 20000;
  for (int i = 0; i < np; ++i) sp += rng.poisson(12.5);
  CHECK(sp / np == doctest::Approx(12.5).epsilon(0.02));
}
