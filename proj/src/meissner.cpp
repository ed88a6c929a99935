#include "donorspin/meissner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "donorspin/grid.hpp"
#include "donorspin/rng.hpp"

namespace donorspin {

namespace {

constexpr double kPi = kTwoPi / 2;

// 16-point Gauss-Legendre rule on (-1, 1).
const double kGx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                       0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                       0.9445750230732326, 0.9894009349916499};
const double kGw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                       0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                       0.0622535239386479, 0.0271524594117541};

// Rational minimax fits for J0 and J1 (Abramowitz & Stegun 9.4), ~1e-8
// absolute accuracy; far cheaper than std::cyl_bessel_j in the quadratures.
double bessel_j0(double x) {
  const double ax = std::abs(x);
  if (ax < 8.0) {
    const double y = x * x;
    const double p1 = 57568490574.0 + y * (-13362590354.0 + y * (651619640.7 +
                      y * (-11214424.18 + y * (77392.33017 + y * -184.9052456))));
    const double p2 = 57568490411.0 + y * (1029532985.0 + y * (9494680.718 +
                      y * (59272.64853 + y * (267.8532712 + y))));
    return p1 / p2;
  }
  const double z = 8.0 / ax;
  const double y = z * z;
  const double xx = ax - 0.785398164;
  const double p1 = 1.0 + y * (-0.1098628627e-2 + y * (0.2734510407e-4 +
                    y * (-0.2073370639e-5 + y * 0.2093887211e-6)));
  const double p2 = -0.1562499995e-1 + y * (0.1430488765e-3 + y * (-0.6911147651e-5 +
                    y * (0.7621095161e-6 + y * -0.934935152e-7)));
  return std::sqrt(0.636619772 / ax) * (std::cos(xx) * p1 - z * std::sin(xx) * p2);
}

double bessel_j1(double x) {
  const double ax = std::abs(x);
  if (ax < 8.0) {
    const double y = x * x;
    const double p1 = x * (72362614232.0 + y * (-7895059235.0 + y * (242396853.1 +
                      y * (-2972611.439 + y * (15704.48260 + y * -30.16036606)))));
    const double p2 = 144725228442.0 + y * (2300535178.0 + y * (18583304.74 +
                      y * (99447.43394 + y * (376.9991397 + y))));
    return p1 / p2;
  }
  const double z = 8.0 / ax;
  const double y = z * z;
  const double xx = ax - 2.356194491;
  const double p1 = 1.0 + y * (0.183105e-2 + y * (-0.3516396496e-4 +
                    y * (0.2457520174e-5 + y * -0.240337019e-6)));
  const double p2 = 0.04687499995 + y * (-0.2002690873e-3 + y * (0.8449199096e-5 +
                    y * (-0.88228987e-6 + y * 0.105787412e-6)));
  const double v = std::sqrt(0.636619772 / ax) * (std::cos(xx) * p1 - z * std::sin(xx) * p2);
  return x < 0 ? -v : v;
}

struct ScatterIntegrals {
  double i0 = 0, i1 = 0, i1s = 0;
};

// I0  = Int k^2 R e^(-k(y+2g)) J0(ks) dk
// I1  = Int k^2 R e^(-k(y+2g)) J1(ks) dk
// I1s = Int k^2 R e^(-k(y+2g)) J1(ks)/(ks) dk
ScatterIntegrals scatter_integrals(const ScreeningConfig& cfg, double s, double y) {
  const double decay = y + 2 * cfg.oxide_gap;
  if (!(decay > 0)) throw std::invalid_argument("observation must be below the interface");

  auto evaluate = [&](double kmax, double width) {
    ScatterIntegrals acc;
    const int n = std::max(1, static_cast<int>(std::ceil(kmax / width)));
    const double h = kmax / n;
    for (int p = 0; p < n; ++p) {
      const double c = (p + 0.5) * h;
      for (int q = 0; q < 8; ++q) {
        for (double sgn : {-1.0, 1.0}) {
          const double k = c + sgn * 0.5 * h * kGx[q];
          const double f = kGw[q] * 0.5 * h * k * k * slab_reflection(cfg, k) *
                           std::exp(-k * decay);
          const double z = k * s;
          acc.i0 += f * bessel_j0(z);
          const double j1 = bessel_j1(z);
          acc.i1 += f * j1;
          acc.i1s += f * (z < 1e-8 ? 0.5 : j1 / z);
        }
      }
    }
    return acc;
  };

  // e^(-k decay) bounds the integrand, so this range covers it for any
  // lambda; the doubling loop below guards the truncation either way.
  double kmax = cfg.kmax_factor / decay;
  double width = std::min(1.0 / decay, s > 0 ? kPi / (2 * s) : 1.0 / decay);
  ScatterIntegrals prev = evaluate(kmax, width);
  for (int iter = 0; iter < 5; ++iter) {
    const ScatterIntegrals next = evaluate(kmax * 2, width * 0.5);
    const double ref = std::abs(next.i0) + std::abs(next.i1) + std::abs(next.i1s) + 1e-300;
    const double change = std::abs(next.i0 - prev.i0) + std::abs(next.i1 - prev.i1) +
                          std::abs(next.i1s - prev.i1s);
    prev = next;
    if (change < cfg.rel_tol * ref) return prev;
    kmax *= 2;
    width *= 0.5;
  }
  throw std::runtime_error("meissner: k quadrature did not converge (k_max = " +
                           std::to_string(kmax) + ")");
}

// Scattered field in substrate coordinates (y down) from tabulated integrals.
// B = -grad(phi) for the dipole scalar potential, hence the leading minus.
std::array<double, 3> scattered_from_integrals(const ScreeningConfig& cfg,
                                               const ScatterIntegrals& si, double sx,
                                               double sz, double s,
                                               const std::array<double, 3>& m_dir) {
  const double c = -kMu0 * cfg.moment / (2 * kTwoPi);  // -mu0 m / 4pi
  const double mv = -m_dir[1];                         // up component
  const double mpx = m_dir[0], mpz = m_dir[2];
  const double shx = s > 0 ? sx / s : 0.0;
  const double shz = s > 0 ? sz / s : 0.0;
  const double mdot = mpx * shx + mpz * shz;

  const double bv = c * (mdot * si.i1 + mv * si.i0);
  const double radial = c * (mdot * (si.i0 - 2 * si.i1s) - mv * si.i1);
  const double bx = radial * shx + c * si.i1s * mpx;
  const double bz = radial * shz + c * si.i1s * mpz;
  return {bx, -bv, bz};
}

}  // namespace

void ScreeningConfig::validate() const {
  if (!(film_thickness > 0) || !(oxide_gap > 0))
    throw std::invalid_argument("film thickness and oxide gap must be > 0");
  if (!(lambda > 0)) throw std::invalid_argument("lambda must be > 0 (or infinity)");
  if (!(moment > 0)) throw std::invalid_argument("moment must be > 0");
}

double slab_reflection(const ScreeningConfig& cfg, double k) {
  if (!(k > 0)) return std::isfinite(cfg.lambda) ? 1.0 : 0.0;
  if (!std::isfinite(cfg.lambda)) return 0.0;
  const double q = std::hypot(k, 1.0 / cfg.lambda);
  const double gamma = std::exp(-2 * q * cfg.film_thickness) * (q - k) / (q + k);
  const double beta = q * (gamma - 1) / (k * (gamma + 1));
  return (1 + beta) / (beta - 1);
}

std::array<double, 3> free_dipole_field(double moment, const std::array<double, 3>& dipole_pos,
                                        const std::array<double, 3>& moment_dir,
                                        const std::array<double, 3>& obs) {
  const double rx = obs[0] - dipole_pos[0];
  const double ry = obs[1] - dipole_pos[1];
  const double rz = obs[2] - dipole_pos[2];
  const double r = std::sqrt(rx * rx + ry * ry + rz * rz);
  if (!(r > 0)) throw std::invalid_argument("free_dipole_field: zero separation");
  const double c = kMu0 * moment / (2 * kTwoPi) / (r * r * r);
  const double mr = (moment_dir[0] * rx + moment_dir[1] * ry + moment_dir[2] * rz) / r;
  return {c * (3 * mr * rx / r - moment_dir[0]), c * (3 * mr * ry / r - moment_dir[1]),
          c * (3 * mr * rz / r - moment_dir[2])};
}

std::array<double, 3> screened_dipole_field(const ScreeningConfig& cfg,
                                            const std::array<double, 3>& dipole_pos,
                                            const std::array<double, 3>& moment_dir,
                                            const std::array<double, 3>& obs) {
  cfg.validate();
  if (dipole_pos[1] != 0)
    throw std::invalid_argument("dipole must sit on the interface plane y = 0");
  if (!(obs[1] > 0))
    throw std::invalid_argument("observation point must be in the substrate (y > 0)");

  auto field = free_dipole_field(cfg.moment, dipole_pos, moment_dir, obs);
  if (!std::isfinite(cfg.lambda)) return field;

  const double sx = obs[0] - dipole_pos[0];
  const double sz = obs[2] - dipole_pos[2];
  const double s = std::hypot(sx, sz);
  const auto si = scatter_integrals(cfg, s, obs[1]);
  const auto scat = scattered_from_integrals(cfg, si, sx, sz, s, moment_dir);
  for (int i = 0; i < 3; ++i) field[i] += scat[i];
  return field;
}

NoiseVsDepth averaged_noise_vs_depth(const ScreeningConfig& cfg, double sigma,
                                     const std::vector<double>& depths) {
  cfg.validate();
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be > 0");

  NoiseVsDepth out;
  out.depth = depths;
  const double pref = sigma * cfg.moment * cfg.moment * kMu0 * kMu0 / (24 * kPi);

  for (double y : depths) {
    if (!(y > 0)) throw std::invalid_argument("depths must be > 0");
    auto evaluate = [&](double kmax, double width) {
      double acc = 0;
      const int panels = std::max(1, static_cast<int>(std::ceil(kmax / width)));
      const double h = kmax / panels;
      for (int p = 0; p < panels; ++p) {
        const double c = (p + 0.5) * h;
        for (int q = 0; q < 8; ++q) {
          for (double sgn : {-1.0, 1.0}) {
            const double k = c + sgn * 0.5 * h * kGx[q];
            const double rho = slab_reflection(cfg, k) * std::exp(-2 * k * cfg.oxide_gap);
            acc += kGw[q] * 0.5 * h * k * k * k * std::exp(-2 * k * y) * (1 + rho * rho);
          }
        }
      }
      return acc;
    };
    double kmax = cfg.kmax_factor / (2 * y);
    double width = 0.5 / y;
    double integral = evaluate(kmax, width);
    for (int iter = 0;; ++iter) {
      const double next = evaluate(kmax * 2, width * 0.5);
      const double change = std::abs(next - integral);
      integral = next;
      if (change < cfg.rel_tol * std::abs(next)) break;
      if (iter >= 5)
        throw std::runtime_error("meissner: depth-average quadrature did not converge");
      kmax *= 2;
      width *= 0.5;
    }
    const double db2 = pref * integral;
    const double db2_free = sigma * cfg.moment * cfg.moment * kMu0 * kMu0 / (64 * kPi * y * y * y * y);
    out.db.push_back(std::sqrt(db2));
    out.db_free.push_back(std::sqrt(db2_free));
    out.enhancement.push_back(std::sqrt(db2 / db2_free));
  }
  return out;
}

double mc_averaged_noise(const ScreeningConfig& cfg, double sigma, double depth,
                         std::uint64_t seed, double se_target, int max_real) {
  cfg.validate();
  if (!(sigma > 0) || !(depth > 0)) throw std::invalid_argument("bad sigma or depth");

  const double r_cut = 15 * (depth + 2 * cfg.oxide_gap);
  const bool screened = std::isfinite(cfg.lambda);

  // Scattered-response table against lateral offset, shared by all dipoles at
  // this depth (the integrals depend only on |s|).
  const int nt = 600;
  std::vector<double> ts(nt), ti0(nt), ti1(nt), ti1s(nt);
  if (screened) {
    for (int i = 0; i < nt; ++i) {
      const double f = static_cast<double>(i) / (nt - 1);
      ts[i] = r_cut * f * f;  // concentrate samples at small offsets
      const auto si = scatter_integrals(cfg, ts[i], depth);
      ti0[i] = si.i0;
      ti1[i] = si.i1;
      ti1s[i] = si.i1s;
    }
  }
  auto table_lookup = [&](double s) {
    const std::size_t i = axis_cell(ts, s);
    const double t = (s - ts[i]) / std::max(ts[i + 1] - ts[i], 1e-300);
    ScatterIntegrals si;
    si.i0 = ti0[i] + t * (ti0[i + 1] - ti0[i]);
    si.i1 = ti1[i] + t * (ti1[i + 1] - ti1[i]);
    si.i1s = ti1s[i] + t * (ti1s[i + 1] - ti1s[i]);
    return si;
  };

  const std::array<std::array<double, 3>, 3> axes = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const std::array<double, 3> obs = {0, depth, 0};
  const CounterRng master(seed);
  const double mean_count = sigma * kPi * r_cut * r_cut;

  double sum = 0, sum2 = 0;
  int r = 0;
  for (; r < max_real; ++r) {
    CounterRng rng = master.derive(r);
    const std::uint64_t n = rng.poisson(mean_count);
    double total = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
      // Uniform on the disk.
      const double rad = r_cut * std::sqrt(rng.uniform());
      const double phi = kTwoPi * rng.uniform();
      const std::array<double, 3> pos = {rad * std::cos(phi), 0.0, rad * std::sin(phi)};
      const double sx = obs[0] - pos[0];
      const double sz = obs[2] - pos[2];
      const double s = std::hypot(sx, sz);
      ScatterIntegrals si;
      if (screened) si = table_lookup(s);
      // Orientation average taken analytically over the three axes.
      double bz2 = 0;
      for (const auto& m_dir : axes) {
        auto b = free_dipole_field(cfg.moment, pos, m_dir, obs);
        if (screened) {
          const auto sc = scattered_from_integrals(cfg, si, sx, sz, s, m_dir);
          b[2] += sc[2];
        }
        bz2 += b[2] * b[2];
      }
      total += bz2 / 3.0;
    }
    sum += total;
    sum2 += total * total;
    if (r >= 15) {
      const double mean = sum / (r + 1);
      const double var = std::max(0.0, sum2 / (r + 1) - mean * mean);
      const double se = std::sqrt(var / r);
      if (se < se_target * mean) {
        ++r;
        break;
      }
    }
  }
  return std::sqrt(sum / r);
}

}  // namespace donorspin
