#include "donorspin/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace donorspin {

namespace {

// power = 1 for exponential, 2 for gaussian decay.
DecayFit fit_decay(std::span<const double> t, std::span<const double> y, int power) {
  if (t.size() != y.size() || t.size() < 2)
    throw std::invalid_argument("fit_decay: need matching arrays with >= 2 samples");
  const std::size_t n = t.size();

  // Seed from linear regression of log(y) on t^power.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t np = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] <= 0) continue;
    const double xi = std::pow(t[i], power);
    const double yi = std::log(y[i]);
    sx += xi;
    sy += yi;
    sxx += xi * xi;
    sxy += xi * yi;
    ++np;
  }
  double amp = 1.0, rate_p = 1.0;  // rate_p = 1/T2^power
  if (np >= 2 && sxx * np - sx * sx > 0) {
    const double slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    amp = std::exp((sy - slope * sx) / np);
    rate_p = std::max(-slope, 1e-300);
  } else {
    amp = y[0];
    double tmax = t[n - 1];
    rate_p = 1.0 / std::pow(std::max(tmax, 1e-300), power);
  }

  auto rss_of = [&](double a, double r) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = a * std::exp(-r * std::pow(t[i], power));
      rss += (y[i] - m) * (y[i] - m);
    }
    return rss;
  };

  // Gauss-Newton on (A, r) with multiplicative damping.
  double rss = rss_of(amp, rate_p);
  for (int it = 0; it < 200; ++it) {
    double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tp = std::pow(t[i], power);
      const double e = std::exp(-rate_p * tp);
      const double m = amp * e;
      const double res = y[i] - m;
      const double ja = e;            // dm/dA
      const double jr = -amp * tp * e;  // dm/dr
      jtj00 += ja * ja;
      jtj01 += ja * jr;
      jtj11 += jr * jr;
      jtr0 += ja * res;
      jtr1 += jr * res;
    }
    double lambda = 1e-12 * (jtj00 + jtj11);
    bool stepped = false;
    for (int dampen = 0; dampen < 24; ++dampen) {
      const double d00 = jtj00 + lambda, d11 = jtj11 + lambda;
      const double det = d00 * d11 - jtj01 * jtj01;
      if (det <= 0) {
        lambda = std::max(lambda * 10, 1e-9 * (jtj00 + jtj11) + 1e-300);
        continue;
      }
      const double da = (d11 * jtr0 - jtj01 * jtr1) / det;
      const double dr = (d00 * jtr1 - jtj01 * jtr0) / det;
      const double na = amp + da;
      const double nr = rate_p + dr;
      if (nr <= 0) {
        lambda = std::max(lambda * 10, 1e-9 * (jtj00 + jtj11) + 1e-300);
        continue;
      }
      const double nrss = rss_of(na, nr);
      if (nrss <= rss) {
        const bool done = (rss - nrss) <= 1e-14 * (rss + 1e-300);
        amp = na;
        rate_p = nr;
        rss = nrss;
        stepped = true;
        if (done) it = 200;
        break;
      }
      lambda = std::max(lambda * 10, 1e-9 * (jtj00 + jtj11) + 1e-300);
    }
    if (!stepped) break;
  }

  DecayFit out;
  out.amplitude = amp;
  out.t2 = std::pow(1.0 / rate_p, 1.0 / power);
  out.rss = rss;
  out.converged = true;
  return out;
}

}  // namespace

DecayFit fit_exponential_decay(std::span<const double> t, std::span<const double> y) {
  return fit_decay(t, y, 1);
}

DecayFit fit_gaussian_decay(std::span<const double> t, std::span<const double> y) {
  return fit_decay(t, y, 2);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need matching arrays with >= 2 samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_line: degenerate abscissa");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0)
      throw std::invalid_argument("fit_loglog_slope: inputs must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly).slope;
}

}  // namespace donorspin
