#pragma once

#include <span>
#include <vector>

namespace donorspin {

struct DecayFit {
  double amplitude = 0.0;
  double t2 = 0.0;        // time constant of exp(-t/T2) or exp(-(t/T2)^2)
  double rss = 0.0;       // residual sum of squares
  bool converged = false;
};

// Least-squares fit of y = A exp(-t/T2). Gauss-Newton with step damping,
// seeded from a log-linear fit of the positive samples.
DecayFit fit_exponential_decay(std::span<const double> t, std::span<const double> y);

// Least-squares fit of y = A exp(-(t/T2)^2).
DecayFit fit_gaussian_decay(std::span<const double> t, std::span<const double> y);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Slope of log(y) against log(x); inputs must be positive.
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace donorspin
