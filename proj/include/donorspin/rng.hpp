#pragma once

#include <cmath>
#include <cstdint>

namespace donorspin {

// Counter-based generator: output k is a hash of (key, k). Streams derived
// with derive() are independent for distinct indices, so Monte Carlo
// realizations can be seeded deterministically from one master seed and run
// in any order or thread layout with bit-identical results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key = 0) : key_(key) {}

  // Independent stream for sub-task `index` (e.g. one bath realization).
  CounterRng derive(std::uint64_t index) const {
    return CounterRng(mix(key_ ^ (0x9e3779b97f4a7c15ull + index * 0xbf58476d1ce4e5b9ull)));
  }

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ull); }

  // Uniform in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; implemented here (not std::) so the
  // stream is identical across standard libraries.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(6.283185307179586 * u2);
    have_spare_ = true;
    return r * std::cos(6.283185307179586 * u2);
  }

  // Uniform direction on the unit sphere.
  void unit_sphere(double& x, double& y, double& z) {
    const double c = 2.0 * uniform() - 1.0;  // cos(theta)
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = 6.283185307179586 * uniform();
    x = s * std::cos(phi);
    y = s * std::sin(phi);
    z = c;
  }

  // Poisson count. Knuth's product method for small means, rounded normal
  // approximation above (adequate for bath population counts).
  std::uint64_t poisson(double mean) {
    if (mean <= 0) return 0;
    if (mean < 64.0) {
      const double limit = std::exp(-mean);
      std::uint64_t n = 0;
      double prod = uniform();
      while (prod > limit) {
        ++n;
        prod *= uniform();
      }
      return n;
    }
    const double g = mean + std::sqrt(mean) * normal();
    return g < 0 ? 0 : static_cast<std::uint64_t>(std::llround(g));
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace donorspin
