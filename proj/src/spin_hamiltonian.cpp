#include "donorspin/spin_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace donorspin {

namespace {

// Product-basis state list: |m_S> (x) |m_I>, both projections descending.
struct Basis {
  std::vector<double> ms, mi;
  int dim = 0;
};

Basis make_basis(const SpinSystem& sys) {
  Basis b;
  const int ns = static_cast<int>(2 * sys.electron_spin + 1.5);
  const int ni = static_cast<int>(2 * sys.nuclear_spin + 1.5);
  b.dim = ns * ni;
  b.ms.resize(b.dim);
  b.mi.resize(b.dim);
  int k = 0;
  for (int a = 0; a < ns; ++a) {
    for (int c = 0; c < ni; ++c, ++k) {
      b.ms[k] = sys.electron_spin - a;
      b.mi[k] = sys.nuclear_spin - c;
    }
  }
  return b;
}

// <j', m +- 1 | J+- | j, m> = sqrt(j(j+1) - m(m +- 1))
double ladder(double j, double m, int sign) {
  const double v = j * (j + 1) - m * (m + sign);
  return v > 0 ? std::sqrt(v) : 0.0;
}

}  // namespace

Eigen::MatrixXd build_hamiltonian(const SpinSystem& sys, double b0) {
  if (b0 < 0) throw std::invalid_argument("build_hamiltonian: B0 must be >= 0");
  const Basis b = make_basis(sys);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(b.dim, b.dim);
  const double a = sys.hyperfine;
  for (int i = 0; i < b.dim; ++i) {
    h(i, i) = a * b.ms[i] * b.mi[i] + b0 * (sys.gamma_e * b.ms[i] + sys.gamma_n * b.mi[i]);
    for (int j = 0; j < b.dim; ++j) {
      // (A/2)(S+ I- + S- I+): raises m_S while lowering m_I and vice versa.
      if (b.ms[j] + 1 == b.ms[i] && b.mi[j] - 1 == b.mi[i]) {
        h(i, j) += 0.5 * a * ladder(sys.electron_spin, b.ms[j], +1) *
                   ladder(sys.nuclear_spin, b.mi[j], -1);
      }
      if (b.ms[j] - 1 == b.ms[i] && b.mi[j] + 1 == b.mi[i]) {
        h(i, j) += 0.5 * a * ladder(sys.electron_spin, b.ms[j], -1) *
                   ladder(sys.nuclear_spin, b.mi[j], +1);
      }
    }
  }
  return h;
}

Eigen::MatrixXd electron_sx(const SpinSystem& sys) {
  const Basis b = make_basis(sys);
  Eigen::MatrixXd sx = Eigen::MatrixXd::Zero(b.dim, b.dim);
  for (int i = 0; i < b.dim; ++i) {
    for (int j = 0; j < b.dim; ++j) {
      if (b.mi[i] != b.mi[j]) continue;
      if (b.ms[i] == b.ms[j] + 1)
        sx(i, j) += 0.5 * ladder(sys.electron_spin, b.ms[j], +1);
      if (b.ms[i] == b.ms[j] - 1)
        sx(i, j) += 0.5 * ladder(sys.electron_spin, b.ms[j], -1);
    }
  }
  return sx;
}

int EnergyLevels::find(int f, int m) const {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k].f == f && labels[k].m == m) return static_cast<int>(k);
  return -1;
}

EnergyLevels diagonalize(const SpinSystem& sys, const Eigen::MatrixXd& h) {
  const Basis b = make_basis(sys);
  if (h.rows() != b.dim || h.cols() != b.dim)
    throw std::invalid_argument("diagonalize: dimension mismatch with spin system");
  const double scale = h.cwiseAbs().maxCoeff();
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("diagonalize: Hamiltonian is not Hermitian");

  // Group basis states by the conserved projection m = m_S + m_I.
  std::map<int, std::vector<int>> blocks;  // key: 2m (integer even for Si:Bi)
  for (int i = 0; i < b.dim; ++i) {
    const int two_m = static_cast<int>(std::lround(2 * (b.ms[i] + b.mi[i])));
    blocks[two_m].push_back(i);
  }
  // H must not couple different blocks (F_z conserved).
  for (const auto& [two_m, idx] : blocks) {
    for (int i : idx)
      for (int j = 0; j < b.dim; ++j)
        if (std::abs(h(i, j)) > 1e-9 * scale &&
            std::lround(2 * (b.ms[j] + b.mi[j])) != two_m)
          throw std::invalid_argument("diagonalize: Hamiltonian does not conserve F_z");
  }

  const int f_low = static_cast<int>(std::lround(sys.nuclear_spin - sys.electron_spin));
  const int f_high = static_cast<int>(std::lround(sys.nuclear_spin + sys.electron_spin));

  struct Entry {
    double e;
    Eigen::VectorXd v;
    LevelLabel label;
  };
  std::vector<Entry> entries;
  entries.reserve(b.dim);
  for (const auto& [two_m, idx] : blocks) {
    const int n = static_cast<int>(idx.size());
    Eigen::MatrixXd sub(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) sub(r, c) = h(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(b.dim);
      for (int r = 0; r < n; ++r) v(idx[r]) = es.eigenvectors()(r, k);
      // Phase fix: largest-magnitude component positive.
      int imax = 0;
      v.cwiseAbs().maxCoeff(&imax);
      if (v(imax) < 0) v = -v;
      // Within a block the lower level continues from the F = I-1/2
      // manifold at B0 = 0, the upper from F = I+1/2 (no block-internal
      // crossing: the hyperfine off-diagonal element is field-independent).
      Entry e;
      e.e = es.eigenvalues()(k);
      e.v = std::move(v);
      e.label.m = two_m / 2;
      e.label.f = (n == 1) ? f_high : (k == 0 ? f_low : f_high);
      entries.push_back(std::move(e));
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& c) { return a.e < c.e; });

  EnergyLevels out;
  out.eigenvalues.resize(b.dim);
  out.eigenvectors.resize(b.dim, b.dim);
  out.labels.resize(b.dim);
  for (int k = 0; k < b.dim; ++k) {
    out.eigenvalues(k) = entries[k].e;
    out.eigenvectors.col(k) = entries[k].v;
    out.labels[k] = entries[k].label;
  }
  return out;
}

EnergyLevels levels_at(const SpinSystem& sys, double b0) {
  EnergyLevels lv = diagonalize(sys, build_hamiltonian(sys, b0));
  lv.field = b0;
  return lv;
}

std::vector<Transition> list_transitions(const SpinSystem& sys, const EnergyLevels& levels) {
  const Eigen::MatrixXd sx = electron_sx(sys);
  const int f_low = static_cast<int>(std::lround(sys.nuclear_spin - sys.electron_spin));
  const int f_high = f_low + 1;
  const int line_offset = f_high + 1;  // m_line = line - (f_high + 1)

  std::vector<Transition> out;
  for (int lo = 0; lo < levels.eigenvalues.size(); ++lo) {
    if (levels.labels[lo].f != f_low) continue;
    for (int up = 0; up < levels.eigenvalues.size(); ++up) {
      if (levels.labels[up].f != f_high) continue;
      const int dm = levels.labels[up].m - levels.labels[lo].m;
      if (dm != 1 && dm != -1) continue;
      Transition t;
      t.lower_m = levels.labels[lo].m;
      t.upper_m = levels.labels[up].m;
      t.lower_index = lo;
      t.upper_index = up;
      t.branch = (dm == 1) ? 0 : 1;
      t.line = std::min(t.lower_m, t.upper_m) + line_offset;
      t.omega = levels.eigenvalues(up) - levels.eigenvalues(lo);
      t.sx_element = std::abs(levels.eigenvectors.col(lo).dot(sx * levels.eigenvectors.col(up)));
      out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) {
    return a.line != b.line ? a.line < b.line : a.branch < b.branch;
  });
  return out;
}

std::optional<Transition> find_transition(const std::vector<Transition>& ts,
                                          int line, int branch) {
  for (const auto& t : ts)
    if (t.line == line && t.branch == branch) return t;
  return std::nullopt;
}

double low_field_frequency(const SpinSystem& sys, int m, double b0) {
  const double zfs = sys.hyperfine * (sys.nuclear_spin + 0.5);
  const double denom = 2 * sys.nuclear_spin + 1;
  return zfs + (2 * m + 1) / denom * sys.gamma_e * b0;
}

namespace {

double branch_frequency(const SpinSystem& sys, int line, int branch, double b0) {
  const auto ts = list_transitions(sys, levels_at(sys, b0));
  const auto t = find_transition(ts, line, branch);
  if (!t) throw std::invalid_argument("unknown transition line/branch");
  return t->omega;
}

}  // namespace

double effective_gamma(const SpinSystem& sys, int line, int branch, double b0) {
  if (b0 < 0) throw std::invalid_argument("effective_gamma: B0 must be >= 0");
  const double step = std::max(1e-7, 1e-4 * b0);
  const double lo = std::max(0.0, b0 - step);
  const double hi = b0 + step;
  return (branch_frequency(sys, line, branch, hi) - branch_frequency(sys, line, branch, lo)) /
         (hi - lo);
}

std::optional<ClockTransition> find_clock_transition(const SpinSystem& sys, int line,
                                                     double b_min, double b_max) {
  constexpr int kScanPoints = 60;
  constexpr double kTol = 1e-6;  // 1 uT
  std::optional<ClockTransition> best;
  for (int branch = 0; branch < 2; ++branch) {
    // Line 1 and the top line have a single branch.
    double prev_b = b_min;
    double prev_g;
    try {
      prev_g = effective_gamma(sys, line, branch, prev_b);
    } catch (const std::invalid_argument&) {
      continue;
    }
    for (int k = 1; k <= kScanPoints; ++k) {
      const double cur_b = b_min + (b_max - b_min) * k / kScanPoints;
      const double cur_g = effective_gamma(sys, line, branch, cur_b);
      if (prev_g == 0.0 || (prev_g < 0) != (cur_g < 0)) {
        double lo = prev_b, hi = cur_b, glo = prev_g;
        while (hi - lo > kTol) {
          const double mid = 0.5 * (lo + hi);
          const double gm = effective_gamma(sys, line, branch, mid);
          if (gm == 0.0) {
            lo = hi = mid;
            break;
          }
          if ((gm < 0) == (glo < 0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        if (!best || root < best->field) best = ClockTransition{root, branch};
        break;  // lowest-field root of this branch
      }
      prev_b = cur_b;
      prev_g = cur_g;
    }
  }
  return best;
}

double shift_from_strain(const StrainTensor& eps, const SpinSystem& sys) {
  const double hydro = eps.exx + eps.eyy + eps.ezz;
  const double dev = (eps.exx - eps.eyy) * (eps.exx - eps.eyy) +
                     (eps.eyy - eps.ezz) * (eps.eyy - eps.ezz) +
                     (eps.ezz - eps.exx) * (eps.ezz - eps.exx);
  const double da_over_a = sys.strain_k / 3.0 * hydro - sys.strain_l / 2.0 * dev;
  return (sys.nuclear_spin + 0.5) * da_over_a * sys.hyperfine / kTwoPi;
}

double shift_from_field(double e_field, const SpinSystem& sys) {
  const double da_over_a = sys.stark_eta * e_field * e_field;
  return (sys.nuclear_spin + 0.5) * da_over_a * sys.hyperfine / kTwoPi;
}

}  // namespace donorspin
