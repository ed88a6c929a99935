#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "donorspin/constants.hpp"

namespace donorspin {

// Coupled electron-nuclear spin of a group-V donor, S = 1/2 against nuclear
// spin I. Defaults are bismuth in silicon. All frequencies are angular
// (rad/s); gyromagnetic ratios are rad/s per tesla.
struct SpinSystem {
  double electron_spin = 0.5;
  double nuclear_spin = 4.5;
  double hyperfine = kTwoPi * 1.475e9;   // A
  double gamma_e = kTwoPi * 28.0e9;
  double gamma_n = kTwoPi * 7.0e6;

  // Hyperfine response to strain (dimensionless couplings) and to electric
  // field (quadratic Stark coefficient, m^2/V^2).
  double strain_k = 19.1;
  double strain_l = 9720.0;
  double stark_eta = -0.26e-15;

  int dim() const {
    return static_cast<int>((2 * electron_spin + 1) * (2 * nuclear_spin + 1) + 0.5);
  }

  static SpinSystem bismuth() { return SpinSystem{}; }
};

struct LevelLabel {
  int f = 0;  // total angular momentum manifold (4 or 5 for Si:Bi)
  int m = 0;  // conserved projection of F_z
};

struct EnergyLevels {
  double field = 0.0;                 // B0 (T)
  Eigen::VectorXd eigenvalues;        // ascending, rad/s
  Eigen::MatrixXd eigenvectors;       // column k belongs to eigenvalue k
  std::vector<LevelLabel> labels;

  int find(int f, int m) const;       // level index, -1 if absent
};

// One EPR transition branch between the F = I-1/2 and F = I+1/2 manifolds.
// Quasi-degenerate branches share a resolved line index (1..10 for Si:Bi);
// lines are numbered from the lowest-frequency branch upward, which for the
// low-field law corresponds to m_line = min(m_lower, m_upper) = line - 6.
struct Transition {
  int line = 0;
  int branch = 0;        // 0: |4,m> -> |5,m+1>, 1: |4,m+1> -> |5,m>
  int lower_m = 0;       // m of the F=4 level
  int upper_m = 0;       // m of the F=5 level
  int lower_index = 0;
  int upper_index = 0;
  double omega = 0.0;       // rad/s
  double sx_element = 0.0;  // |<lower|S_x|upper>|
};

struct ClockTransition {
  double field = 0.0;  // T
  int branch = 0;
};

struct StrainTensor {
  double exx = 0.0, eyy = 0.0, ezz = 0.0, exy = 0.0;
};

// H / hbar = A S.I + (gamma_e S_z + gamma_n I_z) B0, in the product basis
// |m_S> (x) |m_I>, m_S descending then m_I descending.
Eigen::MatrixXd build_hamiltonian(const SpinSystem& sys, double b0);

// Electron S_x in the same product basis, for matrix elements.
Eigen::MatrixXd electron_sx(const SpinSystem& sys);

// Diagonalizes a Hamiltonian that conserves F_z = S_z + I_z. Eigenpairs come
// from the decoupled m blocks, which fixes the eigenvectors deterministically
// through the zero-field degeneracy: in each block, the lower level is F =
// I-1/2 and the upper F = I+1/2, which reproduces adiabatic continuation from
// B0 = 0. Throws std::invalid_argument for non-Hermitian input.
EnergyLevels diagonalize(const SpinSystem& sys, const Eigen::MatrixXd& h);

EnergyLevels levels_at(const SpinSystem& sys, double b0);

// All |dm| = 1 transitions between the two manifolds, sorted by line then
// branch (18 branches in 10 lines for Si:Bi).
std::vector<Transition> list_transitions(const SpinSystem& sys, const EnergyLevels& levels);

std::optional<Transition> find_transition(const std::vector<Transition>& ts,
                                          int line, int branch);

// Low-field approximation  omega(m) = 5A + (2m+1)/10 gamma_e B0
// (general S=1/2 form: A(I+1/2) + (2m+1)/(2I+1) gamma_e B0).
double low_field_frequency(const SpinSystem& sys, int m, double b0);

// d(omega)/d(B0) by central finite difference with step
// max(1e-7 T, 1e-4 B0); signed.
double effective_gamma(const SpinSystem& sys, int line, int branch, double b0);

// Field where effective_gamma crosses zero, scanned over (b_min, b_max) and
// refined by bisection to 1 uT. Returns nullopt if the slope never changes
// sign (no clock transition).
std::optional<ClockTransition> find_clock_transition(const SpinSystem& sys, int line,
                                                     double b_min = 1e-4, double b_max = 0.1);

// Common frequency shift (Hz) of all transitions from the hyperfine change:
//   dA/A = (K/3) tr(eps) - (L/2) [(exx-eyy)^2 + (eyy-ezz)^2 + (ezz-exx)^2]
//   f_shift = 5 dA / 2pi
double shift_from_strain(const StrainTensor& eps, const SpinSystem& sys);

// Quadratic Stark shift, dA/A = eta E^2 (E in V/m).
double shift_from_field(double e_field, const SpinSystem& sys);

}  // namespace donorspin
