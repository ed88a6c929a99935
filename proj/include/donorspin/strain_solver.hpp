#pragma once

#include <vector>

#include "donorspin/grid.hpp"
#include "donorspin/profiles.hpp"
#include "donorspin/spin_hamiltonian.hpp"

namespace donorspin {

// Linear elastic material with thermal expansion. Cubic stiffness is kept in
// (c11, c12, c44); isotropic materials store the equivalent Lame form.
struct MaterialProps {
  double c11 = 0.0, c12 = 0.0, c44 = 0.0;  // Pa
  double thermal_expansion = 0.0;          // 1/K

  static MaterialProps cubic(double c11, double c12, double c44, double alpha);
  static MaterialProps isotropic(double youngs, double poisson, double alpha);

  bool positive_definite() const {
    return c44 > 0 && c11 > std::abs(c12) && c11 + 2 * c12 > 0;
  }

  static MaterialProps silicon();   // Table values: 166 / 64 / 80 GPa, 0.7e-6 /K
  static MaterialProps aluminum();  // isotropic 70 GPa, 0.33, 14.3e-6 /K
};

struct DeviceGeometry {
  double wire_width = 5e-6;
  double wire_thickness = 50e-9;
  double wire_length = 700e-6;
  double domain_halfwidth = 50e-6;  // >= 10 wire widths
  double domain_depth = 25e-6;      // >= 5 wire widths
  double t_dep = 300.0;             // deposition temperature (K)
  double t_op = 0.015;              // operating temperature (K)

  void validate() const;
};

struct MeshOptions {
  double edge_resolution = 10e-9;    // element size near the wire edges
  double surface_resolution = 5e-9;  // element size at the substrate surface
  double growth = 1.30;              // spacing ramp factor away from features
  int film_layers = 4;
};

// Strain tensor components of the substrate on a rectilinear grid; y is depth
// below the surface. The wire axis z is the plane-strain direction, so
// e_zz = 0 relative to freely contracted silicon.
struct StrainField {
  RectGrid grid;
  std::vector<double> exx, eyy, ezz, exy;

  StrainTensor at_node(std::size_t ix, std::size_t iy) const {
    const std::size_t k = grid.index(ix, iy);
    return StrainTensor{exx[k], eyy[k], ezz[k], exy[k]};
  }
  StrainTensor sample(double x, double y) const;
};

struct ShiftMap {
  RectGrid grid;
  std::vector<double> f_delta;  // Hz

  double sample(double x, double y) const { return sample_bilinear(grid, f_delta, x, y); }
};

// Plane-strain thermoelastic solve of the film-on-substrate cross section.
// The film carries the stress-free mismatch strain -(alpha_f - alpha_s)
// (T_dep - T_op); the substrate is the reference. Bilinear quadrilateral
// elements on a graded mesh, fixed bottom, traction-free sides and top.
StrainField solve_thermoelastic(const DeviceGeometry& geom, const MaterialProps& wire,
                                const MaterialProps& substrate,
                                const MeshOptions& mesh = {});

// Pointwise (e_xx + e_yy + e_zz) / 3.
std::vector<double> hydrostatic(const StrainField& field);

ShiftMap shift_map(const StrainField& field, const SpinSystem& sys);

// Restrict / resample a shift map onto a smaller grid (donor region).
ShiftMap resample(const ShiftMap& map, const RectGrid& grid);

struct IsoShiftRegion {
  std::vector<std::uint8_t> mask;  // per grid node
  double area = 0.0;               // sum of dual-cell areas (m^2)
  double mean_abs_x = 0.0;         // donor-density-weighted <|x|>
  double mean_depth = 0.0;         // donor-density-weighted <y>
  double weight = 0.0;             // integral of rho over the region (1/m)
  bool empty() const { return weight == 0.0; }
};

// Nodes whose shift lies within target +- half_bandwidth (Hz), with moments
// weighted by the donor depth profile.
IsoShiftRegion iso_shift_region(const ShiftMap& map, double target, double half_bandwidth,
                                const DonorProfile& profile);

}  // namespace donorspin
