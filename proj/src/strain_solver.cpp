#include "donorspin/strain_solver.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace donorspin {

MaterialProps MaterialProps::cubic(double c11, double c12, double c44, double alpha) {
  MaterialProps m{c11, c12, c44, alpha};
  if (!m.positive_definite()) throw std::invalid_argument("stiffness not positive definite");
  if (alpha <= 0) throw std::invalid_argument("thermal expansion must be > 0");
  return m;
}

MaterialProps MaterialProps::isotropic(double youngs, double poisson, double alpha) {
  const double lambda = youngs * poisson / ((1 + poisson) * (1 - 2 * poisson));
  const double mu = youngs / (2 * (1 + poisson));
  return cubic(lambda + 2 * mu, lambda, mu, alpha);
}

MaterialProps MaterialProps::silicon() {
  return cubic(166e9, 64e9, 80e9, 0.7e-6);
}

MaterialProps MaterialProps::aluminum() {
  return isotropic(70e9, 0.33, 14.3e-6);
}

void DeviceGeometry::validate() const {
  if (wire_width <= 0 || wire_thickness <= 0 || wire_length <= 0)
    throw std::invalid_argument("wire dimensions must be positive");
  if (domain_halfwidth < 10 * wire_width)
    throw std::invalid_argument("domain half-width must be >= 10 wire widths");
  if (domain_depth < 5 * wire_width)
    throw std::invalid_argument("domain depth must be >= 5 wire widths");
  if (!(t_dep > t_op)) throw std::invalid_argument("deposition must be warmer than operation");
}

StrainTensor StrainField::sample(double x, double y) const {
  return StrainTensor{sample_bilinear(grid, exx, x, y), sample_bilinear(grid, eyy, x, y),
                      sample_bilinear(grid, ezz, x, y), sample_bilinear(grid, exy, x, y)};
}

namespace {

struct Mesh {
  std::vector<double> x;      // full lateral axis
  std::vector<double> y;      // film rows (y < 0) then substrate rows (y >= 0)
  std::size_t sub_row0 = 0;   // index of the y = 0 row
  std::size_t nx() const { return x.size(); }
  std::size_t ny() const { return y.size(); }
  std::size_t node(std::size_t ix, std::size_t iy) const { return iy * nx() + ix; }
};

Mesh build_mesh(const DeviceGeometry& g, const MeshOptions& opt) {
  const double a = 0.5 * g.wire_width;
  const double band = std::min(200e-9, 0.5 * a);  // fine band around the edge
  const double h_edge = opt.edge_resolution;
  const double h_center = std::min(a / 12, 50 * h_edge);
  const double h_far = g.domain_halfwidth / 12;

  std::vector<std::vector<double>> xin;
  xin.push_back(graded_segment(0.0, a - band, h_center, h_edge, opt.growth, h_center));
  {
    // uniform fine band straddling the edge
    const int nb = std::max(2, static_cast<int>(std::lround(2 * band / h_edge)));
    std::vector<double> bseg(nb + 1);
    for (int i = 0; i <= nb; ++i) bseg[i] = (a - band) + 2 * band * i / nb;
    xin.push_back(bseg);
  }
  xin.push_back(graded_segment(a + band, g.domain_halfwidth, h_edge, h_far, opt.growth, h_far));
  Mesh m;
  m.x = mirror_axis(join_axes(xin));

  const double donor_zone = 300e-9;
  std::vector<std::vector<double>> yin;
  yin.push_back(graded_segment(0.0, donor_zone, opt.surface_resolution,
                               3 * opt.surface_resolution, opt.growth,
                               3 * opt.surface_resolution));
  yin.push_back(graded_segment(donor_zone, g.domain_depth, 3 * opt.surface_resolution,
                               g.domain_depth / 10, opt.growth, g.domain_depth / 10));
  const std::vector<double> ysub = join_axes(yin);

  std::vector<double> y;
  for (int i = opt.film_layers; i >= 1; --i)
    y.push_back(-g.wire_thickness * i / opt.film_layers);
  m.sub_row0 = y.size();
  for (double q : ysub) y.push_back(q);
  m.y = std::move(y);
  return m;
}

// Plane-strain stiffness in Voigt order (e_xx, e_yy, gamma_xy).
Eigen::Matrix3d plane_strain_d(const MaterialProps& mp) {
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();
  d(0, 0) = d(1, 1) = mp.c11;
  d(0, 1) = d(1, 0) = mp.c12;
  d(2, 2) = mp.c44;
  return d;
}

// B matrix of a rectangular bilinear quad at local coordinates (xi, eta).
// Node order: (-1,-1), (1,-1), (1,1), (-1,1).
Eigen::Matrix<double, 3, 8> b_matrix(double xi, double eta, double hx, double hy) {
  const double dndxi[4] = {-(1 - eta) / 4, (1 - eta) / 4, (1 + eta) / 4, -(1 + eta) / 4};
  const double dndeta[4] = {-(1 - xi) / 4, -(1 + xi) / 4, (1 + xi) / 4, (1 - xi) / 4};
  Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
  for (int n = 0; n < 4; ++n) {
    const double dnx = dndxi[n] * 2 / hx;
    const double dny = dndeta[n] * 2 / hy;
    b(0, 2 * n) = dnx;
    b(1, 2 * n + 1) = dny;
    b(2, 2 * n) = dny;
    b(2, 2 * n + 1) = dnx;
  }
  return b;
}

}  // namespace

StrainField solve_thermoelastic(const DeviceGeometry& geom, const MaterialProps& wire,
                                const MaterialProps& substrate, const MeshOptions& opt) {
  geom.validate();
  if (!wire.positive_definite() || !substrate.positive_definite())
    throw std::invalid_argument("stiffness not positive definite");

  const Mesh mesh = build_mesh(geom, opt);
  const std::size_t nx = mesh.nx(), ny = mesh.ny();
  const double half_w = 0.5 * geom.wire_width;
  const double mismatch =
      -(wire.thermal_expansion - substrate.thermal_expansion) * (geom.t_dep - geom.t_op);

  const Eigen::Matrix3d d_film = plane_strain_d(wire);
  const Eigen::Matrix3d d_sub = plane_strain_d(substrate);
  const Eigen::Vector3d s_thermal =
      (wire.c11 + 2 * wire.c12) * mismatch * Eigen::Vector3d(1, 1, 0);

  // Active elements: all substrate cells, film cells only under the strip.
  auto element_active = [&](std::size_t ex, std::size_t ey) {
    if (ey >= mesh.sub_row0) return true;
    const double xc = 0.5 * (mesh.x[ex] + mesh.x[ex + 1]);
    return std::abs(xc) < half_w;
  };

  std::vector<char> node_active(nx * ny, 0);
  for (std::size_t ey = 0; ey + 1 < ny; ++ey)
    for (std::size_t ex = 0; ex + 1 < nx; ++ex)
      if (element_active(ex, ey))
        for (int c = 0; c < 4; ++c) {
          const std::size_t ix = ex + (c == 1 || c == 2);
          const std::size_t iy = ey + (c == 2 || c == 3);
          node_active[mesh.node(ix, iy)] = 1;
        }

  // Free-DOF numbering; the bottom row is clamped.
  std::vector<int> dof(2 * nx * ny, -1);
  int n_free = 0;
  for (std::size_t iy = 0; iy + 1 < ny; ++iy)
    for (std::size_t ix = 0; ix < nx; ++ix)
      if (node_active[mesh.node(ix, iy)]) {
        dof[2 * mesh.node(ix, iy)] = n_free++;
        dof[2 * mesh.node(ix, iy) + 1] = n_free++;
      }

  const double gp[2] = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(64 * nx * ny);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_free);

  for (std::size_t ey = 0; ey + 1 < ny; ++ey) {
    for (std::size_t ex = 0; ex + 1 < nx; ++ex) {
      if (!element_active(ex, ey)) continue;
      const bool film = ey < mesh.sub_row0;
      const double hx = mesh.x[ex + 1] - mesh.x[ex];
      const double hy = mesh.y[ey + 1] - mesh.y[ey];
      const Eigen::Matrix3d& d = film ? d_film : d_sub;

      Eigen::Matrix<double, 8, 8> ke = Eigen::Matrix<double, 8, 8>::Zero();
      Eigen::Matrix<double, 8, 1> fe = Eigen::Matrix<double, 8, 1>::Zero();
      for (double xi : gp) {
        for (double eta : gp) {
          const auto b = b_matrix(xi, eta, hx, hy);
          const double dv = hx * hy / 4;
          ke += b.transpose() * d * b * dv;
          if (film) fe += b.transpose() * s_thermal * dv;
        }
      }

      const std::size_t nodes[4] = {mesh.node(ex, ey), mesh.node(ex + 1, ey),
                                    mesh.node(ex + 1, ey + 1), mesh.node(ex, ey + 1)};
      for (int r = 0; r < 8; ++r) {
        const int gr = dof[2 * nodes[r / 2] + (r % 2)];
        if (gr < 0) continue;
        rhs(gr) += fe(r);
        for (int c = 0; c < 8; ++c) {
          const int gc = dof[2 * nodes[c / 2] + (c % 2)];
          if (gc >= 0) trip.emplace_back(gr, gc, ke(r, c));
        }
      }
    }
  }

  Eigen::SparseMatrix<double> k(n_free, n_free);
  k.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(k);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("thermoelastic solve: singular stiffness assembly");
  const Eigen::VectorXd u = solver.solve(rhs);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("thermoelastic solve: linear solve failed");
  const double residual = (k * u - rhs).norm();
  if (!(residual <= 1e-8 * (rhs.norm() + 1.0)))
    throw std::runtime_error("thermoelastic solve: residual too large: " +
                             std::to_string(residual));

  auto disp = [&](std::size_t ix, std::size_t iy, int comp) -> double {
    const int q = dof[2 * mesh.node(ix, iy) + comp];
    return q >= 0 ? u(q) : 0.0;
  };

  // Strain recovery: evaluate B u at element corners, average over the
  // substrate elements sharing each node (surface nodes take no film
  // contribution, the reported field is the substrate side).
  const std::size_t nys = ny - mesh.sub_row0;
  StrainField field;
  field.grid.x = mesh.x;
  field.grid.y.assign(mesh.y.begin() + mesh.sub_row0, mesh.y.end());
  field.exx.assign(nx * nys, 0.0);
  field.eyy.assign(nx * nys, 0.0);
  field.ezz.assign(nx * nys, 0.0);
  field.exy.assign(nx * nys, 0.0);
  std::vector<double> count(nx * nys, 0.0);

  const double corner[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (std::size_t ey = mesh.sub_row0; ey + 1 < ny; ++ey) {
    for (std::size_t ex = 0; ex + 1 < nx; ++ex) {
      const double hx = mesh.x[ex + 1] - mesh.x[ex];
      const double hy = mesh.y[ey + 1] - mesh.y[ey];
      Eigen::Matrix<double, 8, 1> ue;
      const std::size_t cx[4] = {ex, ex + 1, ex + 1, ex};
      const std::size_t cy[4] = {ey, ey, ey + 1, ey + 1};
      for (int n = 0; n < 4; ++n) {
        ue(2 * n) = disp(cx[n], cy[n], 0);
        ue(2 * n + 1) = disp(cx[n], cy[n], 1);
      }
      for (int n = 0; n < 4; ++n) {
        const auto b = b_matrix(corner[n][0], corner[n][1], hx, hy);
        const Eigen::Vector3d eps = b * ue;  // e_xx, e_yy, gamma_xy
        const std::size_t k_out = (cy[n] - mesh.sub_row0) * nx + cx[n];
        field.exx[k_out] += eps(0);
        field.eyy[k_out] += eps(1);
        field.exy[k_out] += 0.5 * eps(2);
        count[k_out] += 1.0;
      }
    }
  }
  for (std::size_t k_out = 0; k_out < count.size(); ++k_out) {
    if (count[k_out] > 0) {
      field.exx[k_out] /= count[k_out];
      field.eyy[k_out] /= count[k_out];
      field.exy[k_out] /= count[k_out];
    }
  }
  return field;
}

std::vector<double> hydrostatic(const StrainField& field) {
  std::vector<double> out(field.exx.size());
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = (field.exx[k] + field.eyy[k] + field.ezz[k]) / 3.0;
  return out;
}

ShiftMap shift_map(const StrainField& field, const SpinSystem& sys) {
  ShiftMap map;
  map.grid = field.grid;
  map.f_delta.resize(field.exx.size());
  for (std::size_t iy = 0; iy < field.grid.ny(); ++iy)
    for (std::size_t ix = 0; ix < field.grid.nx(); ++ix) {
      const std::size_t k = field.grid.index(ix, iy);
      map.f_delta[k] = shift_from_strain(field.at_node(ix, iy), sys);
    }
  return map;
}

ShiftMap resample(const ShiftMap& map, const RectGrid& grid) {
  ShiftMap out;
  out.grid = grid;
  out.f_delta.resize(grid.size());
  for (std::size_t iy = 0; iy < grid.ny(); ++iy)
    for (std::size_t ix = 0; ix < grid.nx(); ++ix)
      out.f_delta[grid.index(ix, iy)] = map.sample(grid.x[ix], grid.y[iy]);
  return out;
}

IsoShiftRegion iso_shift_region(const ShiftMap& map, double target, double half_bandwidth,
                                const DonorProfile& profile) {
  if (!(half_bandwidth > 0)) throw std::invalid_argument("half_bandwidth must be > 0");
  IsoShiftRegion region;
  region.mask.assign(map.grid.size(), 0);
  double wx = 0, wy = 0, wsum = 0;
  for (std::size_t iy = 0; iy < map.grid.ny(); ++iy) {
    const double rho = profile.at(map.grid.y[iy]);
    for (std::size_t ix = 0; ix < map.grid.nx(); ++ix) {
      const std::size_t k = map.grid.index(ix, iy);
      if (std::abs(map.f_delta[k] - target) > half_bandwidth) continue;
      region.mask[k] = 1;
      const double area = map.grid.cell_area(ix, iy);
      region.area += area;
      const double w = rho * area;
      wsum += w;
      wx += w * std::abs(map.grid.x[ix]);
      wy += w * map.grid.y[iy];
    }
  }
  region.weight = wsum;
  if (wsum > 0) {
    region.mean_abs_x = wx / wsum;
    region.mean_depth = wy / wsum;
  }
  return region;
}

}  // namespace donorspin
