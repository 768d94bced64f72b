#include "pmorkit/chamber.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pmorkit/errors.hpp"

namespace pmk {

namespace {

inline Eigen::Vector2d node_pos(const ChamberMesh& mesh, const Vector& d, int i) {
  return mesh.ref_pos.col(i) + Eigen::Vector2d(d(2 * i), d(2 * i + 1));
}

// 90 degree clockwise rotation; maps a CCW edge vector to an outward normal
// scaled by the edge length.
inline Eigen::Vector2d rot_cw(const Eigen::Vector2d& v) {
  return {v.y(), -v.x()};
}

constexpr double kCollapseTol = 1e-9;

}  // namespace

void ChamberMesh::validate() const {
  if (node_count < 8) fail(ErrorCode::invalid_config, "mesh: need at least 8 nodes");
  if (ref_pos.cols() != node_count || ref_pos.rows() != 2)
    fail(ErrorCode::invalid_config, "mesh: reference positions inconsistent");
  if (node_mass.size() != node_count || (node_mass.array() <= 0.0).any())
    fail(ErrorCode::invalid_config, "mesh: node masses must be positive");
  const Vector zero = Vector::Zero(dofs());
  if (!polygon_is_simple(*this, zero))
    fail(ErrorCode::invalid_config, "mesh: reference polygon self-intersects");
}

ChamberMesh ChamberMesh::make_ring(int n, double r0, double mass_per_node_g,
                                   double rho_scale, int marked_count) {
  ChamberMesh mesh;
  mesh.node_count = n;
  mesh.radius = r0;
  mesh.ref_pos.resize(2, n);
  for (int i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * i / n;
    mesh.ref_pos(0, i) = r0 * std::cos(angle);
    mesh.ref_pos(1, i) = r0 * std::sin(angle);
  }
  // Node masses are configured in g; internal unit system (kPa, mm, s) has
  // the force unit kPa*mm^2 = mN, hence mass in kg.
  mesh.node_mass = Vector::Constant(n, mass_per_node_g * 1e-3 * rho_scale);

  // Rank nodes by angular distance to the top of the ring, ties to the
  // smaller index.
  std::vector<int> by_top(n);
  for (int i = 0; i < n; ++i) by_top[i] = i;
  auto top_dist = [&](int i) {
    const double angle = 2.0 * std::numbers::pi * i / n;
    double delta = std::abs(angle - 0.5 * std::numbers::pi);
    return std::min(delta, 2.0 * std::numbers::pi - delta);
  };
  std::stable_sort(by_top.begin(), by_top.end(), [&](int a, int b) {
    const double da = top_dist(a), db = top_dist(b);
    if (da != db) return da < db;
    return a < b;
  });
  mesh.pinned_nodes = {by_top[0], (by_top[0] + 1) % n};
  marked_count = std::min(marked_count, n);
  mesh.marked_nodes.assign(by_top.begin(), by_top.begin() + marked_count);
  std::sort(mesh.marked_nodes.begin(), mesh.marked_nodes.end());
  mesh.validate();
  return mesh;
}

void ChamberMaterial::validate() const {
  if (!(k_lin > 0.0)) fail(ErrorCode::invalid_config, "material: k_lin must be > 0");
  if (k_cub < 0.0 || c_visc < 0.0 || k_v < 0.0 || c_v < 0.0)
    fail(ErrorCode::invalid_config, "material: negative coefficient");
}

bool polygon_is_simple(const ChamberMesh& mesh, const Vector& d) {
  const int n = mesh.node_count;
  auto segment = [&](int i) {
    return std::pair{node_pos(mesh, d, i), node_pos(mesh, d, (i + 1) % n)};
  };
  auto orient = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
    const double cr = (b.x() - a.x()) * (c.y() - a.y()) -
                      (b.y() - a.y()) * (c.x() - a.x());
    return (cr > 0.0) - (cr < 0.0);
  };
  for (int i = 0; i < n; ++i) {
    const auto [a, b] = segment(i);
    for (int j = i + 1; j < n; ++j) {
      // Skip the shared-endpoint neighbours.
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      const auto [c, e] = segment(j);
      if (orient(a, b, c) != orient(a, b, e) &&
          orient(c, e, a) != orient(c, e, b))
        return false;
    }
  }
  return true;
}

CavityVolume cavity_volume(const ChamberMesh& mesh, const Vector& d) {
  const int n = mesh.node_count;
  if (!polygon_is_simple(mesh, d))
    fail(ErrorCode::degenerate_geometry, "cavity_volume: polygon self-intersects");
  CavityVolume out;
  out.gradient = Vector::Zero(2 * n);
  double area2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d xi = node_pos(mesh, d, i);
    const Eigen::Vector2d xj = node_pos(mesh, d, (i + 1) % n);
    area2 += xi.x() * xj.y() - xi.y() * xj.x();
  }
  out.value = 0.5 * area2;  // x 1 mm depth
  for (int i = 0; i < n; ++i) {
    const Eigen::Vector2d xn = node_pos(mesh, d, (i + 1) % n);
    const Eigen::Vector2d xp = node_pos(mesh, d, (i + n - 1) % n);
    const Eigen::Vector2d g = 0.5 * rot_cw(xn - xp);
    out.gradient(2 * i) += g.x();
    out.gradient(2 * i + 1) += g.y();
  }
  return out;
}

void add_scaled_volume_hessian(const ChamberMesh& mesh, double scale,
                               Matrix& into) {
  // dV/dx_i = 0.5 * rot_cw(x_{i+1} - x_{i-1})  =>  the Hessian couples each
  // node to its neighbours through +-0.5 * rot_cw.
  const int n = mesh.node_count;
  const double h = 0.5 * scale;
  for (int i = 0; i < n; ++i) {
    const int in = (i + 1) % n;
    const int ip = (i + n - 1) % n;
    // rot_cw as a matrix: [0 1; -1 0]
    into(2 * i, 2 * in + 1) += h;
    into(2 * i + 1, 2 * in) -= h;
    into(2 * i, 2 * ip + 1) -= h;
    into(2 * i + 1, 2 * ip) += h;
  }
}

double cavity_volume_change(const ChamberMesh& mesh, const Vector& d_from,
                            const Vector& d_to) {
  const int n = mesh.node_count;
  auto delta_of = [&](int i) {
    return Eigen::Vector2d(d_to(2 * i) - d_from(2 * i),
                           d_to(2 * i + 1) - d_from(2 * i + 1));
  };
  double change = 0.0;
  for (int i = 0; i < n; ++i) {
    const int in = (i + 1) % n;
    const int ip = (i + n - 1) % n;
    const Eigen::Vector2d xn = node_pos(mesh, d_from, in);
    const Eigen::Vector2d xp = node_pos(mesh, d_from, ip);
    const Eigen::Vector2d grad = 0.5 * rot_cw(xn - xp);
    const Eigen::Vector2d curv = 0.25 * rot_cw(delta_of(in) - delta_of(ip));
    change += delta_of(i).dot(grad + curv);
  }
  return change;
}

ChamberOperators assemble_chamber(const ChamberMesh& mesh,
                                  const ChamberMaterial& mat, const Vector& d,
                                  const Vector& v, const Vector& tau,
                                  double p_v, bool with_jacobian) {
  const int n_nodes = mesh.node_count;
  const int n = 2 * n_nodes;
  if (d.size() != n || v.size() != n || tau.size() != n_nodes)
    fail(ErrorCode::invalid_input, "assemble_chamber: state size mismatch");
  if (!std::isfinite(p_v) || !d.allFinite() || !v.allFinite())
    fail(ErrorCode::invalid_input, "assemble_chamber: non-finite state");

  ChamberOperators ops;
  ops.force = Vector::Zero(n);
  ops.d_force_dpv = Vector::Zero(n);
  if (with_jacobian) {
    ops.d_force_dd = Matrix::Zero(n, n);
    ops.d_force_dv = Matrix::Zero(n, n);
  }

  // Fiber segments: Green strain E = (l^2 - L^2) / (2 L^2) along the chord,
  // axial force N_s = (k_lin E + k_cub E^3 + tau + c_visc dE/dt) * l / L.
  for (int i = 0; i < n_nodes; ++i) {
    const int j = (i + 1) % n_nodes;
    const Eigen::Vector2d ref_edge = mesh.ref_pos.col(j) - mesh.ref_pos.col(i);
    const double len0 = ref_edge.norm();
    const Eigen::Vector2d chord =
        node_pos(mesh, d, j) - node_pos(mesh, d, i);
    const double len = chord.norm();
    if (len < kCollapseTol * len0) {
      std::ostringstream msg;
      msg << "assemble_chamber: segment " << i << " collapsed (l/L = "
          << len / len0 << ")";
      fail(ErrorCode::degenerate_geometry, msg.str());
    }
    const Eigen::Vector2d dvel =
        v.segment<2>(2 * j) - v.segment<2>(2 * i);
    const double inv_len0_sq = 1.0 / (len0 * len0);
    const double strain = 0.5 * (len * len - len0 * len0) * inv_len0_sq;
    const double strain_rate = chord.dot(dvel) * inv_len0_sq;
    const double stress = mat.k_lin * strain + mat.k_cub * strain * strain * strain +
                          tau(i) + mat.c_visc * strain_rate;
    const Eigen::Vector2d f = (stress / len0) * chord;
    ops.force.segment<2>(2 * i) -= f;
    ops.force.segment<2>(2 * j) += f;

    if (with_jacobian) {
      const double dstress_dstrain =
          mat.k_lin + 3.0 * mat.k_cub * strain * strain;
      // df/dc = (stress/L) I + (1/L) c (dstress/dc)^T
      const Eigen::Vector2d dstress_dc =
          dstress_dstrain * inv_len0_sq * chord + mat.c_visc * inv_len0_sq * dvel;
      Eigen::Matrix2d df_dc = (stress / len0) * Eigen::Matrix2d::Identity();
      df_dc += (1.0 / len0) * chord * dstress_dc.transpose();
      const Eigen::Matrix2d df_dvel =
          (mat.c_visc * inv_len0_sq / len0) * chord * chord.transpose();

      auto scatter = [&](Matrix& jac, const Eigen::Matrix2d& blk) {
        jac.block<2, 2>(2 * i, 2 * i) += blk;
        jac.block<2, 2>(2 * i, 2 * j) -= blk;
        jac.block<2, 2>(2 * j, 2 * i) -= blk;
        jac.block<2, 2>(2 * j, 2 * j) += blk;
      };
      scatter(ops.d_force_dd, df_dc);
      scatter(ops.d_force_dv, df_dvel);
    }
  }

  // Omni-directional support spring-dashpots.
  ops.force += mat.k_v * d + mat.c_v * v;
  if (with_jacobian) {
    ops.d_force_dd.diagonal().array() += mat.k_v;
    ops.d_force_dv.diagonal().array() += mat.c_v;
  }

  // Follower pressure load: the cavity pressure acts along the current
  // outward edge normals, which is exactly p_v * dV/dd.
  const CavityVolume vol = cavity_volume(mesh, d);
  ops.force -= p_v * vol.gradient;
  ops.d_force_dpv = -vol.gradient;
  if (with_jacobian) add_scaled_volume_hessian(mesh, -p_v, ops.d_force_dd);

  return ops;
}

Vector mass_per_dof(const ChamberMesh& mesh) {
  Vector m(mesh.dofs());
  for (int i = 0; i < mesh.node_count; ++i) {
    m(2 * i) = mesh.node_mass(i);
    m(2 * i + 1) = mesh.node_mass(i);
  }
  return m;
}

Vector structural_residual(const ChamberMesh& mesh, const ChamberMaterial& mat,
                           const StructState& s, double p_v) {
  const ChamberOperators ops =
      assemble_chamber(mesh, mat, s.d, s.v, s.tau, p_v, false);
  return mass_per_dof(mesh).cwiseProduct(s.a) + ops.force;
}

}  // namespace pmk
