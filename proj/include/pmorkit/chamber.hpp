#pragma once

#include <array>
#include <vector>

#include "pmorkit/linalg.hpp"

namespace pmk {

/// Closed 2D polygonal ring of point masses. Node i connects to node i+1
/// (mod N) by a nonlinear fiber segment; the polygon interior is the chamber
/// cavity (unit out-of-plane depth). Counter-clockwise node ordering.
struct ChamberMesh {
  int node_count = 0;
  double radius = 0.0;                      // reference circle radius [mm]
  Matrix ref_pos;                           // 2 x N reference positions [mm]
  Vector node_mass;                         // per node [kg] so forces are mN
  std::vector<int> marked_nodes;            // basal-plane displacement metric
  std::array<int, 2> pinned_nodes{-1, -1};  // homogeneous Dirichlet pair

  int dofs() const { return 2 * node_count; }
  void validate() const;

  /// Regular N-gon of radius r0 [mm]; node masses are mass_per_node [g]
  /// times rho_scale. Two adjacent nodes at the top are pinned and the
  /// marked_count nodes nearest the top form the marked set.
  static ChamberMesh make_ring(int n, double r0, double mass_per_node_g,
                               double rho_scale, int marked_count);
};

struct ChamberMaterial {
  double k_lin = 200.0;   // Green-strain stiffness [kPa mm^2]
  double k_cub = 1000.0;  // cubic Green-strain stiffness [kPa mm^2]
  double c_visc = 10.0;   // segment strain-rate viscosity [kPa mm^2 s]
  double k_v = 0.3;       // support spring per node [mN/mm]
  double c_v = 0.05;      // support dashpot per node [mN s/mm]
  double rho_scale = 1.0;

  void validate() const;
};

/// Displacements, velocities, accelerations (length 2N) and per-segment
/// active stresses (length N) at one time instant.
struct StructState {
  Vector d;
  Vector v;
  Vector a;
  Vector tau;
};

/// Static force vector and its partial derivatives at fixed kinematics.
/// residual-convention forces: internal + support - pressure load, so that
/// M*a + force = 0 is the equation of motion.
struct ChamberOperators {
  Vector force;          // n
  Matrix d_force_dd;     // n x n (only if with_jacobian)
  Matrix d_force_dv;     // n x n (only if with_jacobian)
  Vector d_force_dpv;    // n, equals -dV/dd at the evaluation geometry
};

ChamberOperators assemble_chamber(const ChamberMesh& mesh,
                                  const ChamberMaterial& mat, const Vector& d,
                                  const Vector& v, const Vector& tau,
                                  double p_v, bool with_jacobian);

/// Lumped mass expanded to one entry per displacement DOF.
Vector mass_per_dof(const ChamberMesh& mesh);

/// Full dynamic residual M*a + force(d, v, tau, p_v).
Vector structural_residual(const ChamberMesh& mesh, const ChamberMaterial& mat,
                           const StructState& s, double p_v);

/// Cavity volume (shoelace area x 1 mm depth) of the displaced polygon and
/// its exact displacement gradient.
struct CavityVolume {
  double value = 0.0;  // mm^3
  Vector gradient;     // n
};

CavityVolume cavity_volume(const ChamberMesh& mesh, const Vector& d);

/// Second derivative of the cavity volume wrt displacements (constant,
/// since the shoelace area is quadratic). Used for the follower-load tangent.
void add_scaled_volume_hessian(const ChamberMesh& mesh, double scale,
                               Matrix& into);

/// Exact V(d_to) - V(d_from) through the quadratic expansion around d_from;
/// avoids the cancellation of differencing two large volumes, which matters
/// for the volume-rate residual at tight solver tolerances.
double cavity_volume_change(const ChamberMesh& mesh, const Vector& d_from,
                            const Vector& d_to);

bool polygon_is_simple(const ChamberMesh& mesh, const Vector& d);

}  // namespace pmk
