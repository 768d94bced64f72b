#pragma once

#include "pmorkit/coupled_solver.hpp"
#include "pmorkit/pod.hpp"

namespace pmk {

/// Reduced coordinates plus the unreduced windkessel unknowns; the lifted
/// displacement basis * d_r is cached for assembly and output.
struct ReducedState {
  Vector d_r, v_r, a_r;  // q
  Vector tau;            // per segment, unreduced
  WkState p;
  Vector lifted_d, lifted_v, lifted_a;  // n
};

/// Galerkin-projected coupled solve: the full structural residual and block
/// Jacobian are assembled at the lifted state, then the structural dimension
/// is contracted with the basis; the windkessel block stays unreduced.
class ReducedSolver {
 public:
  ReducedSolver(const ChamberScenario& scenario, const ProjectionBasis& basis);

  ReducedState initial_state() const;

  int step(const ReducedState& old_state, double t_old,
           ReducedState& new_state) const;

  /// Full trajectory of lifted states with the wall-time breakdown
  /// {element evaluation, linear system, other}.
  std::pair<Trajectory, SnapshotMatrix> run() const;

  int reduced_dim() const { return static_cast<int>(basis_.basis.cols()); }
  const ProjectionBasis& basis() const { return basis_; }

 private:
  State lift(const ReducedState& r) const;

  CoupledSolver full_;
  ProjectionBasis basis_;
  mutable TimingBreakdown timing_;
};

}  // namespace pmk
