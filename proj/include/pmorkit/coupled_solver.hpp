#pragma once

#include <string>
#include <vector>

#include "pmorkit/activation.hpp"
#include "pmorkit/chamber.hpp"
#include "pmorkit/integrator.hpp"
#include "pmorkit/linalg.hpp"
#include "pmorkit/windkessel.hpp"

namespace pmk {

/// Full coupled state at one converged time level.
struct State {
  Vector d, v, a;   // structural kinematics
  Vector tau;       // per-segment active stress
  WkState p;        // windkessel unknowns
};

struct TimingBreakdown {
  double element_s = 0.0;   // residual/Jacobian assembly
  double linear_s = 0.0;    // projections + linear solves
  double other_s = 0.0;     // remainder of the wall time
  double total() const { return element_s + linear_s + other_s; }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<int> newton_iters;
  std::vector<double> volumes;  // cavity volume per step
  double wall_time = 0.0;       // seconds
  double cpu_time = 0.0;        // thread CPU seconds
  TimingBreakdown timing;
  int reduced_order = 0;  // 0 for the full order model
};

/// Column-wise displacement history of one run plus provenance.
struct SnapshotMatrix {
  Matrix data;                       // n x n_s
  std::vector<std::string> param_names;
  std::vector<double> param_values;  // normalized
  std::vector<double> param_initial; // physical normalization references
  double dt = 0.0;
};

struct ChamberScenario {
  ChamberMesh mesh;
  ChamberMaterial material;
  ActivationParams activation;
  WindkesselParams windkessel;
  TimeIntegrator integrator;
  SolverTolerances tolerances;

  void validate() const;
};

/// Full (n+4) x (n+4) block linearization of the coupled system at a trial
/// end-of-step state, including Dirichlet rows. Exposed for verification.
struct CoupledLinearization {
  Matrix jacobian;
  Vector residual;  // [structural; windkessel]
};

class CoupledSolver {
 public:
  explicit CoupledSolver(const ChamberScenario& scenario);

  /// Consistent initial state: d = v = 0, accelerations from the residual at
  /// t = 0, windkessel at the all-equal-pressure equilibrium, tau = 0.
  State initial_state() const;

  /// One generalized-alpha/one-step-theta step of the monolithic Newton
  /// solve. Returns the Newton iteration count; records increment norms of
  /// the last iterations in *increment_log when given.
  int step(const State& old_state, double t_old, State& new_state,
           std::vector<double>* increment_log = nullptr) const;

  /// March t = 0 .. t_end; snapshot columns are the converged displacements
  /// of every step.
  std::pair<Trajectory, SnapshotMatrix> run() const;

  /// Residual and block Jacobian at a trial state (Newmark-consistent
  /// velocities/accelerations are taken from the state as given).
  CoupledLinearization linearize(const State& old_state, const State& trial,
                                 double t_old) const;

  const ChamberScenario& scenario() const { return scenario_; }

 private:
  friend class ReducedSolver;
  struct Workspace {
    Matrix jacobian;      // (n+4) x (n+4)
    Vector residual;      // n + 4
    double vol_new = 0.0;
    Vector vol_grad_new;  // n, at the end-of-step geometry
  };
  void assemble(const State& old_state, const State& trial, double t_old,
                bool with_jacobian, Workspace& ws) const;

  ChamberScenario scenario_;
  Vector mass_dof_;
};

}  // namespace pmk
