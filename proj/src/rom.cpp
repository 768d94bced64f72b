#include "pmorkit/rom.hpp"

#include <sstream>

#include "pmorkit/errors.hpp"
#include "pmorkit/util.hpp"

namespace pmk {

ReducedSolver::ReducedSolver(const ChamberScenario& scenario,
                             const ProjectionBasis& basis)
    : full_(scenario), basis_(basis) {
  const int n = scenario.mesh.dofs();
  if (basis_.basis.rows() != n || basis_.basis.cols() < 1)
    fail(ErrorCode::invalid_input, "ReducedSolver: basis shape mismatch");
  const Matrix gram =
      basis_.basis.transpose() * basis_.basis -
      Matrix::Identity(basis_.basis.cols(), basis_.basis.cols());
  if (gram.cwiseAbs().maxCoeff() > 1e-10)
    fail(ErrorCode::invalid_input, "ReducedSolver: basis not orthonormal");
}

State ReducedSolver::lift(const ReducedState& r) const {
  State s;
  s.d = r.lifted_d;
  s.v = r.lifted_v;
  s.a = r.lifted_a;
  s.tau = r.tau;
  s.p = r.p;
  return s;
}

ReducedState ReducedSolver::initial_state() const {
  // Projection of the full order initial state (least-squares optimal).
  const State full = full_.initial_state();
  const Matrix& v = basis_.basis;
  ReducedState r;
  r.d_r = v.transpose() * full.d;
  r.v_r = v.transpose() * full.v;
  r.a_r = v.transpose() * full.a;
  r.tau = full.tau;
  r.p = full.p;
  r.lifted_d = v * r.d_r;
  r.lifted_v = v * r.v_r;
  r.lifted_a = v * r.a_r;
  return r;
}

int ReducedSolver::step(const ReducedState& old_state, double t_old,
                        ReducedState& new_state) const {
  const ChamberScenario& sc = full_.scenario();
  const Matrix& vmat = basis_.basis;
  const int n = sc.mesh.dofs();
  const int q = static_cast<int>(vmat.cols());
  const double dt = sc.integrator.dt;
  const double t_new = t_old + dt;
  const GenAlpha ga = sc.integrator.gen_alpha();
  const NewmarkUpdate nm{ga.beta, ga.gamma, dt};
  const SolverTolerances& tol = sc.tolerances;

  ReducedState trial;
  trial.tau.resize(old_state.tau.size());
  for (Eigen::Index i = 0; i < trial.tau.size(); ++i)
    trial.tau(i) = step_active_stress(old_state.tau(i), t_old, t_new,
                                      sc.activation, sc.integrator.theta);
  trial.d_r = old_state.d_r;  // constant-displacement predictor
  trial.p = old_state.p;

  const State old_full = lift(old_state);

  CoupledSolver::Workspace ws;
  std::ostringstream history;
  auto refresh_kinematics = [&] {
    trial.a_r = nm.acceleration(trial.d_r, old_state.d_r, old_state.v_r,
                                old_state.a_r);
    trial.v_r = nm.velocity(trial.a_r, old_state.v_r, old_state.a_r);
    trial.lifted_d = vmat * trial.d_r;
    trial.lifted_v = vmat * trial.v_r;
    trial.lifted_a = vmat * trial.a_r;
  };
  refresh_kinematics();

  for (int it = 1; it <= tol.max_newton; ++it) {
    {
      const WallTimer tw;
      full_.assemble(old_full, lift(trial), t_old, true, ws);
      timing_.element_s += tw.seconds();
    }

    Eigen::PartialPivLU<Matrix> lu;
    Vector delta;
    auto project_rhs = [&](const Vector& residual) {
      Vector rhs(q + 4);
      rhs.head(q) = -(vmat.transpose() * residual.head(n));
      rhs.tail(4) = -residual.tail(4);
      return rhs;
    };
    {
      const WallTimer tw;
      // Contract the structural dimension with the basis; the windkessel
      // block keeps its size.
      Matrix reduced(q + 4, q + 4);
      const Matrix jv = ws.jacobian.topLeftCorner(n, n) * vmat;
      reduced.topLeftCorner(q, q) = vmat.transpose() * jv;
      reduced.topRightCorner(q, 4) =
          vmat.transpose() * ws.jacobian.topRightCorner(n, 4);
      reduced.bottomLeftCorner(4, q) = ws.jacobian.bottomLeftCorner(4, n) * vmat;
      reduced.bottomRightCorner(4, 4) = ws.jacobian.bottomRightCorner(4, 4);
      lu.compute(reduced);
      if (!(lu.rcond() > 1e-14))
        fail(ErrorCode::singular_system,
             "reduced step: singular projected system at t=" +
                 std::to_string(t_new));
      delta = lu.solve(project_rhs(ws.residual));
      timing_.linear_s += tw.seconds();
    }
    const double newton_len = delta.norm();

    // Same affine-invariant damping as the full order solver.
    const Vector base_d_r = trial.d_r;
    const WkState base_p = trial.p;
    double step_scale = 1.0;
    for (int backtrack = 0;; ++backtrack) {
      trial.d_r = base_d_r + step_scale * delta.head(q);
      trial.p = base_p + step_scale * delta.tail(4);
      refresh_kinematics();
      {
        const WallTimer tw;
        full_.assemble(old_full, lift(trial), t_old, false, ws);
        timing_.element_s += tw.seconds();
      }
      if (backtrack >= 8) break;
      const Vector correction = lu.solve(project_rhs(ws.residual));
      if (correction.norm() <= (1.0 - 0.5 * step_scale) * newton_len +
                                   1e-14 * (1.0 + newton_len))
        break;
      step_scale *= 0.5;
    }

    // Reduced convergence criteria; the windkessel ones are unchanged.
    const double res_s =
        (vmat.transpose() * ws.residual.head(n)).lpNorm<Eigen::Infinity>();
    const double res_0d = ws.residual.tail(4).norm();
    const double inc_s = step_scale * delta.head(q).lpNorm<Eigen::Infinity>();
    const double inc_0d = step_scale * delta.tail(4).norm();
    history << "  it " << it << ": |V^T R_s|=" << res_s << " |R_0d|=" << res_0d
            << " |dd_r|=" << inc_s << " |dp|=" << inc_0d
            << " scale=" << step_scale << '\n';

    if (res_s < tol.tol_s_res && res_0d < tol.tol_0d_res &&
        inc_s < tol.tol_s_inc && inc_0d < tol.tol_0d_inc) {
      new_state = std::move(trial);
      return it;
    }
  }
  fail(ErrorCode::nonconvergence,
       "reduced Newton did not converge within " +
           std::to_string(tol.max_newton) + " iterations at t=" +
           std::to_string(t_new) + "\n" + history.str());
}

std::pair<Trajectory, SnapshotMatrix> ReducedSolver::run() const {
  const WallTimer wall;
  const ThreadCpuTimer cpu;
  timing_ = TimingBreakdown{};
  const ChamberScenario& sc = full_.scenario();
  const int n = sc.mesh.dofs();
  const int steps = sc.integrator.steps();
  const double dt = sc.integrator.dt;

  Trajectory traj;
  traj.reduced_order = reduced_dim();
  SnapshotMatrix snaps;
  snaps.data.resize(n, steps);
  snaps.dt = dt;
  snaps.param_names = basis_.param_names;
  snaps.param_values = basis_.param_values;
  snaps.param_initial = basis_.param_initial;

  ReducedState state = initial_state();
  for (int j = 0; j < steps; ++j) {
    const double t_old = j * dt;
    ReducedState next;
    int iters = 0;
    try {
      iters = step(state, t_old, next);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "reduced run failed at step " << j + 1 << " (t=" << t_old + dt
          << "): " << e.what();
      fail(e.code(), msg.str());
    }
    state = std::move(next);
    snaps.data.col(j) = state.lifted_d;
    traj.times.push_back(t_old + dt);
    traj.newton_iters.push_back(iters);
    traj.volumes.push_back(cavity_volume(sc.mesh, state.lifted_d).value);
    traj.states.push_back(lift(state));
  }
  traj.wall_time = wall.seconds();
  traj.cpu_time = cpu.seconds();
  traj.timing = timing_;
  traj.timing.other_s =
      std::max(0.0, traj.wall_time - timing_.element_s - timing_.linear_s);
  return {std::move(traj), std::move(snaps)};
}

}  // namespace pmk
