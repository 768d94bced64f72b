#include "pmorkit/coupled_solver.hpp"

#include <cmath>
#include <sstream>

#include "pmorkit/errors.hpp"
#include "pmorkit/util.hpp"

namespace pmk {

void ChamberScenario::validate() const {
  mesh.validate();
  material.validate();
  activation.validate();
  windkessel.validate();
  integrator.validate();
  tolerances.validate();
}

CoupledSolver::CoupledSolver(const ChamberScenario& scenario)
    : scenario_(scenario), mass_dof_(mass_per_dof(scenario.mesh)) {
  scenario_.validate();
}

State CoupledSolver::initial_state() const {
  const int n = scenario_.mesh.dofs();
  State s;
  s.d = Vector::Zero(n);
  s.v = Vector::Zero(n);
  s.tau = Vector::Zero(scenario_.mesh.node_count);
  s.p = WkState(scenario_.windkessel.p_ref, scenario_.windkessel.p_ref,
                scenario_.windkessel.p_ref, 0.0);
  // Accelerations satisfy the structural residual at t = 0.
  const ChamberOperators ops = assemble_chamber(
      scenario_.mesh, scenario_.material, s.d, s.v, s.tau, s.p(0), false);
  s.a = -ops.force.cwiseQuotient(mass_dof_);
  for (int node : scenario_.mesh.pinned_nodes) {
    s.a(2 * node) = 0.0;
    s.a(2 * node + 1) = 0.0;
  }
  return s;
}

void CoupledSolver::assemble(const State& old_state, const State& trial,
                             double t_old, bool with_jacobian,
                             Workspace& ws) const {
  const int n = scenario_.mesh.dofs();
  const GenAlpha ga = scenario_.integrator.gen_alpha();
  const double dt = scenario_.integrator.dt;
  const double theta = scenario_.integrator.theta;
  const NewmarkUpdate nm{ga.beta, ga.gamma, dt};

  // Generalized-alpha evaluates structural terms at the blended state; the
  // windkessel coupling uses the end-of-step pressure and geometry.
  const Vector d_b = (1.0 - ga.alpha_f) * trial.d + ga.alpha_f * old_state.d;
  const Vector v_b = (1.0 - ga.alpha_f) * trial.v + ga.alpha_f * old_state.v;
  const Vector a_b = (1.0 - ga.alpha_m) * trial.a + ga.alpha_m * old_state.a;
  const Vector tau_b =
      (1.0 - ga.alpha_f) * trial.tau + ga.alpha_f * old_state.tau;
  const double p_v = trial.p(0);

  const ChamberOperators ops =
      assemble_chamber(scenario_.mesh, scenario_.material, d_b, v_b, tau_b,
                       p_v, with_jacobian);

  const CavityVolume vol_old = cavity_volume(scenario_.mesh, old_state.d);
  const CavityVolume vol_new = cavity_volume(scenario_.mesh, trial.d);
  ws.vol_new = vol_new.value;
  ws.vol_grad_new = vol_new.gradient;
  // Exact volume increment keeps the volume-rate row clear of the
  // large-volume cancellation noise.
  const double vol_change =
      cavity_volume_change(scenario_.mesh, old_state.d, trial.d);

  ws.residual.resize(n + 4);
  ws.residual.head(n) = mass_dof_.cwiseProduct(a_b) + ops.force;
  ws.residual.tail(4) = wk_residual(trial.p, old_state.p,
                                    vol_old.value + vol_change, vol_old.value,
                                    dt, t_old, theta, scenario_.windkessel);

  if (with_jacobian) {
    ws.jacobian = Matrix::Zero(n + 4, n + 4);
    const double chain_d = 1.0 - ga.alpha_f;
    const double chain_v = (1.0 - ga.alpha_f) * nm.dv_dd();
    const double chain_a = (1.0 - ga.alpha_m) * nm.da_dd();
    ws.jacobian.topLeftCorner(n, n) =
        chain_d * ops.d_force_dd + chain_v * ops.d_force_dv;
    ws.jacobian.topLeftCorner(n, n).diagonal() += chain_a * mass_dof_;
    ws.jacobian.block(0, n, n, 1) = ops.d_force_dpv;

    const WkLinearization wk = wk_jacobian(trial.p, old_state.p, dt, t_old,
                                           theta, scenario_.windkessel);
    ws.jacobian.block(n, 0, 1, n) =
        wk.d_res0_dvol_new * vol_new.gradient.transpose();
    ws.jacobian.bottomRightCorner(4, 4) = wk.d_res_dp;
  }

  // Homogeneous Dirichlet rows for the pinned node pair.
  for (int node : scenario_.mesh.pinned_nodes) {
    for (int k : {2 * node, 2 * node + 1}) {
      ws.residual(k) = trial.d(k);
      if (with_jacobian) {
        ws.jacobian.row(k).setZero();
        ws.jacobian(k, k) = 1.0;
      }
    }
  }
}

CoupledLinearization CoupledSolver::linearize(const State& old_state,
                                              const State& trial,
                                              double t_old) const {
  Workspace ws;
  assemble(old_state, trial, t_old, true, ws);
  return {std::move(ws.jacobian), std::move(ws.residual)};
}

int CoupledSolver::step(const State& old_state, double t_old, State& new_state,
                        std::vector<double>* increment_log) const {
  const int n = scenario_.mesh.dofs();
  const double dt = scenario_.integrator.dt;
  const double t_new = t_old + dt;
  const GenAlpha ga = scenario_.integrator.gen_alpha();
  const NewmarkUpdate nm{ga.beta, ga.gamma, dt};
  const SolverTolerances& tol = scenario_.tolerances;

  State trial;
  trial.tau.resize(old_state.tau.size());
  for (Eigen::Index i = 0; i < trial.tau.size(); ++i)
    trial.tau(i) = step_active_stress(old_state.tau(i), t_old, t_new,
                                      scenario_.activation,
                                      scenario_.integrator.theta);
  trial.d = old_state.d;  // constant-displacement predictor
  trial.a = nm.acceleration(trial.d, old_state.d, old_state.v, old_state.a);
  trial.v = nm.velocity(trial.a, old_state.v, old_state.a);
  trial.p = old_state.p;

  Workspace ws;
  std::ostringstream history;
  auto zero_pins = [&](Vector& delta) {
    for (int node : scenario_.mesh.pinned_nodes) {
      delta(2 * node) = 0.0;
      delta(2 * node + 1) = 0.0;
    }
  };
  for (int it = 1; it <= tol.max_newton; ++it) {
    assemble(old_state, trial, t_old, true, ws);

    Eigen::PartialPivLU<Matrix> lu(ws.jacobian);
    if (!(lu.rcond() > 1e-14)) {
      std::ostringstream msg;
      msg << "step at t=" << t_new
          << ": singular coupled system, rcond estimate " << lu.rcond();
      fail(ErrorCode::singular_system, msg.str());
    }
    Vector delta = lu.solve(-ws.residual);
    zero_pins(delta);
    const double newton_len = delta.norm();

    // Affine-invariant damping: accept the (possibly halved) step once the
    // simplified Newton correction at the candidate shrinks accordingly.
    // Keeps the valve-diode rows from throwing the iteration across the
    // sigmoid knee.
    const State base = trial;
    double step_scale = 1.0;
    for (int backtrack = 0;; ++backtrack) {
      trial.d = base.d + step_scale * delta.head(n);
      trial.p = base.p + step_scale * delta.tail(4);
      trial.a = nm.acceleration(trial.d, old_state.d, old_state.v, old_state.a);
      trial.v = nm.velocity(trial.a, old_state.v, old_state.a);
      assemble(old_state, trial, t_old, false, ws);
      if (backtrack >= 8) break;
      Vector correction = lu.solve(-ws.residual);
      zero_pins(correction);
      if (correction.norm() <= (1.0 - 0.5 * step_scale) * newton_len +
                                   1e-14 * (1.0 + newton_len))
        break;
      step_scale *= 0.5;
    }

    const double res_s = ws.residual.head(n).lpNorm<Eigen::Infinity>();
    const double res_0d = ws.residual.tail(4).norm();
    const double inc_s = step_scale * delta.head(n).lpNorm<Eigen::Infinity>();
    const double inc_0d = step_scale * delta.tail(4).norm();
    if (increment_log) increment_log->push_back(inc_s);
    history << "  it " << it << ": |R_s|=" << res_s << " |R_0d|=" << res_0d
            << " |dd|=" << inc_s << " |dp|=" << inc_0d
            << " scale=" << step_scale << '\n';

    if (res_s < tol.tol_s_res && res_0d < tol.tol_0d_res &&
        inc_s < tol.tol_s_inc && inc_0d < tol.tol_0d_inc) {
      new_state = std::move(trial);
      return it;
    }
  }
  fail(ErrorCode::nonconvergence,
       "Newton did not converge within " + std::to_string(tol.max_newton) +
           " iterations at t=" + std::to_string(t_new) + "\n" + history.str());
}

std::pair<Trajectory, SnapshotMatrix> CoupledSolver::run() const {
  const WallTimer wall;
  const ThreadCpuTimer cpu;
  const int n = scenario_.mesh.dofs();
  const int steps = scenario_.integrator.steps();
  const double dt = scenario_.integrator.dt;

  Trajectory traj;
  traj.times.reserve(steps);
  traj.states.reserve(steps);
  traj.newton_iters.reserve(steps);
  traj.volumes.reserve(steps);

  SnapshotMatrix snaps;
  snaps.data.resize(n, steps);
  snaps.dt = dt;

  State state = initial_state();
  for (int j = 0; j < steps; ++j) {
    const double t_old = j * dt;
    State next;
    int iters = 0;
    try {
      iters = step(state, t_old, next);
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "run failed at step " << j + 1 << " (t=" << t_old + dt
          << "): " << e.what();
      fail(e.code(), msg.str());
    }
    state = std::move(next);
    snaps.data.col(j) = state.d;
    traj.times.push_back(t_old + dt);
    traj.newton_iters.push_back(iters);
    traj.volumes.push_back(cavity_volume(scenario_.mesh, state.d).value);
    traj.states.push_back(state);
  }
  traj.wall_time = wall.seconds();
  traj.cpu_time = cpu.seconds();
  return {std::move(traj), std::move(snaps)};
}

}  // namespace pmk
