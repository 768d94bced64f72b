#include "pmorkit/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "pmorkit/errors.hpp"
#include "pmorkit/subspace_interp.hpp"
#include "pmorkit/util.hpp"

namespace pmk {

void ParameterSet::validate() const {
  const auto n = static_cast<Eigen::Index>(names.size());
  if (n < 1 || values.size() != n || initial_physical.size() != n)
    fail(ErrorCode::invalid_config, "parameters: inconsistent sizes");
  for (Eigen::Index i = 0; i < n; ++i)
    if (initial_physical(i) == 0.0)
      fail(ErrorCode::invalid_config,
           "parameters: normalization reference must be nonzero (" + names[i] +
               ")");
}

int LmTrace::iterations_to_convergence() const {
  return practical_iteration >= 0 ? practical_iteration
                                  : static_cast<int>(iterations.size());
}

double LmTrace::total_fom_seconds() const {
  double t = 0.0;
  for (const auto& it : iterations)
    for (double s : it.t_fom_evals) t += s;
  return t;
}

double LmTrace::total_rom_seconds() const {
  double t = 0.0;
  for (const auto& it : iterations)
    for (double s : it.t_rom_evals) t += s;
  return t;
}

int LmTrace::fom_evaluation_count() const {
  int n = 0;
  for (const auto& it : iterations) n += static_cast<int>(it.t_fom_evals.size());
  return n;
}

int LmTrace::rom_evaluation_count() const {
  int n = 0;
  for (const auto& it : iterations) n += static_cast<int>(it.t_rom_evals.size());
  return n;
}

std::pair<double, Vector> objective(const Vector& mu, const Vector& y,
                                    const FomEvaluator& forward) {
  ForwardResult f;
  try {
    f = forward(mu);
  } catch (const Error& e) {
    std::ostringstream msg;
    msg << "forward evaluation failed at mu = [" << mu.transpose()
        << "]: " << e.what();
    fail(e.code(), msg.str());
  }
  if (f.outputs.size() != y.size())
    fail(ErrorCode::invalid_input, "objective: output/measurement mismatch");
  Vector r = y - f.outputs;
  return {0.5 * r.squaredNorm(), std::move(r)};
}

ProjectionBasis enrichment_basis(const Vector& mu_eval,
                                 const std::vector<Matrix>& snapshot_store,
                                 const std::vector<Vector>& iterate_points,
                                 int q) {
  if (snapshot_store.empty() || iterate_points.size() != snapshot_store.size())
    fail(ErrorCode::invalid_input, "enrichment_basis: empty snapshot store");
  const size_t current = snapshot_store.size() - 1;
  if (current == 0) {
    // First iteration: constant basis from the only full-order evaluation.
    return weighted_snapshot_basis({&snapshot_store[0]}, {1.0}, q);
  }
  const double d1 = (mu_eval - iterate_points[current]).norm();
  size_t nearest = 0;
  double d2 = (mu_eval - iterate_points[0]).norm();
  for (size_t j = 1; j < current; ++j) {
    const double d = (mu_eval - iterate_points[j]).norm();
    if (d < d2) {
      d2 = d;
      nearest = j;
    }
  }
  if (d1 == 0.0 && d2 == 0.0)
    fail(ErrorCode::coincident_points,
         "enrichment_basis: evaluation point coincides with two stored "
         "iterates");
  // w1 = (1/d1) / (1/d1 + 1/d2) in the stable form d2 / (d1 + d2).
  const double w1 = d2 / (d1 + d2);
  const double w2 = d1 / (d1 + d2);
  return weighted_snapshot_basis(
      {&snapshot_store[current], &snapshot_store[nearest]}, {w1, w2}, q);
}

namespace {

double hull_sign(const Vector& mu, int p, double eps,
                 const std::vector<Vector>& prior_points) {
  double lo = mu(p), hi = mu(p);
  for (const Vector& x : prior_points) {
    lo = std::min(lo, x(p));
    hi = std::max(hi, x(p));
  }
  if (mu(p) + eps <= hi) return 1.0;
  if (mu(p) - eps >= lo) return -1.0;
  return 1.0;  // tie / hull too small: positive
}

}  // namespace

Matrix fd_jacobian(const Vector& mu, const Vector& base_outputs,
                   const Vector& /*y*/, double fd_step,
                   const std::vector<Vector>& prior_points,
                   const std::function<Vector(const Vector&, int)>& eval,
                   std::vector<Vector>* evaluated) {
  const int n_p = static_cast<int>(mu.size());
  const int m = static_cast<int>(base_outputs.size());
  Matrix jac(m, n_p);
  std::vector<Vector> points(n_p);
  std::mutex mtx;
  parallel_for(n_p, [&](int p) {
    const double sign = hull_sign(mu, p, fd_step, prior_points);
    Vector mu_pert = mu;
    mu_pert(p) += sign * fd_step;
    const Vector f_pert = eval(mu_pert, p);
    // J = d r / d mu = -d f / d mu.
    const Vector col = sign * (base_outputs - f_pert) / fd_step;
    std::lock_guard<std::mutex> lock(mtx);
    jac.col(p) = col;
    points[p] = std::move(mu_pert);
  });
  if (evaluated)
    for (auto& x : points) evaluated->push_back(std::move(x));
  return jac;
}

namespace {

Vector solve_damped_normal_equations(const Matrix& jac, const Vector& grad,
                                     double& lambda) {
  const Matrix jtj = jac.transpose() * jac;
  for (int attempt = 0;; ++attempt) {
    Matrix normal = jtj;
    normal += lambda * jtj.diagonal().asDiagonal().toDenseMatrix();
    try {
      return solve_dense(normal, -grad);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::singular_system || attempt >= 5) throw;
      lambda *= 10.0;
    }
  }
}

}  // namespace

LmResult lm_run(const Vector& mu0, const Vector& y, const FomEvaluator& fom,
                const RomEvaluator& rom, const LmSettings& settings) {
  LmTrace trace;
  Vector mu = mu0;
  double lambda = settings.lambda0;
  double s0 = -1.0;
  double prev_grad_norm = -1.0;
  Vector best_mu = mu0;
  double best_s = std::numeric_limits<double>::infinity();
  Vector mu_hat = mu0;

  for (int i = 0; i < settings.max_iterations; ++i) {
    LmIteration rec;
    rec.mu = mu;
    rec.lambda = lambda;

    // The objective and its residual always come from the full order model.
    ThreadCpuTimer fom_timer;
    ForwardResult base = fom(mu);
    rec.t_fom_evals.push_back(fom_timer.seconds());
    if (base.outputs.size() != y.size())
      fail(ErrorCode::invalid_input, "lm_run: output/measurement mismatch");
    const Vector r = y - base.outputs;
    const double s = 0.5 * r.squaredNorm();
    rec.objective = s;
    trace.snapshot_store.push_back(std::move(base.snapshots));
    trace.iterate_points.push_back(mu);
    trace.evaluated_points.push_back(mu);
    if (i == 0) s0 = s;
    if (s < best_s) {
      best_s = s;
      best_mu = mu;
    }

    if (s0 > 0.0 && s / s0 < settings.s_rel) {
      trace.converged = true;
      trace.practical_iteration = i;
      mu_hat = mu;
      trace.iterations.push_back(std::move(rec));
      break;
    }

    // Gradient columns: reduced evaluations on enrichment bases, or plain
    // full-order differences.
    Vector fd_base;
    std::mutex rec_mtx;
    std::function<Vector(const Vector&, int)> column_eval;
    if (settings.rom_gradients) {
      const ProjectionBasis basis_here = enrichment_basis(
          mu, trace.snapshot_store, trace.iterate_points, settings.q);
      ThreadCpuTimer rom_timer;
      const ForwardResult rb = rom(mu, basis_here);
      rec.t_rom_evals.push_back(rom_timer.seconds());
      fd_base = rb.outputs;
      column_eval = [&](const Vector& mu_pert, int /*p*/) -> Vector {
        const ProjectionBasis basis_p = enrichment_basis(
            mu_pert, trace.snapshot_store, trace.iterate_points, settings.q);
        try {
          ThreadCpuTimer timer;
          const ForwardResult f = rom(mu_pert, basis_p);
          const double sec = timer.seconds();
          std::lock_guard<std::mutex> lock(rec_mtx);
          rec.t_rom_evals.push_back(sec);
          return f.outputs;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::nonconvergence) throw;
          // Column failure: fall back to a full-order evaluation.
          ThreadCpuTimer timer;
          const ForwardResult f = fom(mu_pert);
          const double sec = timer.seconds();
          std::lock_guard<std::mutex> lock(rec_mtx);
          rec.t_fom_evals.push_back(sec);
          ++trace.rom_column_fallbacks;
          return f.outputs;
        }
      };
    } else {
      fd_base = base.outputs;
      column_eval = [&](const Vector& mu_pert, int) -> Vector {
        ThreadCpuTimer timer;
        const ForwardResult f = fom(mu_pert);
        const double sec = timer.seconds();
        std::lock_guard<std::mutex> lock(rec_mtx);
        rec.t_fom_evals.push_back(sec);
        return f.outputs;
      };
    }

    const Matrix jac =
        fd_jacobian(mu, fd_base, y, settings.fd_step, trace.evaluated_points,
                    column_eval, &trace.evaluated_points);
    const Vector grad = jac.transpose() * r;
    const double grad_norm = grad.norm();
    if (prev_grad_norm > 0.0) lambda *= grad_norm / prev_grad_norm;
    prev_grad_norm = grad_norm;
    rec.grad_norm = grad_norm;
    rec.lambda = lambda;

    const Vector dmu = solve_damped_normal_equations(jac, grad, lambda);
    trace.iterations.push_back(std::move(rec));

    if (grad_norm < settings.tol_grad && dmu.norm() < settings.tol_inc) {
      trace.converged = true;
      mu_hat = mu;
      break;
    }
    mu += dmu;
    mu_hat = mu;
  }

  if (!trace.converged) mu_hat = best_mu;
  return {mu_hat, std::move(trace)};
}

double speedup_beta(double alpha, int n_p, double iteration_ratio) {
  return iteration_ratio / (1.0 / alpha + 1.0 / (1.0 + n_p));
}

SpeedupReport speedup_report(const LmTrace& fom_trace, const LmTrace& rom_trace,
                             int n_p) {
  SpeedupReport rep;
  const int fom_evals =
      fom_trace.fom_evaluation_count() + rom_trace.fom_evaluation_count();
  const double fom_seconds =
      fom_trace.total_fom_seconds() + rom_trace.total_fom_seconds();
  const int rom_evals = rom_trace.rom_evaluation_count();
  if (fom_evals == 0 || rom_evals == 0)
    fail(ErrorCode::invalid_input, "speedup_report: traces incomplete");
  const double t_fom = fom_seconds / fom_evals;
  const double t_rom = rom_trace.total_rom_seconds() / rom_evals;
  rep.alpha = t_fom / t_rom;
  rep.n_i_fom = fom_trace.iterations_to_convergence();
  rep.n_i_rom = rom_trace.iterations_to_convergence();
  rep.beta = speedup_beta(rep.alpha, n_p,
                          static_cast<double>(rep.n_i_fom) /
                              static_cast<double>(rep.n_i_rom));
  rep.t_fom_total = fom_trace.total_fom_seconds();
  rep.t_rom_gradient_total =
      rom_trace.total_fom_seconds() + rom_trace.total_rom_seconds();
  rep.measured_ratio = rep.t_fom_total / rep.t_rom_gradient_total;
  return rep;
}

}  // namespace pmk
