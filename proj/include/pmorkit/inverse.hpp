#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pmorkit/linalg.hpp"
#include "pmorkit/pod.hpp"

namespace pmk {

/// Normalized model parameters: values are ratios against the (nonzero)
/// initial physical magnitudes so every entry starts at one.
struct ParameterSet {
  std::vector<std::string> names;
  Vector values;            // normalized, dimensionless
  Vector initial_physical;  // per-entry normalization reference

  Vector physical() const { return values.cwiseProduct(initial_physical); }
  void validate() const;
};

/// Output of one forward evaluation: the normalized model outputs, the
/// displacement snapshots of the run, and its thread CPU time.
struct ForwardResult {
  Vector outputs;
  Matrix snapshots;
  double cpu_seconds = 0.0;
};

using FomEvaluator = std::function<ForwardResult(const Vector& mu)>;
using RomEvaluator =
    std::function<ForwardResult(const Vector& mu, const ProjectionBasis&)>;

struct LmSettings {
  double lambda0 = 0.1;
  double fd_step = 0.01;  // one-sided step in normalized parameter space
  double tol_grad = 1e-8;
  double tol_inc = 1e-8;
  double s_rel = 1e-5;  // practical stop on S^i / S^0
  int max_iterations = 50;
  bool rom_gradients = true;
  int q = 30;  // reduced order for gradient evaluations
};

struct LmIteration {
  Vector mu;
  double objective = 0.0;
  double grad_norm = -1.0;  // -1 until the gradient is computed
  double lambda = 0.0;
  std::vector<double> t_fom_evals;  // seconds per full-order evaluation
  std::vector<double> t_rom_evals;  // seconds per reduced evaluation
};

struct LmTrace {
  std::vector<LmIteration> iterations;
  std::vector<Matrix> snapshot_store;  // one full-order snapshot set per iter
  std::vector<Vector> iterate_points;  // mu^i alongside the store
  std::vector<Vector> evaluated_points;  // every evaluated parameter set
  bool converged = false;
  int practical_iteration = -1;  // first i with S^i/S^0 < s_rel, or -1
  int rom_column_fallbacks = 0;

  int iterations_to_convergence() const;
  double total_fom_seconds() const;
  double total_rom_seconds() const;
  int fom_evaluation_count() const;
  int rom_evaluation_count() const;
};

struct LmResult {
  Vector mu_hat;
  LmTrace trace;
};

/// Residual and squared-sum objective r = y - f(mu), S = 0.5 |r|^2.
std::pair<double, Vector> objective(const Vector& mu, const Vector& y,
                                    const FomEvaluator& forward);

/// Inverse-distance enrichment weights between the current iterate and the
/// nearest prior iterate; first iteration falls back to the plain POD basis
/// of the stored snapshots.
ProjectionBasis enrichment_basis(const Vector& mu_eval,
                                 const std::vector<Matrix>& snapshot_store,
                                 const std::vector<Vector>& iterate_points,
                                 int q);

/// One-sided finite-difference Jacobian d r / d mu (m x n_p). The
/// perturbation sign per parameter keeps the evaluation inside the range of
/// all previously evaluated parameter sets when possible (ties positive).
/// base_outputs must belong to the same forward model as the column
/// evaluator.
Matrix fd_jacobian(const Vector& mu, const Vector& base_outputs,
                   const Vector& y, double fd_step,
                   const std::vector<Vector>& prior_points,
                   const std::function<Vector(const Vector&, int column)>& eval,
                   std::vector<Vector>* evaluated);

/// Levenberg-Marquardt with full-order objective evaluations and (optionally)
/// reduced-order gradient columns on enrichment bases.
LmResult lm_run(const Vector& mu0, const Vector& y, const FomEvaluator& fom,
                const RomEvaluator& rom, const LmSettings& settings);

/// Closed-form total-speedup factor for the inverse problem.
double speedup_beta(double alpha, int n_p, double iteration_ratio);

struct SpeedupReport {
  double alpha = 0.0;  // mean single-evaluation speedup
  double beta = 0.0;   // formula value from alpha and iteration counts
  double measured_ratio = 0.0;  // measured T_fom / T_rom-gradient run
  double t_fom_total = 0.0;
  double t_rom_gradient_total = 0.0;
  int n_i_fom = 0;
  int n_i_rom = 0;
};

SpeedupReport speedup_report(const LmTrace& fom_trace, const LmTrace& rom_trace,
                             int n_p);

}  // namespace pmk
