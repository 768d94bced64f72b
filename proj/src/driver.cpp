#include "pmorkit/driver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <set>
#include <sstream>

#include "pmorkit/errors.hpp"
#include "pmorkit/io.hpp"
#include "pmorkit/util.hpp"

namespace fs = std::filesystem;

namespace pmk {

namespace {

void tag_snapshots(SnapshotMatrix& snaps, const std::vector<std::string>& names,
                   const Vector& mu, const std::vector<double>& initial) {
  snaps.param_names = names;
  snaps.param_values.assign(mu.data(), mu.data() + mu.size());
  snaps.param_initial = initial;
}

/// Volume curve sampled every sample_every seconds, normalized by the
/// reference cavity volume.
Vector sampled_volume_outputs(const Trajectory& traj, double dt,
                              double sample_every, double v_ref) {
  const int every = std::max(1, static_cast<int>(std::llround(sample_every / dt)));
  std::vector<double> samples;
  for (size_t j = every - 1; j < traj.volumes.size(); j += every)
    samples.push_back(traj.volumes[j] / v_ref);
  return Eigen::Map<const Vector>(samples.data(),
                                  static_cast<Eigen::Index>(samples.size()));
}

}  // namespace

RunArtifacts run_fom_scenario(const ExperimentConfig& config) {
  const CoupledSolver solver(config.scenario());
  RunArtifacts art;
  auto [traj, snaps] = solver.run();
  art.trajectory = std::move(traj);
  art.snapshots = std::move(snaps);
  art.scalars = scalar_outputs(art.trajectory, solver.scenario().mesh);
  return art;
}

RunArtifacts run_rom_scenario(const ExperimentConfig& config,
                              const ProjectionBasis& basis) {
  const ReducedSolver solver(config.scenario(), basis);
  RunArtifacts art;
  auto [traj, snaps] = solver.run();
  art.trajectory = std::move(traj);
  art.snapshots = std::move(snaps);
  art.scalars = scalar_outputs(art.trajectory, config.scenario().mesh);
  return art;
}

RunArtifacts run_fom_at(const ExperimentConfig& config,
                        const std::vector<std::string>& names,
                        const Vector& mu_normalized,
                        const std::vector<double>& initial) {
  ExperimentConfig c = config;
  Vector physical = mu_normalized;
  for (Eigen::Index i = 0; i < physical.size(); ++i) physical(i) *= initial[i];
  c.activation = config.activation_with(names, physical);
  RunArtifacts art = run_fom_scenario(c);
  tag_snapshots(art.snapshots, names, mu_normalized, initial);
  return art;
}

RunArtifacts run_rom_at(const ExperimentConfig& config,
                        const std::vector<std::string>& names,
                        const Vector& mu_normalized,
                        const std::vector<double>& initial,
                        const ProjectionBasis& basis) {
  ExperimentConfig c = config;
  Vector physical = mu_normalized;
  for (Eigen::Index i = 0; i < physical.size(); ++i) physical(i) *= initial[i];
  c.activation = config.activation_with(names, physical);
  RunArtifacts art = run_rom_scenario(c, basis);
  tag_snapshots(art.snapshots, names, mu_normalized, initial);
  return art;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  const bool reduced = traj.reduced_order > 0;
  out << "t,p_v,p_p,p_d,q_p,V,newton_iters";
  if (reduced) out << ",q,t_elem_s,t_linsys_s,t_other_s";
  out << '\n';
  for (size_t j = 0; j < traj.times.size(); ++j) {
    const WkState& p = traj.states[j].p;
    out << format_double(traj.times[j]) << ',' << format_double(p(0)) << ','
        << format_double(p(1)) << ',' << format_double(p(2)) << ','
        << format_double(p(3)) << ',' << format_double(traj.volumes[j]) << ','
        << traj.newton_iters[j];
    if (reduced) {
      // Run-level timing breakdown repeated for plot convenience.
      out << ',' << traj.reduced_order << ','
          << format_double(traj.timing.element_s) << ','
          << format_double(traj.timing.linear_s) << ','
          << format_double(traj.timing.other_s);
    }
    out << '\n';
  }
}

void write_summary_json(const std::string& path, const ExperimentConfig& config,
                        const RunArtifacts& run) {
  nlohmann::json j;
  j["steps"] = run.trajectory.times.size();
  j["wall_time_s"] = run.trajectory.wall_time;
  j["cpu_time_s"] = run.trajectory.cpu_time;
  j["reduced_order"] = run.trajectory.reduced_order;
  j["EF"] = run.scalars.ef;
  j["p_v_max"] = run.scalars.p_v_max;
  j["marked_disp_max"] = run.scalars.marked_disp_max;
  j["V_min"] = run.scalars.v_min;
  j["V_max"] = run.scalars.v_max;
  j["dt"] = config.integrator.dt;
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << j.dump(2) << '\n';
}

SampleLibrary load_sample_library(const std::string& library_dir,
                                  const std::string& parameter) {
  SampleLibrary lib;
  if (!fs::is_directory(library_dir))
    fail(ErrorCode::io_error, "library directory missing: " + library_dir);
  std::set<std::string> stems;
  for (const auto& entry : fs::directory_iterator(library_dir)) {
    const std::string name = entry.path().filename().string();
    const std::string suffix = ".basis.meta";
    if (name.size() > suffix.size() &&
        name.substr(name.size() - suffix.size()) == suffix)
      stems.insert(name.substr(0, name.size() - suffix.size()));
  }
  if (stems.empty())
    fail(ErrorCode::io_error, "no *.basis.meta samples in " + library_dir);
  for (const std::string& stem : stems) {
    LibrarySample s;
    const std::string base = library_dir + "/" + stem;
    s.basis = load_basis(base + ".basis");
    s.snapshots = load_snapshots(base + ".snapshots");
    // Physical value of the sweep parameter from the stored provenance.
    bool found = false;
    for (size_t i = 0; i < s.basis.param_names.size(); ++i) {
      if (s.basis.param_names[i] == parameter) {
        s.mu = {s.basis.param_values[i] * s.basis.param_initial[i]};
        found = true;
        break;
      }
    }
    if (!found)
      fail(ErrorCode::invalid_config,
           "sample " + stem + " lacks parameter " + parameter);
    lib.samples.push_back(std::move(s));
  }
  std::sort(lib.samples.begin(), lib.samples.end(),
            [](const LibrarySample& a, const LibrarySample& b) {
              return a.mu[0] < b.mu[0];
            });
  lib.validate();
  return lib;
}

void build_library_sample(const ExperimentConfig& config,
                          const std::string& library_dir,
                          const std::string& parameter, double value, int q) {
  fs::create_directories(library_dir);
  ExperimentConfig c = config;
  c.activation = config.activation_with({parameter}, Vector::Constant(1, value));
  RunArtifacts art = run_fom_scenario(c);
  double reference = config.activation.sigma;
  if (parameter == "alpha_max") reference = config.activation.alpha_max;
  else if (parameter == "alpha_min") reference = config.activation.alpha_min;
  else if (parameter == "t_sys") reference = config.activation.t_sys;
  else if (parameter == "t_dias") reference = config.activation.t_dias;
  else if (parameter == "gamma") reference = config.activation.gamma;
  tag_snapshots(art.snapshots, {parameter},
                Vector::Constant(1, value / reference), {reference});

  std::ostringstream stem;
  stem << library_dir << "/sample_" << parameter << "_" << value;
  save_snapshots(stem.str() + ".snapshots", art.snapshots);
  ProjectionBasis basis = pod_basis(art.snapshots, q);
  save_basis(stem.str() + ".basis", basis);
}

ProjectionBasis interpolate_basis(const SampleLibrary& lib,
                                  const std::string& method, double mu) {
  const std::vector<double> w = piecewise_linear_weights(mu, lib);
  if (method == "cob") return interp_concat_bases(lib, w);
  if (method == "cos") return interp_concat_snapshots(lib, w);
  if (method == "direct") return interp_direct_adjusted(lib, w);
  if (method == "grassmann") {
    const int k_ref = static_cast<int>(
        std::max_element(w.begin(), w.end()) - w.begin());
    return interp_grassmann(lib, w, k_ref);
  }
  fail(ErrorCode::invalid_config, "unknown interpolation method: " + method);
}

std::vector<SweepRow> pmor_sweep(const ExperimentConfig& config,
                                 const SampleLibrary& lib,
                                 const std::string& method, double lo,
                                 double hi, int count) {
  if (count < 1) fail(ErrorCode::invalid_config, "sweep: count must be >= 1");
  std::vector<double> queries(count);
  for (int i = 0; i < count; ++i)
    queries[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);

  const std::vector<std::string> methods =
      method == "all"
          ? std::vector<std::string>{"cob", "cos", "direct", "grassmann"}
          : std::vector<std::string>{method};
  const bool emit_fom_rows = method == "all";

  std::vector<std::vector<SweepRow>> per_query(queries.size());
  std::mutex mtx;
  parallel_for(static_cast<int>(queries.size()), [&](int qi) {
    const double mu = queries[qi];
    ExperimentConfig c = config;
    c.activation = config.activation_with({config.pmor.parameter},
                                          Vector::Constant(1, mu));
    const RunArtifacts fom = run_fom_scenario(c);
    std::vector<SweepRow> rows;
    if (emit_fom_rows)
      rows.push_back({mu, "fom", 0.0, fom.scalars.ef, fom.scalars.p_v_max,
                      fom.scalars.marked_disp_max});
    for (const std::string& m : methods) {
      const ProjectionBasis basis = interpolate_basis(lib, m, mu);
      const RunArtifacts rom = run_rom_scenario(c, basis);
      rows.push_back({mu, m, eps_inf_inf(rom.trajectory, fom.trajectory),
                      rom.scalars.ef, rom.scalars.p_v_max,
                      rom.scalars.marked_disp_max});
    }
    std::lock_guard<std::mutex> lock(mtx);
    per_query[qi] = std::move(rows);
  });

  std::vector<SweepRow> rows;
  for (auto& part : per_query)
    rows.insert(rows.end(), part.begin(), part.end());
  return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << "mu,method,eps_inf_inf,EF,p_max,marked_disp\n";
  for (const SweepRow& r : rows)
    out << format_double(r.mu) << ',' << r.method << ','
        << format_double(r.eps) << ',' << format_double(r.ef) << ','
        << format_double(r.p_max) << ',' << format_double(r.marked_disp)
        << '\n';
}

InvanaArtifacts invana_run(const ExperimentConfig& config, bool rom_gradients) {
  config.validate();
  const auto& names = config.invana.parameters;
  const int n_p = static_cast<int>(names.size());
  const std::vector<double>& initial = config.invana.initial;

  InvanaArtifacts art;
  art.n_p = n_p;
  art.mu_truth.resize(n_p);
  for (int i = 0; i < n_p; ++i)
    art.mu_truth(i) = config.invana.truth[i] / initial[i];

  const double v_ref =
      cavity_volume(config.scenario().mesh,
                    Vector::Zero(config.scenario().mesh.dofs()))
          .value;
  const double dt = config.integrator.dt;
  const double every = config.invana.sample_every;

  auto outputs_of = [&](const Trajectory& traj) {
    return sampled_volume_outputs(traj, dt, every, v_ref);
  };

  // Synthetic measurements from the ground-truth forward solution.
  const RunArtifacts truth_run =
      run_fom_at(config, names, art.mu_truth, initial);
  art.y = outputs_of(truth_run.trajectory);

  FomEvaluator fom = [&](const Vector& mu) {
    RunArtifacts run = run_fom_at(config, names, mu, initial);
    ForwardResult r;
    r.outputs = outputs_of(run.trajectory);
    r.snapshots = std::move(run.snapshots.data);
    r.cpu_seconds = run.trajectory.cpu_time;
    return r;
  };
  RomEvaluator rom = [&](const Vector& mu, const ProjectionBasis& basis) {
    RunArtifacts run = run_rom_at(config, names, mu, initial, basis);
    ForwardResult r;
    r.outputs = outputs_of(run.trajectory);
    r.cpu_seconds = run.trajectory.cpu_time;
    return r;
  };

  LmSettings lm = config.invana.lm;
  lm.rom_gradients = rom_gradients;
  art.result = lm_run(Vector::Ones(n_p), art.y, fom, rom, lm);
  return art;
}

void write_lm_trace_csv(const std::string& path, const LmTrace& trace) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  const int n_p = trace.iterations.empty()
                      ? 0
                      : static_cast<int>(trace.iterations[0].mu.size());
  out << "iter,S_rel,grad_rel,lambda";
  for (int p = 1; p <= n_p; ++p) out << ",mu_" << p;
  out << ",t_fom_s,t_prom_total_s\n";
  const double s0 = trace.iterations.empty() ? 1.0
                                             : trace.iterations[0].objective;
  const double g0 = trace.iterations.empty() || trace.iterations[0].grad_norm <= 0
                        ? 1.0
                        : trace.iterations[0].grad_norm;
  for (size_t i = 0; i < trace.iterations.size(); ++i) {
    const LmIteration& it = trace.iterations[i];
    double t_fom = 0.0, t_rom = 0.0;
    for (double s : it.t_fom_evals) t_fom += s;
    for (double s : it.t_rom_evals) t_rom += s;
    out << i << ',' << format_double(s0 > 0 ? it.objective / s0 : it.objective)
        << ','
        << format_double(it.grad_norm >= 0 ? it.grad_norm / g0
                                           : std::nan(""))
        << ',' << format_double(it.lambda);
    for (Eigen::Index p = 0; p < it.mu.size(); ++p)
      out << ',' << format_double(it.mu(p));
    out << ',' << format_double(t_fom) << ',' << format_double(t_rom) << '\n';
  }
}

void write_invana_summary(const std::string& path, const InvanaArtifacts& art,
                          const SpeedupReport* speedup) {
  nlohmann::json j;
  j["converged"] = art.result.trace.converged;
  j["iterations"] = art.result.trace.iterations.size();
  j["iterations_to_convergence"] =
      art.result.trace.iterations_to_convergence();
  j["rom_column_fallbacks"] = art.result.trace.rom_column_fallbacks;
  j["mu_hat"] = std::vector<double>(
      art.result.mu_hat.data(), art.result.mu_hat.data() + art.result.mu_hat.size());
  j["mu_truth"] = std::vector<double>(
      art.mu_truth.data(), art.mu_truth.data() + art.mu_truth.size());
  if (speedup) {
    j["alpha"] = speedup->alpha;
    j["beta"] = speedup->beta;
    j["measured_ratio"] = speedup->measured_ratio;
  }
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << j.dump(2) << '\n';
}

void report(const ExperimentConfig& config, const std::string& out_dir) {
  fs::create_directories(out_dir);

  // Baseline full-order run: singular-value decay analogue.
  const RunArtifacts base = run_fom_scenario(config);
  {
    const ThinSvd svd = thin_svd(base.snapshots.data);
    std::ofstream out(out_dir + "/pod_decay.csv");
    if (!out) fail(ErrorCode::io_error, "cannot write pod_decay.csv");
    out << "i,sigma,sigma_rel\n";
    for (Eigen::Index i = 0; i < svd.singular_values.size(); ++i)
      out << i + 1 << ',' << format_double(svd.singular_values(i)) << ','
          << format_double(svd.singular_values(i) / svd.singular_values(0))
          << '\n';
  }

  // Displacement-error decay over the reduced order.
  {
    std::ofstream out(out_dir + "/err_vs_q.csv");
    if (!out) fail(ErrorCode::io_error, "cannot write err_vs_q.csv");
    out << "q,eps_inf_inf\n";
    SnapshotMatrix snaps = base.snapshots;
    for (int q : {2, 4, 8, 16, 32}) {
      const ProjectionBasis basis = pod_basis(snaps, q);
      const RunArtifacts rom = run_rom_scenario(config, basis);
      out << q << ','
          << format_double(eps_inf_inf(rom.trajectory, base.trajectory))
          << '\n';
    }
  }

  // Two-sample contractility sweep with all interpolation methods.
  {
    const std::string lib_dir = out_dir + "/library";
    const double sigma0 = config.activation.sigma;
    build_library_sample(config, lib_dir, "sigma", sigma0, config.pmor.q);
    build_library_sample(config, lib_dir, "sigma", sigma0 * 430.0 / 280.0,
                         config.pmor.q);
    const SampleLibrary lib = load_sample_library(lib_dir, "sigma");
    const auto rows = pmor_sweep(config, lib, "all", sigma0,
                                 sigma0 * 430.0 / 280.0, 5);
    write_sweep_csv(out_dir + "/sweep.csv", rows);
  }

  // Inverse analyses with both gradient flavours plus the speedup summary.
  {
    const InvanaArtifacts fom_art = invana_run(config, false);
    const InvanaArtifacts rom_art = invana_run(config, true);
    write_lm_trace_csv(out_dir + "/lm_trace_fom.csv", fom_art.result.trace);
    write_lm_trace_csv(out_dir + "/lm_trace_prom.csv", rom_art.result.trace);
    const SpeedupReport speedup =
        speedup_report(fom_art.result.trace, rom_art.result.trace, rom_art.n_p);
    write_invana_summary(out_dir + "/invana_summary.json", rom_art, &speedup);
  }
}

}  // namespace pmk
