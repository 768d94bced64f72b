#pragma once

#include <string>

#include "pmorkit/config.hpp"
#include "pmorkit/metrics.hpp"
#include "pmorkit/rom.hpp"
#include "pmorkit/subspace_interp.hpp"

namespace pmk {

/// Completed forward run: trajectory, snapshots, and derived scalar outputs.
struct RunArtifacts {
  Trajectory trajectory;
  SnapshotMatrix snapshots;
  ScalarOutputs scalars;
};

RunArtifacts run_fom_scenario(const ExperimentConfig& config);
RunArtifacts run_rom_scenario(const ExperimentConfig& config,
                              const ProjectionBasis& basis);

/// Trajectory CSV: t,p_v,p_p,p_d,q_p,V,newton_iters and, for reduced runs,
/// q plus the timing-breakdown columns.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_summary_json(const std::string& path, const ExperimentConfig& config,
                        const RunArtifacts& run);

/// Full-order run with the named activation parameters replaced by
/// normalized values mu (physical = mu .* initial).
RunArtifacts run_fom_at(const ExperimentConfig& config,
                        const std::vector<std::string>& names,
                        const Vector& mu_normalized,
                        const std::vector<double>& initial);

RunArtifacts run_rom_at(const ExperimentConfig& config,
                        const std::vector<std::string>& names,
                        const Vector& mu_normalized,
                        const std::vector<double>& initial,
                        const ProjectionBasis& basis);

/// Loads every "<stem>.basis.meta" (+ snapshots) pair under library_dir.
SampleLibrary load_sample_library(const std::string& library_dir,
                                  const std::string& parameter);

/// Builds the per-sample files of a library directory from one full-order
/// run at the given physical parameter value.
void build_library_sample(const ExperimentConfig& config,
                          const std::string& library_dir,
                          const std::string& parameter, double value, int q);

struct SweepRow {
  double mu = 0.0;
  std::string method;
  double eps = 0.0;
  double ef = 0.0;
  double p_max = 0.0;
  double marked_disp = 0.0;
};

/// Interpolated-basis reduced runs over a parameter range, each compared
/// against a fresh full-order solution at the query point. methods: one of
/// cos|cob|direct|grassmann or "all" (which also emits a fom row per query).
std::vector<SweepRow> pmor_sweep(const ExperimentConfig& config,
                                 const SampleLibrary& lib,
                                 const std::string& method, double lo,
                                 double hi, int count);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

ProjectionBasis interpolate_basis(const SampleLibrary& lib,
                                  const std::string& method, double mu);

struct InvanaArtifacts {
  LmResult result;
  Vector y;          // synthetic measurements
  Vector mu_truth;   // normalized ground truth
  int n_p = 0;
};

/// Synthetic inverse analysis: the measurement vector is the normalized
/// volume curve of a full-order run at the configured ground truth.
InvanaArtifacts invana_run(const ExperimentConfig& config, bool rom_gradients);
void write_lm_trace_csv(const std::string& path, const LmTrace& trace);
void write_invana_summary(const std::string& path, const InvanaArtifacts& art,
                          const SpeedupReport* speedup);

/// Runs the full desk-scale experiment suite (decay, error-vs-q, two-sample
/// sweep, both inverse analyses) and writes plot-ready CSVs under out_dir.
void report(const ExperimentConfig& config, const std::string& out_dir);

}  // namespace pmk
