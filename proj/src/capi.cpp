#include "pmorkit.h"

#include <filesystem>
#include <string>

#include "pmorkit/driver.hpp"
#include "pmorkit/errors.hpp"
#include "pmorkit/io.hpp"

namespace {

thread_local std::string g_last_error;

pmk_status status_of(const pmk::Error& e) {
  switch (e.code()) {
    case pmk::ErrorCode::io_error:
      return PMK_ERR_IO;
    case pmk::ErrorCode::invalid_input:
    case pmk::ErrorCode::invalid_order:
    case pmk::ErrorCode::invalid_config:
    case pmk::ErrorCode::invalid_weights:
      return PMK_ERR_INVALID;
    default:
      return PMK_ERR_NUMERIC;
  }
}

template <class Fn>
pmk_status guarded(Fn&& fn) {
  try {
    fn();
    return PMK_OK;
  } catch (const pmk::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PMK_ERR_NUMERIC;
  }
}

}  // namespace

struct pmk_config {
  pmk::ExperimentConfig impl;
};

struct pmk_result {
  pmk::ScalarOutputs scalars;
  double wall_time = 0.0;
  int steps = 0;
};

extern "C" {

const char* pmk_version(void) { return "0.1.0"; }

const char* pmk_last_error(void) { return g_last_error.c_str(); }

pmk_status pmk_config_default(pmk_config** out) {
  return guarded([&] {
    if (!out) pmk::fail(pmk::ErrorCode::invalid_input, "null output handle");
    *out = new pmk_config{};
  });
}

pmk_status pmk_config_load(const char* json_path, pmk_config** out) {
  return guarded([&] {
    if (!json_path || !out)
      pmk::fail(pmk::ErrorCode::invalid_input, "null argument");
    auto cfg = pmk::ExperimentConfig::load(json_path);
    cfg.validate();
    *out = new pmk_config{std::move(cfg)};
  });
}

pmk_status pmk_config_save(const pmk_config* config, const char* json_path) {
  return guarded([&] {
    if (!config || !json_path)
      pmk::fail(pmk::ErrorCode::invalid_input, "null argument");
    config->impl.save(json_path);
  });
}

pmk_status pmk_config_set_seed(pmk_config* config, long seed) {
  return guarded([&] {
    if (!config) pmk::fail(pmk::ErrorCode::invalid_input, "null config");
    config->impl.seed = seed;
  });
}

void pmk_config_free(pmk_config* config) { delete config; }

pmk_status pmk_fom_run(const pmk_config* config, const char* out_dir,
                       int dump_displacements, pmk_result** out) {
  return guarded([&] {
    if (!config || !out_dir)
      pmk::fail(pmk::ErrorCode::invalid_input, "null argument");
    std::filesystem::create_directories(out_dir);
    const std::string dir(out_dir);
    pmk::RunArtifacts art = pmk::run_fom_scenario(config->impl);
    // Tag the snapshots with the scenario's activation parameters so they
    // can seed interpolation libraries.
    art.snapshots.param_names = {"sigma", "alpha_max", "alpha_min", "t_sys",
                                 "t_dias"};
    art.snapshots.param_values = {1.0, 1.0, 1.0, 1.0, 1.0};
    art.snapshots.param_initial = {
        config->impl.activation.sigma, config->impl.activation.alpha_max,
        config->impl.activation.alpha_min, config->impl.activation.t_sys,
        config->impl.activation.t_dias};
    pmk::write_trajectory_csv(dir + "/trajectory.csv", art.trajectory);
    pmk::save_snapshots(dir + "/snapshots", art.snapshots);
    if (dump_displacements)
      pmk::write_matrix(dir + "/displacements.dat", art.snapshots.data);
    pmk::write_summary_json(dir + "/summary.json", config->impl, art);
    if (out)
      *out = new pmk_result{art.scalars, art.trajectory.wall_time,
                            static_cast<int>(art.trajectory.times.size())};
  });
}

pmk_status pmk_rom_run(const pmk_config* config, const char* basis_prefix,
                       const char* out_dir, pmk_result** out) {
  return guarded([&] {
    if (!config || !basis_prefix || !out_dir)
      pmk::fail(pmk::ErrorCode::invalid_input, "null argument");
    std::filesystem::create_directories(out_dir);
    const std::string dir(out_dir);
    const pmk::ProjectionBasis basis = pmk::load_basis(basis_prefix);
    pmk::RunArtifacts art = pmk::run_rom_scenario(config->impl, basis);
    pmk::write_trajectory_csv(dir + "/trajectory.csv", art.trajectory);
    pmk::write_summary_json(dir + "/summary.json", config->impl, art);
    if (out)
      *out = new pmk_result{art.scalars, art.trajectory.wall_time,
                            static_cast<int>(art.trajectory.times.size())};
  });
}

double pmk_result_ef(const pmk_result* r) { return r ? r->scalars.ef : 0.0; }
double pmk_result_p_v_max(const pmk_result* r) {
  return r ? r->scalars.p_v_max : 0.0;
}
double pmk_result_marked_disp_max(const pmk_result* r) {
  return r ? r->scalars.marked_disp_max : 0.0;
}
double pmk_result_v_min(const pmk_result* r) { return r ? r->scalars.v_min : 0.0; }
double pmk_result_v_max(const pmk_result* r) { return r ? r->scalars.v_max : 0.0; }
double pmk_result_wall_time(const pmk_result* r) {
  return r ? r->wall_time : 0.0;
}
int pmk_result_steps(const pmk_result* r) { return r ? r->steps : 0; }
void pmk_result_free(pmk_result* r) { delete r; }

pmk_status pmk_pod_build(const char* snapshots_prefix, int q, double eps_pod,
                         int stride, const char* basis_prefix, int* q_out) {
  return guarded([&] {
    if (!snapshots_prefix || !basis_prefix)
      pmk::fail(pmk::ErrorCode::invalid_input, "null argument");
    pmk::SnapshotMatrix snaps = pmk::load_snapshots(snapshots_prefix);
    if (stride > 1) {
      const Eigen::Index kept = (snaps.data.cols() + stride - 1) / stride;
      pmk::Matrix sub(snaps.data.rows(), kept);
      for (Eigen::Index c = 0; c < kept; ++c)
        sub.col(c) = snaps.data.col(c * stride);
      snaps.data = std::move(sub);
    }
    int order = q;
    if (order <= 0) {
      if (!(eps_pod > 0.0 && eps_pod < 1.0))
        pmk::fail(pmk::ErrorCode::invalid_input,
                  "either q > 0 or eps_pod in (0,1) required");
      const pmk::ThinSvd svd = pmk::thin_svd(snaps.data);
      order = pmk::select_order(svd.singular_values, eps_pod);
    }
    const pmk::ProjectionBasis basis = pmk::pod_basis(snaps, order);
    pmk::save_basis(basis_prefix, basis);
    if (q_out) *q_out = order;
  });
}

pmk_status pmk_pmor_sweep(const pmk_config* config, const char* library_dir,
                          const char* method, double lo, double hi, int count,
                          const char* out_csv) {
  return guarded([&] {
    if (!config || !library_dir || !method || !out_csv)
      pmk::fail(pmk::ErrorCode::invalid_input, "null argument");
    const pmk::SampleLibrary lib =
        pmk::load_sample_library(library_dir, config->impl.pmor.parameter);
    const auto rows = pmk::pmor_sweep(config->impl, lib, method, lo, hi, count);
    pmk::write_sweep_csv(out_csv, rows);
  });
}

pmk_status pmk_library_add_sample(const pmk_config* config,
                                  const char* library_dir,
                                  const char* parameter, double value, int q) {
  return guarded([&] {
    if (!config || !library_dir || !parameter)
      pmk::fail(pmk::ErrorCode::invalid_input, "null argument");
    pmk::build_library_sample(config->impl, library_dir, parameter, value, q);
  });
}

pmk_status pmk_invana_run(const pmk_config* config, const char* gradients,
                          const char* out_dir) {
  return guarded([&] {
    if (!config || !gradients || !out_dir)
      pmk::fail(pmk::ErrorCode::invalid_input, "null argument");
    std::filesystem::create_directories(out_dir);
    const std::string dir(out_dir);
    const std::string mode(gradients);
    if (mode == "prom" || mode == "fom") {
      const pmk::InvanaArtifacts art =
          pmk::invana_run(config->impl, mode == "prom");
      pmk::write_lm_trace_csv(dir + "/lm_trace.csv", art.result.trace);
      pmk::write_invana_summary(dir + "/summary.json", art, nullptr);
    } else if (mode == "both") {
      const pmk::InvanaArtifacts fom_art = pmk::invana_run(config->impl, false);
      const pmk::InvanaArtifacts rom_art = pmk::invana_run(config->impl, true);
      pmk::write_lm_trace_csv(dir + "/lm_trace_fom.csv", fom_art.result.trace);
      pmk::write_lm_trace_csv(dir + "/lm_trace_prom.csv", rom_art.result.trace);
      const pmk::SpeedupReport speedup = pmk::speedup_report(
          fom_art.result.trace, rom_art.result.trace, rom_art.n_p);
      pmk::write_invana_summary(dir + "/summary.json", rom_art, &speedup);
    } else {
      pmk::fail(pmk::ErrorCode::invalid_input,
                "gradients must be prom, fom, or both");
    }
  });
}

pmk_status pmk_report(const pmk_config* config, const char* out_dir) {
  return guarded([&] {
    if (!config || !out_dir)
      pmk::fail(pmk::ErrorCode::invalid_input, "null argument");
    pmk::report(config->impl, out_dir);
  });
}

}  // extern "C"
