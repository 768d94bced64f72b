// Command-line front end; talks to the toolkit exclusively through the
// shared-library C API.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "pmorkit.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;

int exit_code_of(pmk_status status) {
  switch (status) {
    case PMK_OK:
      return 0;
    case PMK_ERR_INVALID:
      return kExitUsage;
    default:
      return kExitNumeric;
  }
}

int finish(pmk_status status, const char* verb) {
  if (status != PMK_OK)
    std::fprintf(stderr, "pmorkit %s: %s\n", verb, pmk_last_error());
  return exit_code_of(status);
}

struct ConfigHandle {
  pmk_config* ptr = nullptr;
  ~ConfigHandle() { pmk_config_free(ptr); }
};

int load_config(const std::string& path, long seed, ConfigHandle& cfg) {
  const pmk_status st = path.empty() ? pmk_config_default(&cfg.ptr)
                                     : pmk_config_load(path.c_str(), &cfg.ptr);
  if (st != PMK_OK) {
    std::fprintf(stderr, "pmorkit: config: %s\n", pmk_last_error());
    return exit_code_of(st);
  }
  if (seed >= 0) pmk_config_set_seed(cfg.ptr, seed);
  return 0;
}

bool parse_range(const std::string& spec, double& lo, double& hi, int& count) {
  return std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &count) == 3 &&
         count >= 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pmorkit: projection-based parametric model order reduction "
               "for a coupled chamber-windkessel problem"};
  app.require_subcommand(1);

  std::string config_path;
  long seed = -1;
  app.add_option("--config", config_path, "experiment configuration (JSON)");
  app.add_option("--seed", seed, "seed recorded in the configuration");

  // fom run / rom run
  auto* fom = app.add_subcommand("fom", "full order model");
  auto* fom_run = fom->add_subcommand("run", "simulate one cycle");
  std::string fom_out = "out/fom";
  bool dump_disp = false;
  fom_run->add_option("--out", fom_out, "output directory");
  fom_run->add_flag("--dump-displacements", dump_disp,
                    "also write the full displacement history");

  auto* rom = app.add_subcommand("rom", "reduced order model");
  auto* rom_run = rom->add_subcommand("run", "simulate with a given basis");
  std::string rom_out = "out/rom", rom_basis;
  rom_run->add_option("--out", rom_out, "output directory");
  rom_run->add_option("--basis", rom_basis, "basis file prefix")->required();

  // pod build
  auto* pod = app.add_subcommand("pod", "proper orthogonal decomposition");
  auto* pod_build = pod->add_subcommand("build", "basis from snapshots");
  std::string pod_snaps, pod_out = "basis";
  int pod_q = 0, pod_stride = 1;
  double pod_eps = 0.0;
  pod_build->add_option("--snapshots", pod_snaps, "snapshot file prefix")
      ->required();
  pod_build->add_option("--q", pod_q, "reduced order");
  pod_build->add_option("--eps-pod", pod_eps,
                        "RIC tolerance for order selection");
  pod_build->add_option("--stride", pod_stride, "snapshot subsampling stride");
  pod_build->add_option("--out", pod_out, "basis file prefix");

  // pmor sweep / library
  auto* pmor = app.add_subcommand("pmor", "parametric model order reduction");
  auto* sweep = pmor->add_subcommand("sweep", "interpolated-basis sweep");
  std::string sweep_lib, sweep_method = "cos", sweep_range, sweep_out = "sweep.csv";
  sweep->add_option("--library", sweep_lib, "sample library directory")
      ->required();
  sweep->add_option("--method", sweep_method,
                    "cos|cob|direct|grassmann|all");
  sweep->add_option("--range", sweep_range, "lo:hi:count query range")
      ->required();
  sweep->add_option("--out", sweep_out, "output CSV");
  auto* sample = pmor->add_subcommand("sample", "add one library sample");
  std::string sample_lib, sample_param = "sigma";
  double sample_value = 0.0;
  int sample_q = 30;
  sample->add_option("--library", sample_lib, "library directory")->required();
  sample->add_option("--parameter", sample_param, "swept parameter");
  sample->add_option("--value", sample_value, "physical parameter value")
      ->required();
  sample->add_option("--q", sample_q, "basis order");

  // invana run
  auto* invana = app.add_subcommand("invana", "inverse analysis");
  auto* invana_run = invana->add_subcommand("run", "Levenberg-Marquardt fit");
  std::string invana_grad = "prom", invana_out = "out/invana";
  invana_run->add_option("--gradients", invana_grad, "prom|fom|both");
  invana_run->add_option("--out", invana_out, "output directory");

  // report
  auto* rep = app.add_subcommand("report", "full experiment suite");
  std::string rep_out = "out/report";
  rep->add_option("--out", rep_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  ConfigHandle cfg;
  if (const int rc = load_config(config_path, seed, cfg)) return rc;

  if (fom_run->parsed()) {
    pmk_result* result = nullptr;
    const pmk_status st =
        pmk_fom_run(cfg.ptr, fom_out.c_str(), dump_disp ? 1 : 0, &result);
    if (st == PMK_OK) {
      std::printf("fom run: %d steps, EF=%.4f, p_v_max=%.3f kPa, wall=%.2fs\n",
                  pmk_result_steps(result), pmk_result_ef(result),
                  pmk_result_p_v_max(result), pmk_result_wall_time(result));
      pmk_result_free(result);
    }
    return finish(st, "fom run");
  }
  if (rom_run->parsed()) {
    pmk_result* result = nullptr;
    const pmk_status st =
        pmk_rom_run(cfg.ptr, rom_basis.c_str(), rom_out.c_str(), &result);
    if (st == PMK_OK) {
      std::printf("rom run: %d steps, EF=%.4f, p_v_max=%.3f kPa, wall=%.2fs\n",
                  pmk_result_steps(result), pmk_result_ef(result),
                  pmk_result_p_v_max(result), pmk_result_wall_time(result));
      pmk_result_free(result);
    }
    return finish(st, "rom run");
  }
  if (pod_build->parsed()) {
    int q_out = 0;
    const pmk_status st = pmk_pod_build(pod_snaps.c_str(), pod_q, pod_eps,
                                        pod_stride, pod_out.c_str(), &q_out);
    if (st == PMK_OK) std::printf("pod build: q=%d -> %s.{dat,meta}\n", q_out,
                                  pod_out.c_str());
    return finish(st, "pod build");
  }
  if (sweep->parsed()) {
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (!parse_range(sweep_range, lo, hi, count)) {
      std::fprintf(stderr, "pmorkit pmor sweep: bad --range, need lo:hi:count\n");
      return kExitUsage;
    }
    const pmk_status st =
        pmk_pmor_sweep(cfg.ptr, sweep_lib.c_str(), sweep_method.c_str(), lo, hi,
                       count, sweep_out.c_str());
    if (st == PMK_OK) std::printf("pmor sweep: wrote %s\n", sweep_out.c_str());
    return finish(st, "pmor sweep");
  }
  if (sample->parsed()) {
    const pmk_status st = pmk_library_add_sample(
        cfg.ptr, sample_lib.c_str(), sample_param.c_str(), sample_value,
        sample_q);
    if (st == PMK_OK)
      std::printf("pmor sample: %s=%g added to %s\n", sample_param.c_str(),
                  sample_value, sample_lib.c_str());
    return finish(st, "pmor sample");
  }
  if (invana_run->parsed()) {
    const pmk_status st =
        pmk_invana_run(cfg.ptr, invana_grad.c_str(), invana_out.c_str());
    if (st == PMK_OK) std::printf("invana run: results in %s\n",
                                  invana_out.c_str());
    return finish(st, "invana run");
  }
  if (rep->parsed()) {
    const pmk_status st = pmk_report(cfg.ptr, rep_out.c_str());
    if (st == PMK_OK) std::printf("report: results in %s\n", rep_out.c_str());
    return finish(st, "report");
  }

  std::fprintf(stderr, "pmorkit: missing sub-verb, see --help\n");
  return kExitUsage;
}
