/* pmorkit C API: projection-based parametric model order reduction toolkit
 * for a coupled chamber-windkessel test problem.
 *
 * All functions return a pmk_status; on failure pmk_last_error() carries a
 * human-readable message for the calling thread. Handles are opaque and must
 * be released with the matching *_free function.
 */
#ifndef PMORKIT_H
#define PMORKIT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pmk_status {
  PMK_OK = 0,
  PMK_ERR_INVALID = 1,  /* bad arguments or configuration */
  PMK_ERR_NUMERIC = 2,  /* solver/numerical failure */
  PMK_ERR_IO = 3        /* file system failure */
} pmk_status;

typedef struct pmk_config pmk_config;
typedef struct pmk_result pmk_result;

const char* pmk_version(void);
const char* pmk_last_error(void);

/* Configuration ---------------------------------------------------------- */
pmk_status pmk_config_default(pmk_config** out);
pmk_status pmk_config_load(const char* json_path, pmk_config** out);
pmk_status pmk_config_save(const pmk_config* config, const char* json_path);
pmk_status pmk_config_set_seed(pmk_config* config, long seed);
void pmk_config_free(pmk_config* config);

/* Forward simulations ----------------------------------------------------
 * Runs write trajectory.csv (+ snapshots.{dat,meta} for the full model and
 * on request a displacement dump) plus summary.json into out_dir and return
 * a result handle with the scalar outputs. */
pmk_status pmk_fom_run(const pmk_config* config, const char* out_dir,
                       int dump_displacements, pmk_result** out);
pmk_status pmk_rom_run(const pmk_config* config, const char* basis_prefix,
                       const char* out_dir, pmk_result** out);

double pmk_result_ef(const pmk_result* r);
double pmk_result_p_v_max(const pmk_result* r);
double pmk_result_marked_disp_max(const pmk_result* r);
double pmk_result_v_min(const pmk_result* r);
double pmk_result_v_max(const pmk_result* r);
double pmk_result_wall_time(const pmk_result* r);
int pmk_result_steps(const pmk_result* r);
void pmk_result_free(pmk_result* r);

/* Subspace construction ---------------------------------------------------
 * Reads "<snapshots_prefix>.dat/.meta"; q > 0 fixes the order, otherwise
 * eps_pod selects it through the relative information content. Writes
 * "<basis_prefix>.dat/.meta" and reports the chosen order. */
pmk_status pmk_pod_build(const char* snapshots_prefix, int q, double eps_pod,
                         int stride, const char* basis_prefix, int* q_out);

/* Parametric sweep of the subspace-interpolation methods over one scalar
 * parameter; emits the sweep CSV (mu,method,eps_inf_inf,EF,p_max,
 * marked_disp). method: cos|cob|direct|grassmann|all. */
pmk_status pmk_pmor_sweep(const pmk_config* config, const char* library_dir,
                          const char* method, double lo, double hi, int count,
                          const char* out_csv);

/* One library sample (full-order run + POD basis) at a physical parameter
 * value, written under library_dir. */
pmk_status pmk_library_add_sample(const pmk_config* config,
                                  const char* library_dir,
                                  const char* parameter, double value, int q);

/* Inverse analysis --------------------------------------------------------
 * gradients: "prom", "fom", or "both" (both also writes a speedup summary).
 * Writes lm_trace[_fom|_prom].csv and summary JSON files into out_dir. */
pmk_status pmk_invana_run(const pmk_config* config, const char* gradients,
                          const char* out_dir);

/* Full experiment suite with plot-ready CSVs under out_dir. */
pmk_status pmk_report(const pmk_config* config, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* PMORKIT_H */
