#ifndef PDMPWP_PDMPWP_H
#define PDMPWP_PDMPWP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PDMPWP_API __declspec(dllexport)
#else
#define PDMPWP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdmp_status {
  PDMP_OK = 0,
  PDMP_ERR_INVALID_ARGUMENT = 1,
  PDMP_ERR_CONFIG = 2,
  PDMP_ERR_NUMERICAL = 3,
  PDMP_ERR_ENVELOPE = 4,
  PDMP_ERR_IO = 5,
  PDMP_ERR_INTERNAL = 6
} pdmp_status;

/* Message for the last failing call on this thread; never NULL. */
PDMPWP_API const char* pdmp_last_error(void);
PDMPWP_API const char* pdmp_version(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct pdmp_config pdmp_config;

PDMPWP_API pdmp_status pdmp_config_load(const char* path, pdmp_config** out);
PDMPWP_API pdmp_status pdmp_config_parse(const char* text, pdmp_config** out);
PDMPWP_API void pdmp_config_free(pdmp_config* cfg);
PDMPWP_API pdmp_status pdmp_config_set_seed(pdmp_config* cfg, uint64_t seed);
PDMPWP_API pdmp_status pdmp_config_set_workers(pdmp_config* cfg, unsigned workers);
PDMPWP_API pdmp_status pdmp_config_set_out_dir(pdmp_config* cfg, const char* dir);
/* Output directory from the config (or the last override). */
PDMPWP_API const char* pdmp_config_out_dir(const pdmp_config* cfg);
PDMPWP_API const char* pdmp_config_hash(const pdmp_config* cfg);
/* [poisson] csv, or "" when unset. */
PDMPWP_API const char* pdmp_config_poisson_csv(const pdmp_config* cfg);

/* ---- error-curve experiments ------------------------------------------ */

typedef struct pdmp_error_row {
  double t;
  double estimate;
  double sq_error;
  double stderr_;
  uint64_t n_paths;
} pdmp_error_row;

typedef struct pdmp_experiment pdmp_experiment;

/* Runs every configured sampler on the shared time grid. */
PDMPWP_API pdmp_status pdmp_experiment_run(const pdmp_config* cfg, pdmp_experiment** out);
PDMPWP_API void pdmp_experiment_free(pdmp_experiment* exp);
PDMPWP_API double pdmp_experiment_mu_f(const pdmp_experiment* exp);
PDMPWP_API size_t pdmp_experiment_num_curves(const pdmp_experiment* exp);
PDMPWP_API const char* pdmp_experiment_curve_label(const pdmp_experiment* exp, size_t curve);
PDMPWP_API size_t pdmp_experiment_num_rows(const pdmp_experiment* exp, size_t curve);
PDMPWP_API pdmp_status pdmp_experiment_row(const pdmp_experiment* exp, size_t curve, size_t row,
                                           pdmp_error_row* out);
/* <label>.csv and <label>.json per curve; with both a PDMP and a Langevin
   curve also figure1_pdmp.csv, figure1_langevin.csv, figure1_bound.csv. */
PDMPWP_API pdmp_status pdmp_experiment_write(const pdmp_experiment* exp, const char* dir);

/* ---- single path -------------------------------------------------------- */

typedef struct pdmp_path pdmp_path;

/* First PDMP sampler of the config, path index 0, horizon t_max. */
PDMPWP_API pdmp_status pdmp_simulate(const pdmp_config* cfg, uint64_t path_index, pdmp_path** out);
PDMPWP_API void pdmp_path_free(pdmp_path* path);
PDMPWP_API size_t pdmp_path_num_events(const pdmp_path* path);
PDMPWP_API pdmp_status pdmp_path_position(const pdmp_path* path, double t, double* x, size_t dim);
PDMPWP_API pdmp_status pdmp_path_write_csv(const pdmp_path* path, const char* file);

/* ---- rate constants and xi --------------------------------------------- */

typedef struct pdmp_constants {
  int has_computed;
  double kappa1, kappa2, r0, c_p, eps, c1, c1_eps_half, c2, c2_prime;
  int has_example;
  double example_r0, example_c1, example_c2_prime;
  /* Constants the xi curve actually uses. */
  double xi_c1, xi_c2_prime;
} pdmp_constants;

typedef struct pdmp_bounds pdmp_bounds;

PDMPWP_API pdmp_status pdmp_bounds_compute(const pdmp_config* cfg, pdmp_bounds** out);
PDMPWP_API void pdmp_bounds_free(pdmp_bounds* b);
PDMPWP_API pdmp_status pdmp_bounds_constants(const pdmp_bounds* b, pdmp_constants* out);
PDMPWP_API pdmp_status pdmp_bounds_xi(const pdmp_bounds* b, double t, double* xi, double* r_star);
/* Columns t, xi, lambert_asymptote on the config's time grid. */
PDMPWP_API pdmp_status pdmp_bounds_write_csv(const pdmp_bounds* b, const char* file);

/* ---- CLT criterion ------------------------------------------------------ */

typedef enum pdmp_clt_verdict { PDMP_CLT_HOLDS = 0, PDMP_CLT_FAILS = 1, PDMP_CLT_INCONCLUSIVE = 2 } pdmp_clt_verdict;

typedef struct pdmp_clt_result {
  pdmp_clt_verdict verdict;
  double margin;
  int numeric;
  char detail[256];
} pdmp_clt_result;

/* Uses the alpha described by the [bound] section and the [clt] options. */
PDMPWP_API pdmp_status pdmp_clt_check(const pdmp_config* cfg, pdmp_clt_result* out);

/* ---- rate table and scalar helpers ------------------------------------- */

PDMPWP_API size_t pdmp_rate_table_size(void);
PDMPWP_API pdmp_status pdmp_rate_table_row(size_t i, const char** process, const char** power_law,
                                           const char** sub_exponential);
PDMPWP_API pdmp_status pdmp_tau_exponent(int dim, double p, double* out);
PDMPWP_API pdmp_status pdmp_lambert_w(double x, double* out);
PDMPWP_API pdmp_status pdmp_alpha_cauchy_explicit(double r, double* out);

/* ---- Poisson oracle ----------------------------------------------------- */

typedef struct pdmp_poisson_case {
  const char* name;
  double ratios[4]; /* |u|/|g|, |u'|/|g|, |u''|/(k1|g|), |U'u'|/(k2|g|) */
  int holds[4];
  double residual;
} pdmp_poisson_case;

typedef struct pdmp_poisson pdmp_poisson;

/* Solves for a fixed battery of smooth test functions on the [potential]
   (d = 1) with [poisson] half_width and n. */
PDMPWP_API pdmp_status pdmp_poisson_validate(const pdmp_config* cfg, pdmp_poisson** out);
PDMPWP_API void pdmp_poisson_free(pdmp_poisson* p);
PDMPWP_API size_t pdmp_poisson_num_cases(const pdmp_poisson* p);
PDMPWP_API pdmp_status pdmp_poisson_case_at(const pdmp_poisson* p, size_t i, pdmp_poisson_case* out);
PDMPWP_API double pdmp_poisson_kappa1(const pdmp_poisson* p);
PDMPWP_API double pdmp_poisson_kappa2(const pdmp_poisson* p);
/* (x, u, u', u'') for case i. */
PDMPWP_API pdmp_status pdmp_poisson_write_csv(const pdmp_poisson* p, size_t i, const char* file);

#ifdef __cplusplus
}
#endif

#endif
