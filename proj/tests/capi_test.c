#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "pdmpwp/pdmpwp.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static const char* kConfig =
    "[experiment]\n"
    "samplers = zigzag, underdamped_em\n"
    "n_paths = 2000\n"
    "seed = 3\n"
    "t_max = 4\n"
    "t_step = 1\n"
    "[initial]\n"
    "x0 = -5\n";

int main(int argc, char** argv) {
  const char* dir = argc > 1 ? argv[1] : ".";
  pdmp_config* cfg = NULL;

  EXPECT(pdmp_config_parse("[bogus]\nx = 1\n", &cfg) == PDMP_ERR_CONFIG);
  EXPECT(cfg == NULL);
  EXPECT(strstr(pdmp_last_error(), "bogus") != NULL);
  EXPECT(pdmp_config_load("/nonexistent.ini", &cfg) == PDMP_ERR_CONFIG);
  EXPECT(pdmp_config_parse(NULL, &cfg) == PDMP_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(pdmp_version()) > 0);

  EXPECT(pdmp_config_parse(kConfig, &cfg) == PDMP_OK);
  EXPECT(cfg != NULL);
  EXPECT(strlen(pdmp_config_hash(cfg)) > 0);
  EXPECT(pdmp_config_set_workers(cfg, 0) == PDMP_ERR_INVALID_ARGUMENT);
  EXPECT(pdmp_config_set_workers(cfg, 2) == PDMP_OK);
  EXPECT(pdmp_config_set_out_dir(cfg, dir) == PDMP_OK);
  EXPECT(strcmp(pdmp_config_out_dir(cfg), dir) == 0);

  pdmp_experiment* exp = NULL;
  EXPECT(pdmp_experiment_run(cfg, &exp) == PDMP_OK);
  if (exp) {
    EXPECT(pdmp_experiment_num_curves(exp) == 2);
    EXPECT(strcmp(pdmp_experiment_curve_label(exp, 0), "zigzag") == 0);
    EXPECT(pdmp_experiment_num_rows(exp, 0) == 5);
    pdmp_error_row row;
    EXPECT(pdmp_experiment_row(exp, 0, 0, &row) == PDMP_OK);
    EXPECT(row.t == 0.0 && row.estimate == 0.0 && row.n_paths == 2000);
    const double mu = pdmp_experiment_mu_f(exp);
    EXPECT(fabs(mu - (0.5 - atan(5.0) / M_PI)) < 1e-9);
    EXPECT(row.sq_error == mu * mu);
    EXPECT(pdmp_experiment_row(exp, 0, 99, &row) == PDMP_ERR_INVALID_ARGUMENT);
    EXPECT(pdmp_experiment_row(exp, 7, 0, &row) == PDMP_ERR_INVALID_ARGUMENT);
    EXPECT(pdmp_experiment_write(exp, dir) == PDMP_OK);
    pdmp_experiment_free(exp);
  }

  pdmp_path* path = NULL;
  EXPECT(pdmp_simulate(cfg, 0, &path) == PDMP_OK);
  if (path) {
    double x = 0.0;
    EXPECT(pdmp_path_position(path, 0.0, &x, 1) == PDMP_OK);
    EXPECT(x == -5.0);
    EXPECT(pdmp_path_position(path, 100.0, &x, 1) == PDMP_ERR_INVALID_ARGUMENT);
    EXPECT(pdmp_path_position(path, 1.0, &x, 3) == PDMP_ERR_INVALID_ARGUMENT);
    pdmp_path_free(path);
  }

  pdmp_bounds* b = NULL;
  EXPECT(pdmp_bounds_compute(cfg, &b) == PDMP_OK);
  if (b) {
    pdmp_constants k;
    EXPECT(pdmp_bounds_constants(b, &k) == PDMP_OK);
    EXPECT(k.has_example == 1);
    EXPECT(fabs(k.xi_c1 - (2.0 + sqrt(2.0))) < 1e-12);
    double xi = 0.0, r = 0.0;
    EXPECT(pdmp_bounds_xi(b, 0.0, &xi, &r) == PDMP_OK);
    EXPECT(xi == k.xi_c1);
    EXPECT(pdmp_bounds_xi(b, -1.0, &xi, &r) == PDMP_ERR_INVALID_ARGUMENT);
    pdmp_bounds_free(b);
  }

  pdmp_clt_result clt;
  EXPECT(pdmp_clt_check(cfg, &clt) == PDMP_OK);
  EXPECT(clt.verdict == PDMP_CLT_FAILS);

  EXPECT(pdmp_rate_table_size() == 4);
  const char *proc, *a, *s;
  EXPECT(pdmp_rate_table_row(0, &proc, &a, &s) == PDMP_OK);
  EXPECT(strcmp(a, "t^(-1/(2*tau))") == 0);
  EXPECT(pdmp_rate_table_row(4, &proc, &a, &s) == PDMP_ERR_INVALID_ARGUMENT);

  double v = 0.0;
  EXPECT(pdmp_tau_exponent(1, 1.0, &v) == PDMP_OK && fabs(v - 4.0) < 1e-15);
  EXPECT(pdmp_lambert_w(1.0, &v) == PDMP_OK && fabs(v - 0.5671432904097838) < 1e-15);
  EXPECT(pdmp_lambert_w(-1.0, &v) == PDMP_ERR_INVALID_ARGUMENT);
  EXPECT(pdmp_alpha_cauchy_explicit(1.0, &v) == PDMP_OK && v > 1.0);

  pdmp_poisson* p = NULL;
  EXPECT(pdmp_poisson_validate(cfg, &p) == PDMP_OK);
  if (p) {
    EXPECT(pdmp_poisson_num_cases(p) == 10);
    EXPECT(fabs(pdmp_poisson_kappa1(p) - sqrt(4.5)) < 1e-12);
    pdmp_poisson_case c;
    for (size_t i = 0; i < pdmp_poisson_num_cases(p); ++i) {
      EXPECT(pdmp_poisson_case_at(p, i, &c) == PDMP_OK);
      EXPECT(c.holds[0] && c.holds[1] && c.holds[2] && c.holds[3]);
    }
    EXPECT(pdmp_poisson_case_at(p, 10, &c) == PDMP_ERR_INVALID_ARGUMENT);
    pdmp_poisson_free(p);
  }

  pdmp_config_free(cfg);
  pdmp_config_free(NULL);
  if (failures) {
    fprintf(stderr, "%d C API checks failed\n", failures);
    return EXIT_FAILURE;
  }
  puts("C API checks passed");
  return EXIT_SUCCESS;
}
