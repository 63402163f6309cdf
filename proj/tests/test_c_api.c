/* Exercises the C interface from plain C. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "fstein/fstein.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

int main(void) {
  fs_config cfg;
  fs_config_default(&cfg);
  EXPECT(cfg.max_subdivisions > 0);

  const char* keys[] = {"alpha"};
  const char* vals[] = {"2"};
  fs_law* pareto = NULL;
  EXPECT(fs_law_catalog("pareto", keys, vals, 1, &pareto) == FS_OK);

  /* Delta(F_9 | Phi_2) = 1/10 */
  fs_frechet_options opts;
  fs_frechet_options_default(&opts);
  fs_discrepancy d;
  fs_text* warn = NULL;
  EXPECT(fs_frechet_delta(pareto, 9, 0, &opts, &cfg, &d, &warn) == FS_OK);
  EXPECT(fabs(d.value - 0.1) < 1e-9);
  EXPECT(d.maxima_is_reference == 0);
  EXPECT(fs_text_size(warn) == 0);
  fs_text_free(warn);

  fs_bounds b;
  fs_text* notes = NULL;
  EXPECT(fs_frechet_bounds(pareto, 10, &opts, &cfg, &b, &notes) == FS_OK);
  EXPECT(b.has_wass_bound);
  fs_text_free(notes);

  fs_oracle o;
  EXPECT(fs_frechet_oracle(pareto, 10, &opts, &cfg, &o) == FS_OK);
  EXPECT(o.kol.available && o.tv.available && o.wass.available);
  EXPECT(o.kol.value <= b.kol_bound);
  EXPECT(o.wass.value <= b.wass_bound);

  /* explicit laws */
  fs_law* phi = NULL;
  fs_law* q = NULL;
  EXPECT(fs_law_frechet(2.0, &phi) == FS_OK);
  EXPECT(fs_law_maxima(pareto, 99, 0.0, FS_SCALING_TABLE, &q) == FS_OK);
  EXPECT(fs_delta(phi, q, 0, NULL, &d) == FS_OK);
  EXPECT(fabs(d.value - 0.01) < 1e-9);
  fs_text* label = NULL;
  EXPECT(fs_law_label(q, &label) == FS_OK);
  EXPECT(strstr(fs_text_data(label), "max[") == fs_text_data(label));
  fs_text_free(label);

  /* reversed roles are refused with a precondition status */
  EXPECT(fs_delta(q, phi, 0, NULL, &d) == FS_ERR_PRECONDITION);
  EXPECT(strlen(fs_last_error()) > 0);
  EXPECT(strcmp(fs_status_name(FS_ERR_PRECONDITION), "precondition") == 0);

  double v = 0.0;
  EXPECT(fs_frechet_vs_frechet(2.0, 3.0, 0, &v) == FS_OK);
  EXPECT(fabs(v - 0.58997449169729623239) < 1e-12);
  EXPECT(fs_frechet_vs_frechet(3.0, 2.0, 0, &v) == FS_ERR_PRECONDITION);

  /* errors */
  fs_law* bad = NULL;
  EXPECT(fs_law_catalog("no_such_law", NULL, NULL, 0, &bad) == FS_ERR_UNKNOWN_DISTRIBUTION);
  EXPECT(bad == NULL);
  EXPECT(fs_law_eval(NULL, 1.0, NULL) == FS_ERR_INVALID_PARAMETER);
  cfg.rel_tol = -1.0;
  EXPECT(fs_delta(phi, q, 0, &cfg, &d) == FS_ERR_INVALID_PARAMETER);
  fs_config_default(&cfg);

  /* sweeps and fits */
  uint64_t ns[] = {10, 100, 1000};
  fs_sweep_options so;
  fs_sweep_options_default(&so);
  fs_text* csv = NULL;
  EXPECT(fs_sweep(pareto, ns, 3, &so, &cfg, &csv, NULL) == FS_OK);
  EXPECT(strncmp(fs_text_data(csv), "n,delta,", 8) == 0);
  uint64_t rn[3];
  double rv[3];
  size_t count = 0;
  EXPECT(fs_sweep_column(fs_text_data(csv), "delta", rn, rv, 3, &count) == FS_OK);
  EXPECT(count == 3);
  fs_rate_fit fit;
  EXPECT(fs_fit_rate(rn, rv, count, &fit) == FS_OK);
  EXPECT(fabs(fit.slope + 1.0) < 0.03); /* 1/(n+1) over 10..1000 */
  fs_text_free(csv);
  EXPECT(fs_sweep(pareto, ns, 0, &so, &cfg, &csv, NULL) == FS_ERR_VALIDATION);

  /* Monte Carlo */
  EXPECT(fs_monte_carlo(pareto, 10, &opts, 10, 1, &o) == FS_ERR_INVALID_PARAMETER);
  EXPECT(fs_monte_carlo(pareto, 10, &opts, 20000, 1, &o) == FS_OK);
  EXPECT(o.monte_carlo && o.samples == 20000 && !o.tv.available);

  /* Stein solutions and regular variation */
  int passed = 0;
  fs_text* report = NULL;
  EXPECT(fs_verify_proposition1(phi, 200, &cfg, &passed, &report) == FS_OK);
  EXPECT(passed);
  fs_text_free(report);
  double idx = 0.0;
  EXPECT(fs_reverse_hazard_index(pareto, 1e4, &idx) == FS_OK);
  EXPECT(fabs(idx + 3.0) < 1e-3);
  double rate = 0.0;
  EXPECT(fs_law_rate(pareto, 100, &rate) == FS_OK && rate == 100.0);
  EXPECT(fs_law_rate(q, 100, &rate) == FS_ERR_INVALID_PARAMETER);

  fs_law_free(q);
  fs_law_free(phi);
  fs_law_free(pareto);
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  puts("c api: all checks passed");
  return 0;
}
