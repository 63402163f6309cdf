/* C interface to the fstein library.
 *
 * Every function returns an fs_status; on failure fs_last_error() holds a
 * message for the calling thread. Objects are opaque handles released with
 * the matching *_free function. Text results (CSV, SVG, reports) come back
 * as fs_text handles.
 */
#ifndef FSTEIN_FSTEIN_H
#define FSTEIN_FSTEIN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FS_API __declspec(dllexport)
#else
#define FS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
  FS_OK = 0,
  FS_ERR_DOMAIN = 1,
  FS_ERR_POLE = 2,
  FS_ERR_DIVERGENT = 3,
  FS_ERR_INVALID_PARAMETER = 4,
  FS_ERR_UNKNOWN_DISTRIBUTION = 5,
  FS_ERR_PRECONDITION = 6,
  FS_ERR_NONEXISTENT_MEAN = 7,
  FS_ERR_INVERSION = 8,
  FS_ERR_ACCURACY = 9,
  FS_ERR_EVALUATION = 10,
  FS_ERR_VALIDATION = 11,
  FS_ERR_IO = 12,
  FS_ERR_INTERNAL = 100
} fs_status;

enum { FS_SCALING_TABLE = 0, FS_SCALING_INVERSE = 1 };
enum { FS_ROLES_AUTOMATIC = 0, FS_ROLES_MAXIMA_REFERENCE = 1, FS_ROLES_FRECHET_REFERENCE = 2 };

#define FS_MAX_KINKS 64

typedef struct fs_law fs_law;
typedef struct fs_text fs_text;

typedef struct fs_config {
  double abs_tol;
  double rel_tol;
  int max_subdivisions;
  int probe_points;
} fs_config;

typedef struct fs_frechet_options {
  double alpha;         /* <= 0: the law's tail index */
  double a_n;           /* <= 0: from the scaling mode */
  int scaling;          /* FS_SCALING_* */
  int roles;            /* FS_ROLES_* */
  int unsafe_weighted;  /* allow Delta_w when c_F < 0 */
} fs_frechet_options;

typedef struct fs_law_values {
  double cdf;
  double pdf;
  double survival;
  double reverse_hazard;
} fs_law_values;

typedef struct fs_law_info {
  double left_endpoint;
  double starting_mass;
  int has_tail_index;
  double tail_index;
  int has_mean;
  double mean;
} fs_law_info;

typedef struct fs_discrepancy {
  double value;
  double error_estimate;
  int subdivisions;
  int maxima_is_reference; /* fs_frechet_delta only */
  size_t kink_count;       /* may exceed FS_MAX_KINKS; only that many are stored */
  double kinks[FS_MAX_KINKS];
} fs_discrepancy;

typedef struct fs_bounds {
  double delta;
  double delta_err;
  int has_delta_w;
  double delta_w;
  double delta_w_err;
  double q0;
  int has_mu;
  double mu;
  double kol_bound;
  double tv_bound;
  int has_wass_bound;
  double wass_bound;
  double kol_err;
  double tv_err;
  double wass_err;
} fs_bounds;

typedef struct fs_distance {
  int available;
  double value;
  double error;
} fs_distance;

typedef struct fs_oracle {
  fs_distance kol;
  fs_distance tv;
  fs_distance wass;
  double kol_location;
  int monte_carlo;
  uint64_t samples;
} fs_oracle;

typedef struct fs_sweep_options {
  double alpha; /* <= 0: tail index */
  int weighted;
  int with_oracle;
  int scaling;
  int roles;
  int threads; /* 0: hardware concurrency */
} fs_sweep_options;

typedef struct fs_rate_fit {
  double slope;
  double intercept;
  double r_squared;
} fs_rate_fit;

/* errors and defaults */
FS_API const char* fs_last_error(void);
FS_API const char* fs_status_name(fs_status status);
FS_API const char* fs_version(void);
FS_API void fs_config_default(fs_config* cfg);
FS_API void fs_frechet_options_default(fs_frechet_options* opts);
FS_API void fs_sweep_options_default(fs_sweep_options* opts);

/* text */
FS_API const char* fs_text_data(const fs_text* text);
FS_API size_t fs_text_size(const fs_text* text);
FS_API void fs_text_free(fs_text* text);

/* laws */
FS_API fs_status fs_law_catalog(const char* name, const char* const* keys, const char* const* values, size_t count,
                                fs_law** out);
FS_API fs_status fs_law_frechet(double alpha, fs_law** out);
FS_API fs_status fs_law_maxima(const fs_law* base, uint64_t n, double a_n, int scaling, fs_law** out);
FS_API void fs_law_free(fs_law* law);
FS_API fs_status fs_law_label(const fs_law* law, fs_text** out);
FS_API fs_status fs_law_eval(const fs_law* law, double x, fs_law_values* out);
FS_API fs_status fs_law_quantile(const fs_law* law, double u, double* out);
FS_API fs_status fs_law_info_get(const fs_law* law, const fs_config* cfg, fs_law_info* out);
/* c_n of a catalog law; FS_ERR_INVALID_PARAMETER when the law has none */
FS_API fs_status fs_law_rate(const fs_law* law, uint64_t n, double* out);
FS_API fs_status fs_scaling_sequence(const fs_law* law, uint64_t n, int scaling, double* out);
FS_API fs_status fs_catalog_help(fs_text** out);

/* discrepancies and bounds; notes/warnings are newline-separated, may be NULL */
FS_API fs_status fs_delta(const fs_law* P, const fs_law* Q, int weighted, const fs_config* cfg, fs_discrepancy* out);
FS_API fs_status fs_frechet_delta(const fs_law* F, uint64_t n, int weighted, const fs_frechet_options* opts,
                                  const fs_config* cfg, fs_discrepancy* out, fs_text** warnings);
FS_API fs_status fs_bounds_compute(const fs_law* P, const fs_law* Q, const fs_config* cfg, fs_bounds* out,
                                   fs_text** notes);
FS_API fs_status fs_frechet_bounds(const fs_law* F, uint64_t n, const fs_frechet_options* opts, const fs_config* cfg,
                                   fs_bounds* out, fs_text** notes);
FS_API fs_status fs_frechet_vs_frechet(double alpha, double beta, int weighted, double* out);
FS_API fs_status fs_pareto_delta(uint64_t n, double* out);
FS_API fs_status fs_pareto_delta_w(double alpha, uint64_t n, double* out);
FS_API fs_status fs_u_n(const fs_law* F, uint64_t n, int scaling, double* out);

/* distances */
FS_API fs_status fs_exact_oracle(const fs_law* P, const fs_law* Q, const fs_config* cfg, fs_oracle* out);
/* exact distances between F_n and Phi_alpha as paired by fs_frechet_delta */
FS_API fs_status fs_frechet_oracle(const fs_law* F, uint64_t n, const fs_frechet_options* opts, const fs_config* cfg,
                                   fs_oracle* out);
FS_API fs_status fs_monte_carlo(const fs_law* F, uint64_t n, const fs_frechet_options* opts, uint64_t samples,
                                uint64_t seed, fs_oracle* out);

/* Stein solutions */
FS_API fs_status fs_verify_proposition1(const fs_law* P, int grid_size, const fs_config* cfg, int* passed,
                                        fs_text** report);

/* regular variation */
FS_API fs_status fs_rv_report(const fs_law* F, double t_max, int scaling, fs_text** csv, double* estimated_index);
/* index of the reverse hazard from t in [1e2, t_max] and x in [1e-2, 1e2] */
FS_API fs_status fs_reverse_hazard_index(const fs_law* F, double t_max, double* out);
FS_API fs_status fs_da_check(const fs_law* F, const uint64_t* n, size_t count, int scaling, double* out);
FS_API fs_status fs_karamata_limit(const fs_law* F, const double* t, size_t count, double* out, size_t* written);

/* sweeps and fits */
FS_API fs_status fs_sweep(const fs_law* F, const uint64_t* n, size_t count, const fs_sweep_options* opts,
                          const fs_config* cfg, fs_text** csv, fs_text** svg);
FS_API fs_status fs_fit_rate(const uint64_t* n, const double* values, size_t count, fs_rate_fit* out);
/* reads (n, column) pairs from sweep CSV text; *count receives the number found */
FS_API fs_status fs_sweep_column(const char* csv, const char* column, uint64_t* n, double* values, size_t capacity,
                                 size_t* count);
FS_API fs_status fs_frechet_compare(double alpha, double beta, const fs_config* cfg, fs_text** report);

#ifdef __cplusplus
}
#endif

#endif
