#ifndef BAKRYLAB_H
#define BAKRYLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes returned by every entry point. On failure, bkl_last_error() holds a
 * human-readable message for the calling thread. */
enum {
    BKL_OK = 0,
    BKL_EINVAL = 1,      /* bad argument, invalid space data, or config problem */
    BKL_EDOMAIN = 2,     /* argument outside a mathematical domain */
    BKL_EHYPOTHESIS = 3, /* an estimate hypothesis fails on the data */
    BKL_EPOSITIVITY = 4, /* the solver lost positivity after all step halvings */
    BKL_EIO = 5,         /* filesystem failure */
    BKL_EPARSE = 6       /* malformed config or table text */
};

typedef struct bkl_space bkl_space;
typedef struct bkl_config bkl_config;

/* Message of the most recent failure on this thread; never NULL. */
const char* bkl_last_error(void);

/* kind is one of "euclidean", "hyperbolic", "gaussian_soliton"; parameter is the
 * curvature constant (hyperbolic, > 0) or the soliton constant, ignored for euclidean. */
int bkl_space_create(const char* kind, int dimension, double parameter, bkl_space** out);

/* Rotationally symmetric space from a warp-table file (format: `# warp-table v1`
 * header, rows of r phi phi' phi''). */
int bkl_space_create_custom(int dimension, const char* warp_table_path, bkl_space** out);

void bkl_space_destroy(bkl_space* space);

/* Drift term of the distance function (weighted Laplacian of r) at radius r > 0. */
int bkl_space_drift(const bkl_space* space, double r, double* out);

/* Radial and tangential eigenvalues of the Bakry-Emery tensor at radius r > 0. */
int bkl_space_ricci_eigenvalues(const bkl_space* space, double r, double* radial,
                                double* tangential);

/* Smallest constant K >= 0 with Ric_f >= -(N-1) K on the ball of radius R. */
int bkl_space_ricci_lower_bound(const bkl_space* space, double R, double* out);

/* Laplacian comparison on [1, R]: drift <= mu + (N-1) K (R-1). Requires R >= 2 and
 * samples >= 2; *pass is 1 when the margin stays above -1e-12. */
int bkl_space_comparison_check(const bkl_space* space, double R, int samples,
                               double* worst_margin, int* pass);

/* Parse a config file. The handle owns all derived paths. */
int bkl_config_load(const char* path, bkl_config** out);

void bkl_config_destroy(bkl_config* config);

/* Returns the number of validation problems (0 = valid) or a negative error code.
 * Newline-separated "field.path: message" text is written to buffer (truncated to
 * buffer_len, always NUL-terminated when buffer_len > 0). */
int bkl_config_validate(const bkl_config* config, char* buffer, size_t buffer_len);

/* Run every check in the config. output_override (may be NULL) takes precedence over
 * the BAKRYLAB_OUT environment variable and the config's output.dir. *failed_checks
 * receives the number of failing checks; report_dir receives the run directory path. */
int bkl_run(const bkl_config* config, const char* output_override, int* failed_checks,
            char* report_dir, size_t report_dir_len);

/* Rerun the config once per value of the dotted numeric parameter and aggregate all
 * check scalars into one CSV whose path is written to csv_path. */
int bkl_sweep(const bkl_config* config, const char* parameter, const double* values,
              size_t value_count, const char* output_override, int* failed_rows,
              char* csv_path, size_t csv_path_len);

#ifdef __cplusplus
}
#endif

#endif
