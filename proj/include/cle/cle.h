#ifndef CLE_H
#define CLE_H

/* C interface to the covariance-driven Loewner evolution library.
 *
 * Conventions:
 *   - Functions returning a pointer yield NULL on failure.
 *   - Functions returning int yield CLE_OK or an error code.
 *   - cle_last_error() describes the most recent failure on the calling
 *     thread; the string stays valid until the next failing cle_* call.
 *   - Every handle has exactly one cle_*_free; freeing NULL is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define CLE_OK 0
#define CLE_ERROR_INVALID_ARGUMENT 1
#define CLE_ERROR_RUNTIME 2
#define CLE_ERROR_ON_SLIT 3
#define CLE_ERROR_UNKNOWN 4

const char* cle_version(void);
const char* cle_last_error(void);

typedef struct cle_path cle_path;
typedef struct cle_cloud cle_cloud;
typedef struct cle_trajectory cle_trajectory;
typedef struct cle_density cle_density;
typedef struct cle_scan cle_scan;
typedef struct cle_polar cle_polar;

/* --- driving paths ------------------------------------------------------ */

/* n Gaussian increments with per-increment covariance (horizon/n)*[[a,c],[c,b]]. */
cle_path* cle_path_sample(double a, double b, double c, size_t n, double horizon,
                          uint64_t seed);
cle_path* cle_path_from_increments(double a, double b, double c, double horizon,
                                   const double* x, const double* y, size_t n,
                                   uint64_t seed);

#define CLE_PATH_CONJUGATE 0
#define CLE_PATH_NEGATE 1
#define CLE_PATH_SCALE 2 /* increments * r, horizon * r^2 */
#define CLE_PATH_DUAL 3  /* reversed driver times i */
cle_path* cle_path_transform(const cle_path* p, int op, double r);

size_t cle_path_size(const cle_path* p);
int cle_path_params(const cle_path* p, double* a, double* b, double* c,
                    double* horizon, uint64_t* seed);
/* Copies the n increments into caller buffers; either may be NULL. */
int cle_path_increments(const cle_path* p, double* x, double* y);
int cle_path_write_csv(const cle_path* p, const char* file);
int cle_path_write_binary(const cle_path* p, const char* file);
cle_path* cle_path_read_binary(const char* file);
void cle_path_free(cle_path* p);

/* --- forward map and point tracking ------------------------------------- */

/* Composes the centered slit-map chain at z. On return *absorbed_step is 0
 * if z survives all n pairs (out holds the final image), else the 1-based
 * pair index whose slit captured z (out holds the last value before that). */
int cle_forward_map(const cle_path* p, double z_re, double z_im, double* out_re,
                    double* out_im, size_t* absorbed_step);

cle_trajectory* cle_evolve_point(const cle_path* p, double z_re, double z_im,
                                 double delta_swallow);
size_t cle_trajectory_size(const cle_trajectory* t);
int cle_trajectory_sample(const cle_trajectory* t, size_t i, double* time,
                          double* f_re, double* f_im);
/* *has_window is 0 when the point was never absorbed. */
int cle_trajectory_window(const cle_trajectory* t, int* has_window,
                          double* t_above, double* t_below);
int cle_trajectory_sigma_time(const cle_trajectory* t, double time, double* sigma_t);
void cle_trajectory_free(cle_trajectory* t);

/* --- hull point clouds --------------------------------------------------- */

cle_cloud* cle_cloud_left(const cle_path* p, double epsilon, int threads);
cle_cloud* cle_cloud_right(const cle_path* p, double epsilon, int threads);
size_t cle_cloud_size(const cle_cloud* c);
size_t cle_cloud_dropped(const cle_cloud* c);
/* probe indexes the label set {0, 1, -1, i, -i}. */
int cle_cloud_point(const cle_cloud* c, size_t i, double* re, double* im,
                    double* t_added, int* probe);
int cle_cloud_write_csv(const cle_cloud* c, const char* file);
int cle_cloud_write_svg(const cle_cloud* c, const char* file);
void cle_cloud_free(cle_cloud* c);

/* --- stationary angular density ------------------------------------------ */

cle_density* cle_density_build(double a, double b, double c, size_t grid);
size_t cle_density_grid(const cle_density* d);
/* Copies the grid+1 nodes and values; either buffer may be NULL. */
int cle_density_values(const cle_density* d, double* u, double* p);
double cle_density_value(const cle_density* d, double angle);
double cle_density_cdf(const cle_density* d, double angle);
/* *present is 0 for the degenerate construction (no r_star there). */
int cle_density_r_star(const cle_density* d, int* present, double* value);
const char* cle_density_method(const cle_density* d);
int cle_density_write_csv(const cle_density* d, const char* file);
void cle_density_free(cle_density* d);

/* --- phase integrals and classification ---------------------------------- */

#define CLE_PHASE_THIN 0
#define CLE_PHASE_SWALLOWING 1
#define CLE_PHASE_HITTING 2
#define CLE_PHASE_DENSE 3
#define CLE_PHASE_BOUNDARY_INDETERMINATE 4

typedef struct cle_phase_report {
    double one;      /* growth rate of log|f| */
    double two;      /* growth rate of log|f/f'| */
    double err_one;  /* grid-refinement error estimates */
    double err_two;
    double zero_tol;
    int phase;
} cle_phase_report;

int cle_classify(double a, double b, double c, size_t grid, cle_phase_report* out);
const char* cle_phase_name(int phase);

/* Uniform grids a_min..a_max (na points) x b_min..b_max (nb points). */
cle_scan* cle_phase_scan(double a_min, double a_max, size_t na, double b_min,
                         double b_max, size_t nb, double c, size_t grid);
int cle_scan_write_grid_csv(const cle_scan* s, const char* file);
int cle_scan_write_boundary_csv(const cle_scan* s, const char* file);
void cle_scan_free(cle_scan* s);

/* --- polar system sampling ------------------------------------------------ */

cle_polar* cle_polar_evolve(double a, double b, double c, double theta0,
                            double t_end, double h, uint64_t seed);
size_t cle_polar_size(const cle_polar* p);
int cle_polar_sample(const cle_polar* p, size_t i, double* sigma_t, double* theta,
                     double* logmod, double* logderiv);
int cle_polar_write_csv(const cle_polar* p, const char* file);
void cle_polar_free(cle_polar* p);

/* --- Monte-Carlo verification --------------------------------------------- */

typedef struct cle_drift_report {
    double mean;
    double se;
    double reference;
    int pass; /* |mean - reference| <= 3 se */
} cle_drift_report;

int cle_verify_drift_logmod(double a, double b, double c, size_t paths, double t_end,
                            double h, uint64_t seed, cle_drift_report* out);
int cle_verify_drift_logderiv(double a, double b, double c, size_t paths, double t_end,
                              double h, uint64_t seed, cle_drift_report* out);

/* ks must hold n_checkpoints values. pass is 1 when every KS distance stays
 * below critical + slack. */
int cle_verify_stationarity(double a, double b, double c, size_t paths,
                            const double* checkpoints, size_t n_checkpoints, double h,
                            uint64_t seed, double* ks, double* critical, double* slack,
                            int* pass);

#define CLE_STAT_MAX_MODULUS 0
#define CLE_STAT_REAL_EXTENT 1
#define CLE_STAT_IMAG_EXTENT 2

typedef struct cle_duality_report {
    double ks;
    double p_value;
    double threshold;
    int retried;
    int pass;
} cle_duality_report;

/* retry != 0 applies the single-retry flakiness budget. */
int cle_verify_duality(double a, double b, double c, size_t n_hulls, size_t n_steps,
                       double horizon, double epsilon, int statistic, uint64_t seed,
                       int threads, int retry, cle_duality_report* out);

typedef struct cle_disconnection_report {
    double cell;
    double dilation;
    size_t covered_cells;
    size_t enclosed_cells;
    double enclosed_area;
} cle_disconnection_report;

int cle_disconnect_probe(const cle_cloud* c, double cell, double dilation,
                         cle_disconnection_report* out);

#ifdef __cplusplus
}
#endif

#endif /* CLE_H */
