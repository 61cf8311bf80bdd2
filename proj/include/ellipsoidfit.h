/* ellipsoidfit - ellipsoid fitting from 3-D point samples.
 *
 * C interface to the shared library. All functions return an ef_status;
 * results are delivered through opaque handles released with the matching
 * _destroy call. On failure, ef_last_error_message() describes the most
 * recent error on the calling thread.
 */
#ifndef ELLIPSOIDFIT_H
#define ELLIPSOIDFIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ef_status {
    EF_OK = 0,
    EF_INVALID_INPUT = 1,
    EF_DEGENERATE_QUADRIC = 2,
    EF_NOT_AN_ELLIPSOID = 3,
    EF_FIT_FAILED = 4,
    EF_ORIENTATION_AMBIGUOUS = 5,
    EF_UNKNOWN = 99
} ef_status;

typedef enum ef_init_mode {
    EF_INIT_RANDOM = 0,
    EF_INIT_FISHER = 1,
    EF_INIT_IDENTITY = 2
} ef_init_mode;

typedef enum ef_center_mode {
    EF_CENTER_FIXED_ORIGIN = 0,
    EF_CENTER_FREE = 1
} ef_center_mode;

typedef struct ef_points ef_points;
typedef struct ef_report ef_report;

typedef struct ef_fit_config {
    double k_max;               /* cap for the constraint-weight doubling loop */
    int max_outer_iterations;   /* cap for the rotation refinement loop */
    double off_diag_tol;        /* relative off-diagonal convergence threshold */
    double trace_tol;           /* |trace(V) - 3| convergence threshold */
    int init_mode;              /* ef_init_mode */
    uint64_t rng_seed;
    int center_mode;            /* ef_center_mode */
} ef_fit_config;

/* Fills cfg with the default configuration. */
void ef_fit_config_init(ef_fit_config* cfg);

/* ---- point sets ---- */

/* Creates a point set from n xyz triples (coords has 3*n doubles). */
ef_status ef_points_create(const double* coords, size_t n, ef_points** out);
void ef_points_destroy(ef_points* pts);
size_t ef_points_count(const ef_points* pts);
ef_status ef_points_get(const ef_points* pts, size_t index, double xyz[3]);

/* Samples n points on the surface of the ellipsoid with the given semi-axes
 * (all > 0) rotated by the Euler angles (degrees), with optional isotropic
 * Gaussian noise of standard deviation noise_sigma >= 0. */
ef_status ef_points_generate(const double semi_axes[3], const double euler_deg[3], size_t n,
                             uint64_t seed, double noise_sigma, ef_points** out);

/* Samples n points on the level set p^T G p = level of the symmetric
 * positive definite matrix g (row-major 3x3). */
ef_status ef_points_sample_quadric(const double g[9], double level, size_t n, uint64_t seed,
                                   ef_points** out);

/* ---- fitting ---- */

/* Full iterative fit. cfg may be NULL for defaults. */
ef_status ef_fit(const ef_points* pts, const ef_fit_config* cfg, ef_report** out);

/* Single constrained fit in the data frame, no rotation refinement. */
ef_status ef_fit_single_pass(const ef_points* pts, const ef_fit_config* cfg, ef_report** out);

/* ---- report accessors ---- */

void ef_report_destroy(ef_report* rep);
ef_status ef_report_semi_axes(const ef_report* rep, double axes[3]); /* descending */
ef_status ef_report_euler_deg(const ef_report* rep, double euler[3]);
ef_status ef_report_center(const ef_report* rep, double center[3]);
ef_status ef_report_rotation(const ef_report* rep, double r[9]);     /* row-major */
ef_status ef_report_fisher(const ef_report* rep, double k[9]);       /* row-major, data frame */
int ef_report_converged(const ef_report* rep);
int ef_report_axis_degenerate(const ef_report* rep);
int ef_report_gimbal_lock(const ef_report* rep);
int ef_report_outer_iterations(const ef_report* rep);
int ef_report_total_inner_iterations(const ef_report* rep);

typedef struct ef_trace_row {
    int outer_iter;
    double k_used;
    double omega;
    double off_diag_ratio;
    double axes_estimate[3];
    double euler_estimate_deg[3];
    int inner_accepted;
} ef_trace_row;

size_t ef_report_trace_size(const ef_report* rep);
ef_status ef_report_trace_get(const ef_report* rep, size_t index, ef_trace_row* row);

/* ---- diagnostics ---- */

/* Message for the most recent failed call on this thread; empty string if
 * none. The pointer stays valid until the next failing call. */
const char* ef_last_error_message(void);

const char* ef_version(void);

#ifdef __cplusplus
}
#endif

#endif /* ELLIPSOIDFIT_H */
