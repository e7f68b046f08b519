/* cylspec: spectral toolkit for Laplacians on asymptotically cylindrical ends.
 *
 * C API over the core library: opaque handles, status-code returns. Every
 * function returning cylspec_status sets the thread-local message readable
 * through cylspec_last_error_message() on failure. Handles are created by
 * cylspec_*_create/assemble functions and released with the matching
 * cylspec_*_destroy; strings returned as char* are released with
 * cylspec_string_free.
 */

#ifndef CYLSPEC_CYLSPEC_H_
#define CYLSPEC_CYLSPEC_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* ------------------------------------------------------------------ */
/* status codes                                                        */
/* ------------------------------------------------------------------ */

typedef enum cylspec_status {
  CYLSPEC_OK = 0,
  CYLSPEC_ERR_INVALID_ARGUMENT = 1,
  CYLSPEC_ERR_CONFIGURATION = 2,
  CYLSPEC_ERR_DOMAIN = 3,
  CYLSPEC_ERR_THRESHOLD = 4,
  CYLSPEC_ERR_CONTRACT = 5,
  CYLSPEC_ERR_PARAMETER = 6,
  CYLSPEC_ERR_NUMERIC = 7,
  CYLSPEC_ERR_RESOURCE = 8,
  CYLSPEC_ERR_INSUFFICIENT_DATA = 9,
  CYLSPEC_ERR_PROPERTY_VIOLATION = 10,
  CYLSPEC_ERR_INTERNAL = 99
} cylspec_status;

const char* cylspec_last_error_message(void);
const char* cylspec_status_name(cylspec_status status);
const char* cylspec_version(void);
void cylspec_string_free(char* s);

/* ------------------------------------------------------------------ */
/* value types                                                         */
/* ------------------------------------------------------------------ */

typedef struct cylspec_complex {
  double re;
  double im;
} cylspec_complex;

/* interior nodes of [x_min, x_max]; Dirichlet truncation at the ends */
typedef struct cylspec_grid1d {
  double x_min;
  double x_max;
  int n_points;
} cylspec_grid1d;

typedef struct cylspec_grid2d {
  double x_half_length; /* domain [-Lx, Lx] */
  int nx;               /* interior x nodes */
  int ny;               /* y cells on the assembled section domain */
} cylspec_grid2d;

/* contour x -> x + lambda s(x - onset_r) */
typedef struct cylspec_scaling_profile {
  double onset_r;
  double ramp_width;
} cylspec_scaling_profile;

typedef struct cylspec_guide_metric {
  double g0, g1, g2;
  double sqrt_det;
  double inv00, inv01, inv11;
} cylspec_guide_metric;

typedef struct cylspec_decay_fit {
  double gamma_hat;
  double gamma_hat_half;
  double bound; /* -sqrt(gap) */
  double x0, x1;
  double r_squared;
  int points;
} cylspec_decay_fit;

typedef struct cylspec_sector_fit {
  double a;
  double theta;
  int samples;
} cylspec_sector_fit;

typedef enum cylspec_section_kind {
  CYLSPEC_SECTION_INTERVAL_DIRICHLET = 0,
  CYLSPEC_SECTION_INTERVAL_NEUMANN = 1,
  CYLSPEC_SECTION_CIRCLE = 2
} cylspec_section_kind;

typedef enum cylspec_guide_boundary {
  CYLSPEC_GUIDE_DIRICHLET = 0,
  CYLSPEC_GUIDE_NEUMANN = 1
} cylspec_guide_boundary;

typedef enum cylspec_guide_sector {
  CYLSPEC_GUIDE_FULL = 0,
  CYLSPEC_GUIDE_EVEN = 1,
  CYLSPEC_GUIDE_ODD = 2
} cylspec_guide_sector;

typedef enum cylspec_spectral_class {
  CYLSPEC_CLASS_NEAR_CURVE = 0,
  CYLSPEC_CLASS_NEAR_REAL_ISOLATED = 1,
  CYLSPEC_CLASS_OUTLIER = 2
} cylspec_spectral_class;

typedef enum cylspec_sweep_kind {
  CYLSPEC_SWEEP_TRUNCATION = 0,
  CYLSPEC_SWEEP_MODE_INDEX = 1
} cylspec_sweep_kind;

/* ------------------------------------------------------------------ */
/* opaque handles                                                      */
/* ------------------------------------------------------------------ */

typedef struct cylspec_model cylspec_model;
typedef struct cylspec_ladder cylspec_ladder;
typedef struct cylspec_tridiag_real cylspec_tridiag_real;
typedef struct cylspec_tridiag_complex cylspec_tridiag_complex;
typedef struct cylspec_guide_op cylspec_guide_op;
typedef struct cylspec_real_spectrum cylspec_real_spectrum;
typedef struct cylspec_accum_report cylspec_accum_report;

/* ------------------------------------------------------------------ */
/* models and thresholds                                               */
/* ------------------------------------------------------------------ */

cylspec_status cylspec_model_create_separable(int n, double delta, double c, double amplitude,
                                              cylspec_section_kind section, double extent,
                                              int copies, cylspec_model** out);
cylspec_status cylspec_model_create_guide(double delta, double c, double amplitude,
                                          cylspec_model** out);
cylspec_status cylspec_model_create_square_well(double depth, double halfwidth,
                                                cylspec_model** out);
void cylspec_model_destroy(cylspec_model* model);

/* f, f', f'' of the warp profile (separable or guide models) */
cylspec_status cylspec_model_eval_profile(const cylspec_model* model, double x, double* f,
                                          double* df, double* ddf);

/* V_k for separable models (sigma used), the well potential otherwise */
cylspec_status cylspec_model_potential(const cylspec_model* model, double sigma,
                                       cylspec_complex z, cylspec_complex* out);

cylspec_status cylspec_guide_metric_at(const cylspec_model* model, double x, double y,
                                       cylspec_guide_metric* out);

/* deviation from the product metric along increasing probe points */
cylspec_status cylspec_validate_stabilization(const cylspec_model* model, const double* x_probe,
                                              int n_probe, double* deviation_out,
                                              double* derivative_out, int* decreasing_out,
                                              int* tends_to_zero_out);

cylspec_status cylspec_build_threshold_ladder(cylspec_section_kind section, double extent,
                                              int copies, int count, cylspec_ladder** out);
void cylspec_ladder_destroy(cylspec_ladder* ladder);
int cylspec_ladder_size(const cylspec_ladder* ladder);
cylspec_status cylspec_ladder_entry(const cylspec_ladder* ladder, int index, double* value,
                                    int* multiplicity);
cylspec_status cylspec_max_decay_rate(const cylspec_ladder* ladder, double mu, double* out);

/* ------------------------------------------------------------------ */
/* scaling contour                                                     */
/* ------------------------------------------------------------------ */

double cylspec_scaling_max_modulus(void);
/* (s, s') of the unshifted ramp; the contour applies it at x - onset_r */
cylspec_status cylspec_scaling_s(cylspec_scaling_profile profile, double x, double* s,
                                 double* ds);
cylspec_status cylspec_contour_point(cylspec_scaling_profile profile, cylspec_complex lambda,
                                     double x, cylspec_complex* z, cylspec_complex* jacobian);

/* ------------------------------------------------------------------ */
/* 1D assembly                                                         */
/* ------------------------------------------------------------------ */

cylspec_status cylspec_assemble_mode_operator(const cylspec_model* model, double sigma,
                                              cylspec_grid1d grid, cylspec_tridiag_real** out);
cylspec_status cylspec_assemble_deformed_mode_operator(const cylspec_model* model, double sigma,
                                                       cylspec_grid1d grid,
                                                       cylspec_scaling_profile profile,
                                                       cylspec_complex lambda,
                                                       cylspec_tridiag_complex** out);
cylspec_status cylspec_tridiag_real_to_complex(const cylspec_tridiag_real* op,
                                               cylspec_tridiag_complex** out);
cylspec_status cylspec_conjugate_operator(const cylspec_tridiag_complex* op,
                                          cylspec_complex beta, cylspec_scaling_profile profile,
                                          cylspec_tridiag_complex** out);
void cylspec_tridiag_real_destroy(cylspec_tridiag_real* op);
void cylspec_tridiag_complex_destroy(cylspec_tridiag_complex* op);
int cylspec_tridiag_real_dim(const cylspec_tridiag_real* op);
int cylspec_tridiag_complex_dim(const cylspec_tridiag_complex* op);
char* cylspec_tridiag_real_triplets(const cylspec_tridiag_real* op);
char* cylspec_tridiag_complex_triplets(const cylspec_tridiag_complex* op);

/* ------------------------------------------------------------------ */
/* real solvers                                                        */
/* ------------------------------------------------------------------ */

cylspec_status cylspec_sturm_count(const cylspec_tridiag_real* op, double shift, int* out);
cylspec_status cylspec_default_bisection_tol(const cylspec_tridiag_real* op, double* out);

/* eigenvalues in (lo, hi] to +-tol; handle carries values/multiplicities */
cylspec_status cylspec_eigenvalues_in_window(const cylspec_tridiag_real* op, double lo, double hi,
                                             double tol, cylspec_real_spectrum** out);
void cylspec_real_spectrum_destroy(cylspec_real_spectrum* s);
int cylspec_real_spectrum_size(const cylspec_real_spectrum* s);
cylspec_status cylspec_real_spectrum_values(const cylspec_real_spectrum* s, double* out);
cylspec_status cylspec_real_spectrum_multiplicities(const cylspec_real_spectrum* s, int* out);
cylspec_status cylspec_real_spectrum_residuals(const cylspec_real_spectrum* s, double* out);
/* eigenvector j copied into out (dimension entries); fails if not stored */
cylspec_status cylspec_real_spectrum_vector(const cylspec_real_spectrum* s, int j, double* out,
                                            int out_len);

/* vec_out must hold dim entries; normalized in the grid inner product */
cylspec_status cylspec_inverse_iteration(const cylspec_tridiag_real* op, double mu_approx,
                                         double* value_out, double* residual_out,
                                         double* vec_out);

/* dense symmetric oracle; a is row-major n x n, values ascending into out[n] */
cylspec_status cylspec_dense_symmetric_eigenvalues(const double* a, int n, double* out);

/* ------------------------------------------------------------------ */
/* complex solvers                                                     */
/* ------------------------------------------------------------------ */

/* a row-major n x n; out arrays of length n; converged entries 0/1 */
cylspec_status cylspec_dense_complex_eigenvalues(const cylspec_complex* a, int n,
                                                 cylspec_complex* values_out,
                                                 int* converged_out, double* trace_error_out,
                                                 int* all_converged_out);
cylspec_status cylspec_tridiag_complex_eigenvalues(const cylspec_tridiag_complex* op,
                                                   cylspec_complex* values_out,
                                                   double* trace_error_out,
                                                   int* all_converged_out);
cylspec_status cylspec_nearest_eigenvalue(const cylspec_tridiag_complex* op,
                                          cylspec_complex target, cylspec_complex* value_out,
                                          double* residual_out);

/* ------------------------------------------------------------------ */
/* 2D guide                                                            */
/* ------------------------------------------------------------------ */

cylspec_status cylspec_assemble_guide_operator(const cylspec_model* model, cylspec_grid2d grid,
                                               cylspec_guide_boundary boundary,
                                               cylspec_guide_sector sector,
                                               cylspec_guide_op** out);
void cylspec_guide_op_destroy(cylspec_guide_op* op);
int cylspec_guide_op_dim(const cylspec_guide_op* op);
int cylspec_guide_op_bandwidth(const cylspec_guide_op* op);
char* cylspec_guide_op_triplets(const cylspec_guide_op* op);
cylspec_status cylspec_guide_count_below(const cylspec_guide_op* op, double shift, int* out);
cylspec_status cylspec_guide_lowest_eigenpairs(const cylspec_guide_op* op, int k, double shift,
                                               uint64_t seed, double residual_tol,
                                               cylspec_real_spectrum** out);

/* ------------------------------------------------------------------ */
/* spectral analysis                                                   */
/* ------------------------------------------------------------------ */

cylspec_status cylspec_essential_curve_points(double nu, cylspec_complex lambda,
                                              cylspec_complex beta, const double* xi, int n_xi,
                                              cylspec_complex* out);

/* classify eigenvalues against the beta=0 rays from the given thresholds */
cylspec_status cylspec_ray_classify(const cylspec_complex* eigenvalues, int n,
                                    const double* thresholds, int n_thresholds,
                                    cylspec_complex lambda, cylspec_complex beta,
                                    double curve_tol, double real_band, int* classes_out,
                                    double* distances_out, int* near_curve_out,
                                    int* near_real_out, int* outliers_out,
                                    double* max_near_curve_distance_out);

/* per-lambda nearest deformed eigenvalue vs the real candidate */
cylspec_status cylspec_persistence_check(const cylspec_model* model, double sigma,
                                         double mu_candidate, double gap,
                                         const cylspec_complex* lambdas, int n_lambdas,
                                         cylspec_grid1d grid, cylspec_scaling_profile profile,
                                         cylspec_complex* mu_hat_out, double* drift_out,
                                         double* im_abs_out, double* tol_out, int* pass_out,
                                         int* all_pass_out);

cylspec_status cylspec_fit_decay_rate(const cylspec_model* model, double sigma,
                                      const double* psi, int n, cylspec_grid1d grid, double mu,
                                      double gap, cylspec_decay_fit* out);

cylspec_status cylspec_accumulation_scan(const cylspec_model* model, int mode_k, double epsilon,
                                         cylspec_sweep_kind sweep, const double* keys,
                                         int n_keys, double h, double fixed_length,
                                         cylspec_accum_report** out);
void cylspec_accum_report_destroy(cylspec_accum_report* report);
int cylspec_accum_report_points(const cylspec_accum_report* report);
cylspec_status cylspec_accum_report_point(const cylspec_accum_report* report, int index,
                                          double* key_out, int* count_out);
int cylspec_accum_report_value_count(const cylspec_accum_report* report, int index);
/* sigma of the mode solved at this sweep point (the global threshold) */
double cylspec_accum_report_point_nu(const cylspec_accum_report* report, int index);
cylspec_status cylspec_accum_report_values(const cylspec_accum_report* report, int index,
                                           double* out);
cylspec_status cylspec_accum_report_flags(const cylspec_accum_report* report, int* below_only,
                                          int* monotone, int* n_stable_above);
double cylspec_accum_report_nu_global(const cylspec_accum_report* report);
int cylspec_accum_report_embedded(const cylspec_accum_report* report);

cylspec_status cylspec_sector_fit_tridiag(const cylspec_tridiag_complex* op, int samples,
                                          uint64_t seed, cylspec_sector_fit* out);
cylspec_status cylspec_sector_fit_dense(const cylspec_complex* a, int n, int samples,
                                        uint64_t seed, cylspec_sector_fit* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CYLSPEC_CYLSPEC_H_ */
