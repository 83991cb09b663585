#ifndef LOGWAVE_H
#define LOGWAVE_H

/* C interface of the logwave library: series ingestion, logistic-wavelet
 * scalograms, solitary-wave decomposition, wave-chain trend reports,
 * discrete information measures, and KdV residual checks.
 *
 * Every function that can fail returns a status code; 0 is success and the
 * nonzero codes match the CLI exit codes. On failure lw_last_error() holds a
 * message for the calling thread. Handles are opaque; free them with the
 * matching *_free function (NULL is ignored).
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LW_API __declspec(dllexport)
#else
#define LW_API __attribute__((visibility("default")))
#endif

enum {
    LW_OK = 0,
    LW_E_INPUT = 2,   /* unreadable/invalid input data */
    LW_E_PARAM = 3,   /* invalid parameter or configuration */
    LW_E_NUMERIC = 4  /* internal numerical failure */
};

LW_API const char* lw_version(void);
LW_API const char* lw_last_error(void); /* thread-local; empty when no error */

typedef struct lw_series lw_series;
typedef struct lw_scalogram lw_scalogram;
typedef struct lw_model lw_model;
typedef struct lw_chains lw_chains;
typedef struct lw_dist lw_dist;

/* ---- time series ----------------------------------------------------- */

/* column: header name, or a 0-based index written in digits, or "" for the
 * second column when present (else the first). */
LW_API int lw_series_load_csv(const char* path, const char* column,
                              lw_series** out);
LW_API int lw_series_from_values(const double* values, size_t n,
                                 lw_series** out);
LW_API int lw_series_save_csv(const lw_series* s, const char* path);
LW_API size_t lw_series_len(const lw_series* s);
LW_API int lw_series_copy_values(const lw_series* s, double* buf, size_t cap);
LW_API int lw_series_first_difference(const lw_series* s, lw_series** out);
LW_API int lw_series_cumulative(const lw_series* s, lw_series** out);
LW_API void lw_series_free(lw_series* s);

/* ---- scalogram -------------------------------------------------------- */

/* CWT of `signal` (pass the differenced series) on alpha_min..alpha_max step
 * alpha_step, beta at every integer sample index. */
LW_API int lw_scalogram_compute(const lw_series* signal, double alpha_min,
                                double alpha_max, double alpha_step,
                                lw_scalogram** out);
LW_API size_t lw_scalogram_rows(const lw_scalogram* s);
LW_API size_t lw_scalogram_cols(const lw_scalogram* s);
/* CSV matrix: first row the beta grid, first column the alpha grid. */
LW_API int lw_scalogram_save_csv(const lw_scalogram* s, const char* path);
/* Extremum list (alpha, beta, cwt_value, y_sat) as JSON. min_abs <= 0 uses
 * the automatic noise floor (3x the median absolute value). */
LW_API int lw_scalogram_write_extrema_json(const lw_scalogram* s,
                                           double min_abs, const char* path);
LW_API void lw_scalogram_free(lw_scalogram* s);

/* ---- models ------------------------------------------------------------ */

LW_API int lw_model_create(double c, double d, lw_model** out);
LW_API int lw_model_add_wave(lw_model* m, double a, double b, double y_sat);
LW_API int lw_model_load_json(const char* path, lw_model** out);
LW_API int lw_model_save_json(const lw_model* m, const char* path);
LW_API int lw_model_save_csv(const lw_model* m, const char* path);
LW_API size_t lw_model_wave_count(const lw_model* m);
LW_API int lw_model_get_wave(const lw_model* m, size_t index, double* a,
                             double* b, double* y_sat, int* edge);
LW_API int lw_model_get_baseline(const lw_model* m, double* c, double* d);
/* LW_E_PARAM when the model carries no fit report. */
LW_API int lw_model_get_fit(const lw_model* m, double* r_squared, double* rmse);
LW_API size_t lw_model_fit_len(const lw_model* m); /* residual count, 0 if none */
LW_API int lw_model_copy_residuals(const lw_model* m, double* buf, size_t cap);
/* Derivative-space sampling at t = 1..n plus N(0, sigma^2) noise; the seeded
 * generator is part of the library contract, so outputs are bit-stable. */
LW_API int lw_model_synthesize(const lw_model* m, size_t n, double noise_sigma,
                               uint64_t seed, lw_series** out);
LW_API void lw_model_free(lw_model* m);

/* ---- decomposition ------------------------------------------------------ */

/* Full pipeline on a monthly-value series. Pass stop_r2 in (0,1], refine as
 * a boolean, min_abs_cwt <= 0 for the automatic threshold, and the two pass
 * ceilings (defaults 30 and 120). The returned model carries the fit report. */
LW_API int lw_decompose(const lw_series* s, int max_waves, double stop_r2,
                        double min_abs_cwt, int refine,
                        double detail_alpha_max, double carrier_alpha_max,
                        lw_model** out);

/* ---- wave chains --------------------------------------------------------- */

LW_API int lw_chains_compute(const lw_model* m, double group_tol,
                             lw_chains** out);
LW_API size_t lw_chains_count(const lw_chains* c);
LW_API int lw_chains_save_json(const lw_chains* c, const char* path);
LW_API void lw_chains_free(lw_chains* c);

/* ---- discrete distributions ---------------------------------------------- */

LW_API int lw_dist_load_json(const char* path, lw_dist** out);
LW_API int lw_dist_load_csv(const char* path, lw_dist** out);
/* measure: "H" (joint entropy), "T2", "T3", "R" (mutual redundancy). */
LW_API int lw_dist_measure(const lw_dist* d, const char* measure, double* out);
LW_API void lw_dist_free(lw_dist* d);

/* ---- KdV verification ----------------------------------------------------- */

/* Max-norm residual of the classical KdV operator on the analytic soliton,
 * sampled on x in [-20, 20] step h, t in [-1, 1] step tau. */
LW_API int lw_kdv_soliton_residual(double k, double h, double tau, double* out);

#ifdef __cplusplus
}
#endif

#endif /* LOGWAVE_H */
