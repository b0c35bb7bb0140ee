/*
 * fzreg — Bayesian regression for bounded fuzzy data.
 *
 * C interface to the core library: opaque handles, integer status codes,
 * thread-local error messages. All functions returning a pointer yield NULL
 * on failure; call fzr_last_error() for the message in either case.
 */
#ifndef FZREG_H
#define FZREG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FZR_API __declspec(dllexport)
#else
#define FZR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FZR_OK = 0,
  FZR_ERR_INVALID_ARGUMENT = 1,
  FZR_ERR_DOMAIN = 2,
  FZR_ERR_PARSE = 3,
  FZR_ERR_NUMERIC = 4,
  FZR_ERR_IO = 5,
  FZR_ERR_INTERNAL = 6
} fzr_status;

FZR_API const char* fzr_version(void);
FZR_API const char* fzr_last_error(void);

/* ---------- Beta-type fuzzy numbers ---------- */

FZR_API fzr_status fzr_bfn_membership(double m, double s, double lb, double ub, double x,
                                      double* out);
FZR_API fzr_status fzr_bfn_alpha_cut(double m, double s, double lb, double ub, double alpha,
                                     double* lo, double* hi);
FZR_API fzr_status fzr_bfn_centroid(double m, double s, double lb, double ub, double* out);
FZR_API fzr_status fzr_bfn_kaufman(double m, double s, double lb, double ub, double* out);
/* Least-squares conversion; support is pinned to [a1, a4]. */
FZR_API fzr_status fzr_trapezoid_to_beta(double a1, double a2, double a3, double a4, double* m,
                                         double* s, double* residual);
/* E[(S+1)^-1] for S ~ Gamma(shape, scale). */
FZR_API fzr_status fzr_c_factor(double alpha_s, double beta_s, double* out);

/* ---------- configuration ---------- */

/* Flat string key/value store mirroring the config file format. Recognized
 * keys include: family, link, lb, ub, chains, samples, burnin, seed, eps,
 * mh_correct, sn_refresh, keep_latent, threads, prior_beta_sd, prior_phi_sd,
 * standardize, format, n, covariates, beta_true, phi_true, alpha_s, beta_s,
 * reps, ppc_replicates, waic. */
typedef struct fzr_config fzr_config;

FZR_API fzr_config* fzr_config_create(void);
FZR_API fzr_status fzr_config_load(fzr_config* cfg, const char* path);
FZR_API fzr_status fzr_config_set(fzr_config* cfg, const char* key, const char* value);
FZR_API const char* fzr_config_get(const fzr_config* cfg, const char* key);
FZR_API void fzr_config_free(fzr_config* cfg);

/* ---------- datasets ---------- */

typedef struct fzr_dataset fzr_dataset;

FZR_API fzr_dataset* fzr_dataset_read(const fzr_config* cfg, const char* path);
/* x is row-major n x n_covariates (intercept excluded), may be NULL when
 * n_covariates is 0. */
FZR_API fzr_dataset* fzr_dataset_from_arrays(int n, int n_covariates, const double* m,
                                             const double* s, const double* x, double lb,
                                             double ub);
FZR_API fzr_status fzr_dataset_write(const fzr_dataset* ds, const char* path);
FZR_API int fzr_dataset_n(const fzr_dataset* ds);
FZR_API int fzr_dataset_dim(const fzr_dataset* ds); /* design columns, intercept included */
FZR_API fzr_status fzr_dataset_row(const fzr_dataset* ds, int i, double* m, double* s, double* lb,
                                   double* ub);
FZR_API fzr_status fzr_dataset_bounds(const fzr_dataset* ds, double* lb, double* ub);
FZR_API void fzr_dataset_free(fzr_dataset* ds);

/* Generative draw from the two-stage model using the truth keys in cfg
 * (family, beta_true, phi_true, alpha_s, beta_s, n, covariates, seed). */
FZR_API fzr_dataset* fzr_simulate(const fzr_config* cfg);
/* Latent outcomes of the last fzr_simulate call on this handle (length n). */
FZR_API fzr_status fzr_dataset_latent(const fzr_dataset* ds, double* out);

/* ---------- fitting ---------- */

typedef struct fzr_fit fzr_fit;

FZR_API fzr_fit* fzr_fit_run(const fzr_config* cfg, const fzr_dataset* ds);
FZR_API int fzr_fit_chains(const fzr_fit* fit);
FZR_API int fzr_fit_samples(const fzr_fit* fit); /* retained draws per chain */
FZR_API int fzr_fit_dim(const fzr_fit* fit);
FZR_API const char* fzr_fit_param_name(const fzr_fit* fit, int j);
/* out: samples x dim, row-major. */
FZR_API fzr_status fzr_fit_draws(const fzr_fit* fit, int chain, double* out);
FZR_API fzr_status fzr_fit_summary(const fzr_fit* fit, int j, double* mean, double* sd,
                                   double* hpdi_lo, double* hpdi_hi, double* rhat,
                                   double* ess_bulk, double* ess_tail);
FZR_API fzr_status fzr_fit_theta_s(const fzr_fit* fit, double* alpha_s, double* beta_s);
FZR_API int fzr_fit_b4p_fallbacks(const fzr_fit* fit);
FZR_API double fzr_fit_mh_accept_rate(const fzr_fit* fit);
FZR_API fzr_status fzr_fit_waic(const fzr_fit* fit, int marginal, double* out);
FZR_API fzr_status fzr_fit_write_draws(const fzr_fit* fit, const char* path);
FZR_API fzr_status fzr_fit_write_summary(const fzr_fit* fit, const char* path);
FZR_API void fzr_fit_free(fzr_fit* fit);

/* ---------- posterior predictive check ---------- */

typedef struct fzr_ppc fzr_ppc;

FZR_API fzr_ppc* fzr_ppc_run(const fzr_config* cfg, const fzr_fit* fit, const fzr_dataset* ds);
/* stat: 0 centroid, 1 support width, 2 Kaufman fuzziness. */
FZR_API fzr_status fzr_ppc_stat(const fzr_ppc* ppc, int stat, double* cp, double* bp);
FZR_API fzr_status fzr_ppc_write(const fzr_ppc* ppc, const char* quantiles_csv,
                                 const char* report_txt);
FZR_API void fzr_ppc_free(fzr_ppc* ppc);

/* ---------- proposal-approximation benchmark ---------- */

typedef struct fzr_benchmark fzr_benchmark;

FZR_API fzr_benchmark* fzr_benchmark_run(const fzr_config* cfg); /* keys: reps, seed, threads */
FZR_API int fzr_benchmark_rows(const fzr_benchmark* b);
FZR_API fzr_status fzr_benchmark_row(const fzr_benchmark* b, int idx, const char** family,
                                     double* tv_mean, double* tv_se, double* hd_mean,
                                     double* hd_se, long* count);
FZR_API fzr_status fzr_benchmark_write(const fzr_benchmark* b, const char* path);
FZR_API void fzr_benchmark_free(fzr_benchmark* b);

#ifdef __cplusplus
}
#endif

#endif /* FZREG_H */
