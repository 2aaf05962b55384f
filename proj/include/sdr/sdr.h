/* Sufficient-dimension-reduction estimation library: C interface.
 *
 * All objects are opaque handles created and destroyed by the library.
 * Functions return SDR_OK on success; on failure they return a status code
 * and leave a human-readable message retrievable (per thread) through
 * sdr_last_error(). Output parameters are untouched on failure.
 */
#ifndef SDR_SDR_H
#define SDR_SDR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdr_status {
  SDR_OK = 0,
  SDR_ERR_INVALID_ARG = 1,
  SDR_ERR_DIMENSION = 2,
  SDR_ERR_RANK = 3,
  SDR_ERR_CONFIG = 4,
  SDR_ERR_ESTIMATION = 5,
  SDR_ERR_IO = 6,
} sdr_status;

const char* sdr_version(void);

/* Message for the most recent failure on the calling thread. */
const char* sdr_last_error(void);

/* ---- datasets ------------------------------------------------------- */

typedef struct sdr_dataset sdr_dataset;

/* x is n*p row-major. */
sdr_status sdr_dataset_create(int64_t n, int32_t p, const double* x,
                              const double* y, sdr_dataset** out);
sdr_status sdr_dataset_load_csv(const char* path, sdr_dataset** out);
sdr_status sdr_dataset_save_csv(const sdr_dataset* data, const char* path);
int64_t sdr_dataset_n(const sdr_dataset* data);
int32_t sdr_dataset_p(const sdr_dataset* data);
void sdr_dataset_free(sdr_dataset* data);

/* ---- synthetic models ------------------------------------------------ */

typedef struct sdr_model sdr_model;

sdr_status sdr_model_linear_mu(int32_t p, double mu, sdr_model** out);
sdr_status sdr_model_two_index_conjecture(int32_t p, double mu,
                                          sdr_model** out);
/* variant in 1..4; support size floor(p^(1-delta)), signed entries. */
sdr_status sdr_model_dtsir(int32_t variant, int32_t p, double delta,
                           uint64_t seed, sdr_model** out);
int32_t sdr_model_p(const sdr_model* model);
int32_t sdr_model_d(const sdr_model* model);
/* out must hold p*d doubles; column-major loading matrix. */
sdr_status sdr_model_true_v(const sdr_model* model, double* out);
sdr_status sdr_model_generate(const sdr_model* model, int64_t n, uint64_t seed,
                              sdr_dataset** out);
void sdr_model_free(sdr_model* model);

/* ---- fits ------------------------------------------------------------ */

typedef struct sdr_fit sdr_fit;

sdr_status sdr_fit_sir(const sdr_dataset* data, int32_t H, int32_t d,
                       int32_t centered, sdr_fit** out);
/* threshold < 0 selects the default rule c1*log(p)/n; 0 disables screening. */
sdr_status sdr_fit_dtsir(const sdr_dataset* data, int32_t H, double c1,
                         double threshold, sdr_fit** out);
/* support: slen 0-based coordinate indices. */
sdr_status sdr_fit_oracle(const sdr_dataset* data, int32_t H, int32_t d,
                          const int32_t* support, int32_t slen,
                          int32_t centered, sdr_fit** out);
/* strategy: 0 exhaustive, 1 top-diagonal screen (pool size screen_m). */
sdr_status sdr_fit_aggregate(const sdr_dataset* data, int32_t H, int32_t d,
                             int32_t k, int32_t strategy, int32_t screen_m,
                             int64_t enumeration_cap, uint64_t seed,
                             sdr_fit** out);

int32_t sdr_fit_p(const sdr_fit* fit);
int32_t sdr_fit_d(const sdr_fit* fit);
/* out must hold p*d doubles; column-major orthonormal loadings. */
sdr_status sdr_fit_loadings(const sdr_fit* fit, double* out);
/* out must hold d doubles; eigenvalues in descending order. */
sdr_status sdr_fit_eigenvalues(const sdr_fit* fit, double* out);
/* Selected support (0-based, ascending); slen in/out: capacity / written.
 * Full-dimensional fits report every coordinate. */
sdr_status sdr_fit_support(const sdr_fit* fit, int32_t* out, int32_t* slen);
sdr_status sdr_fit_write_csv(const sdr_fit* fit, const char* path);
void sdr_fit_free(sdr_fit* fit);

/* ||A A^T - B B^T||_F^2 for two p x d column-orthonormal matrices
 * (column-major). */
sdr_status sdr_projection_loss(int32_t p, int32_t d, const double* a,
                               const double* b, double* out);

/* ---- experiments ------------------------------------------------------ */

typedef struct sdr_summaries sdr_summaries;

typedef struct sdr_summary_row {
  char model[32];
  char estimator[16];
  double mu;
  int32_t p;
  int32_t d;
  int32_t s;
  int32_t H;
  int64_t n;
  double kappa;
  int32_t reps;
  int32_t failures;
  double mean_loss;
  double sd_loss;
  double mean_kappa_loss;
  int32_t num_eigs;
  double mean_eigs[4];
  double sd_eigs[4];
} sdr_summary_row;

/* reps/threads/p <= 0 select the preset defaults. */
sdr_status sdr_experiment_table1(uint64_t seed, int32_t reps, int32_t p,
                                 int32_t threads, sdr_summaries** out);
sdr_status sdr_experiment_table2(uint64_t seed, int32_t reps, int32_t p,
                                 int32_t allow_large, int32_t threads,
                                 sdr_summaries** out);
/* p_list of np dimensions; np 0 selects {100,200,300,600,1200}. */
sdr_status sdr_experiment_dtsir_curves(uint64_t seed, int32_t reps,
                                       const int32_t* p_list, int32_t np,
                                       int32_t threads, sdr_summaries** out);
/* Flat key=value config file; overrides ("key=value\n...") win, may be NULL. */
sdr_status sdr_experiment_custom(const char* config_path,
                                 const char* overrides, uint64_t default_seed,
                                 int32_t threads, sdr_summaries** out);

int64_t sdr_summaries_count(const sdr_summaries* sums);
sdr_status sdr_summaries_get(const sdr_summaries* sums, int64_t index,
                             sdr_summary_row* out);
sdr_status sdr_summaries_write_csv(const sdr_summaries* sums,
                                   const char* path);
/* Writes <model>_loss.svg and <model>_kappa_loss.svg per model into dir.
 * Only meaningful for runs with kappa cells. */
sdr_status sdr_summaries_write_svgs(const sdr_summaries* sums,
                                    const char* dir);
void sdr_summaries_free(sdr_summaries* sums);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SDR_SDR_H */
