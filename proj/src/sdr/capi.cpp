#include "sdr/sdr.h"

#include <cstring>
#include <string>

#include "sdr/error.hpp"
#include "sdr/experiments.hpp"
#include "sdr/io.hpp"
#include "sdr/linalg.hpp"
#include "sdr/models.hpp"
#include "sdr/sir.hpp"
#include "sdr/sparse.hpp"

struct sdr_dataset {
  sdr::models::Dataset data;
};

struct sdr_model {
  sdr::models::ModelSpec spec;
};

struct sdr_fit {
  sdr::sir::SubspaceEstimate estimate;
};

struct sdr_summaries {
  sdr::experiments::PresetResult result;
};

namespace {

thread_local std::string g_last_error;

sdr_status map_code(sdr::ErrorCode code) {
  using sdr::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SDR_ERR_INVALID_ARG;
    case ErrorCode::Dimension: return SDR_ERR_DIMENSION;
    case ErrorCode::Rank: return SDR_ERR_RANK;
    case ErrorCode::Config: return SDR_ERR_CONFIG;
    case ErrorCode::Estimation: return SDR_ERR_ESTIMATION;
    case ErrorCode::Io: return SDR_ERR_IO;
  }
  return SDR_ERR_INVALID_ARG;
}

template <typename F>
sdr_status guarded(F&& body) {
  try {
    body();
    return SDR_OK;
  } catch (const sdr::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SDR_ERR_INVALID_ARG;
  }
}

sdr_status require(bool ok, const char* message) {
  if (ok) return SDR_OK;
  g_last_error = message;
  return SDR_ERR_INVALID_ARG;
}

}  // namespace

extern "C" {

const char* sdr_version(void) { return "0.1.0"; }

const char* sdr_last_error(void) { return g_last_error.c_str(); }

/* ---- datasets ------------------------------------------------------- */

sdr_status sdr_dataset_create(int64_t n, int32_t p, const double* x,
                              const double* y, sdr_dataset** out) {
  if (auto st = require(x && y && out, "null pointer argument")) return st;
  return guarded([&] {
    if (n < 2 || p < 1)
      sdr::fail(sdr::ErrorCode::Config, "dataset requires n >= 2 and p >= 1");
    sdr::models::Dataset data;
    data.X.resize(n, p);
    data.y.resize(n);
    for (int64_t i = 0; i < n; ++i) {
      data.y(i) = y[i];
      for (int32_t j = 0; j < p; ++j) data.X(i, j) = x[i * p + j];
    }
    if (!data.X.allFinite() || !data.y.allFinite())
      sdr::fail(sdr::ErrorCode::InvalidArgument,
                "dataset has non-finite entries");
    *out = new sdr_dataset{std::move(data)};
  });
}

sdr_status sdr_dataset_load_csv(const char* path, sdr_dataset** out) {
  if (auto st = require(path && out, "null pointer argument")) return st;
  return guarded([&] { *out = new sdr_dataset{sdr::io::load_dataset_csv(path)}; });
}

sdr_status sdr_dataset_save_csv(const sdr_dataset* data, const char* path) {
  if (auto st = require(data && path, "null pointer argument")) return st;
  return guarded([&] { sdr::io::save_dataset_csv(data->data, path); });
}

int64_t sdr_dataset_n(const sdr_dataset* data) {
  return data ? data->data.n() : 0;
}

int32_t sdr_dataset_p(const sdr_dataset* data) {
  return data ? data->data.p() : 0;
}

void sdr_dataset_free(sdr_dataset* data) { delete data; }

/* ---- synthetic models ------------------------------------------------ */

sdr_status sdr_model_linear_mu(int32_t p, double mu, sdr_model** out) {
  if (auto st = require(out != nullptr, "null pointer argument")) return st;
  return guarded(
      [&] { *out = new sdr_model{sdr::models::ModelSpec::linear_mu(p, mu)}; });
}

sdr_status sdr_model_two_index_conjecture(int32_t p, double mu,
                                          sdr_model** out) {
  if (auto st = require(out != nullptr, "null pointer argument")) return st;
  return guarded([&] {
    *out = new sdr_model{sdr::models::ModelSpec::two_index_conjecture(p, mu)};
  });
}

sdr_status sdr_model_dtsir(int32_t variant, int32_t p, double delta,
                           uint64_t seed, sdr_model** out) {
  if (auto st = require(out != nullptr, "null pointer argument")) return st;
  return guarded([&] {
    *out = new sdr_model{sdr::models::ModelSpec::dtsir(variant, p, delta, seed)};
  });
}

int32_t sdr_model_p(const sdr_model* model) {
  return model ? model->spec.p() : 0;
}

int32_t sdr_model_d(const sdr_model* model) {
  return model ? model->spec.d() : 0;
}

sdr_status sdr_model_true_v(const sdr_model* model, double* out) {
  if (auto st = require(model && out, "null pointer argument")) return st;
  const Eigen::MatrixXd& v = model->spec.true_v().mat();
  for (int j = 0; j < v.cols(); ++j)
    for (int i = 0; i < v.rows(); ++i) out[j * v.rows() + i] = v(i, j);
  return SDR_OK;
}

sdr_status sdr_model_generate(const sdr_model* model, int64_t n, uint64_t seed,
                              sdr_dataset** out) {
  if (auto st = require(model && out, "null pointer argument")) return st;
  return guarded([&] {
    *out = new sdr_dataset{
        sdr::models::generate(model->spec, static_cast<int>(n), seed)};
  });
}

void sdr_model_free(sdr_model* model) { delete model; }

/* ---- fits ------------------------------------------------------------ */

sdr_status sdr_fit_sir(const sdr_dataset* data, int32_t H, int32_t d,
                       int32_t centered, sdr_fit** out) {
  if (auto st = require(data && out, "null pointer argument")) return st;
  return guarded([&] {
    const auto est = sdr::sir::estimate_lambda(sdr::sir::slice(data->data, H),
                                               centered != 0);
    *out = new sdr_fit{sdr::sir::sir_subspace(est, d)};
  });
}

sdr_status sdr_fit_dtsir(const sdr_dataset* data, int32_t H, double c1,
                         double threshold, sdr_fit** out) {
  if (auto st = require(data && out, "null pointer argument")) return st;
  return guarded([&] {
    sdr::sparse::ThresholdConfig cfg;
    cfg.c1 = c1;
    cfg.explicit_t = threshold;
    *out = new sdr_fit{sdr::sparse::dt_sir(data->data, H, cfg)};
  });
}

sdr_status sdr_fit_oracle(const sdr_dataset* data, int32_t H, int32_t d,
                          const int32_t* support, int32_t slen,
                          int32_t centered, sdr_fit** out) {
  if (auto st = require(data && support && out && slen > 0,
                        "null or empty support"))
    return st;
  return guarded([&] {
    const auto est = sdr::sir::estimate_lambda(sdr::sir::slice(data->data, H),
                                               centered != 0);
    std::vector<int> S(support, support + slen);
    *out = new sdr_fit{sdr::sparse::oracle_estimator(est, S, d)};
  });
}

sdr_status sdr_fit_aggregate(const sdr_dataset* data, int32_t H, int32_t d,
                             int32_t k, int32_t strategy, int32_t screen_m,
                             int64_t enumeration_cap, uint64_t seed,
                             sdr_fit** out) {
  if (auto st = require(data && out, "null pointer argument")) return st;
  return guarded([&] {
    sdr::sparse::AggregationConfig cfg;
    cfg.H = H;
    cfg.d = d;
    cfg.k = k;
    cfg.strategy = strategy == 0
                       ? sdr::sparse::CandidateStrategy::Exhaustive
                       : sdr::sparse::CandidateStrategy::TopDiagonalScreen;
    if (screen_m > 0) cfg.screen_m = screen_m;
    if (enumeration_cap > 0) cfg.enumeration_cap = enumeration_cap;
    *out = new sdr_fit{sdr::sparse::aggregation_estimator(data->data, cfg, seed)};
  });
}

int32_t sdr_fit_p(const sdr_fit* fit) {
  return fit ? fit->estimate.basis.rows() : 0;
}

int32_t sdr_fit_d(const sdr_fit* fit) {
  return fit ? fit->estimate.basis.cols() : 0;
}

sdr_status sdr_fit_loadings(const sdr_fit* fit, double* out) {
  if (auto st = require(fit && out, "null pointer argument")) return st;
  const Eigen::MatrixXd& v = fit->estimate.basis.mat();
  for (int j = 0; j < v.cols(); ++j)
    for (int i = 0; i < v.rows(); ++i) out[j * v.rows() + i] = v(i, j);
  return SDR_OK;
}

sdr_status sdr_fit_eigenvalues(const sdr_fit* fit, double* out) {
  if (auto st = require(fit && out, "null pointer argument")) return st;
  for (int j = 0; j < fit->estimate.eigenvalues.size(); ++j)
    out[j] = fit->estimate.eigenvalues(j);
  return SDR_OK;
}

sdr_status sdr_fit_support(const sdr_fit* fit, int32_t* out, int32_t* slen) {
  if (auto st = require(fit && out && slen, "null pointer argument")) return st;
  std::vector<int> S = fit->estimate.support;
  if (S.empty())
    for (int i = 0; i < fit->estimate.basis.rows(); ++i) S.push_back(i);
  if (*slen < static_cast<int32_t>(S.size())) {
    g_last_error = "support buffer too small";
    return SDR_ERR_DIMENSION;
  }
  for (std::size_t i = 0; i < S.size(); ++i) out[i] = S[i];
  *slen = static_cast<int32_t>(S.size());
  return SDR_OK;
}

sdr_status sdr_fit_write_csv(const sdr_fit* fit, const char* path) {
  if (auto st = require(fit && path, "null pointer argument")) return st;
  return guarded([&] { sdr::io::write_fit_csv(fit->estimate, path); });
}

void sdr_fit_free(sdr_fit* fit) { delete fit; }

sdr_status sdr_projection_loss(int32_t p, int32_t d, const double* a,
                               const double* b, double* out) {
  if (auto st = require(a && b && out, "null pointer argument")) return st;
  return guarded([&] {
    Eigen::MatrixXd ma(p, d), mb(p, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < p; ++i) {
        ma(i, j) = a[j * p + i];
        mb(i, j) = b[j * p + i];
      }
    *out = sdr::linalg::projection_loss(sdr::linalg::OrthoMatrix(ma),
                                        sdr::linalg::OrthoMatrix(mb));
  });
}

/* ---- experiments ------------------------------------------------------ */

sdr_status sdr_experiment_table1(uint64_t seed, int32_t reps, int32_t p,
                                 int32_t threads, sdr_summaries** out) {
  if (auto st = require(out != nullptr, "null pointer argument")) return st;
  return guarded([&] {
    sdr::experiments::PresetOptions opt;
    if (reps > 0) opt.reps = reps;
    if (p > 0) opt.p = p;
    opt.threads = threads;
    *out = new sdr_summaries{sdr::experiments::preset_table1(seed, opt)};
  });
}

sdr_status sdr_experiment_table2(uint64_t seed, int32_t reps, int32_t p,
                                 int32_t allow_large, int32_t threads,
                                 sdr_summaries** out) {
  if (auto st = require(out != nullptr, "null pointer argument")) return st;
  return guarded([&] {
    sdr::experiments::PresetOptions opt;
    if (reps > 0) opt.reps = reps;
    if (p > 0) opt.p = p;
    opt.allow_large = allow_large != 0;
    opt.threads = threads;
    *out = new sdr_summaries{sdr::experiments::preset_table2(seed, opt)};
  });
}

sdr_status sdr_experiment_dtsir_curves(uint64_t seed, int32_t reps,
                                       const int32_t* p_list, int32_t np,
                                       int32_t threads, sdr_summaries** out) {
  if (auto st = require(out != nullptr, "null pointer argument")) return st;
  return guarded([&] {
    sdr::experiments::PresetOptions opt;
    if (reps > 0) opt.reps = reps;
    opt.threads = threads;
    for (int32_t i = 0; i < np; ++i) opt.p_list.push_back(p_list[i]);
    *out = new sdr_summaries{sdr::experiments::preset_dtsir_curves(seed, opt)};
  });
}

sdr_status sdr_experiment_custom(const char* config_path,
                                 const char* overrides, uint64_t default_seed,
                                 int32_t threads, sdr_summaries** out) {
  if (auto st = require(config_path && out, "null pointer argument")) return st;
  return guarded([&] {
    auto config = sdr::experiments::load_config_file(config_path);
    if (overrides) {
      for (const auto& [key, value] :
           sdr::experiments::parse_config_text(overrides))
        config[key] = value;
    }
    *out = new sdr_summaries{
        sdr::experiments::run_custom(config, default_seed, threads)};
  });
}

int64_t sdr_summaries_count(const sdr_summaries* sums) {
  return sums ? static_cast<int64_t>(sums->result.summaries.size()) : 0;
}

sdr_status sdr_summaries_get(const sdr_summaries* sums, int64_t index,
                             sdr_summary_row* out) {
  if (auto st = require(sums && out, "null pointer argument")) return st;
  if (index < 0 || index >= sdr_summaries_count(sums)) {
    g_last_error = "summary index out of range";
    return SDR_ERR_DIMENSION;
  }
  const auto& s = sums->result.summaries[index];
  std::memset(out, 0, sizeof(*out));
  std::strncpy(out->model, s.model.c_str(), sizeof(out->model) - 1);
  std::strncpy(out->estimator, s.estimator.c_str(), sizeof(out->estimator) - 1);
  out->mu = s.mu;
  out->p = s.p;
  out->d = s.d;
  out->s = s.s;
  out->H = s.H;
  out->n = s.n;
  out->kappa = s.kappa;
  out->reps = s.reps;
  out->failures = s.failures;
  out->mean_loss = s.mean_loss;
  out->sd_loss = s.sd_loss;
  out->mean_kappa_loss = s.mean_kappa_loss;
  out->num_eigs = static_cast<int32_t>(
      std::min<std::size_t>(s.mean_eigs.size(), 4));
  for (int32_t j = 0; j < out->num_eigs; ++j) {
    out->mean_eigs[j] = s.mean_eigs[j];
    out->sd_eigs[j] = s.sd_eigs[j];
  }
  return SDR_OK;
}

sdr_status sdr_summaries_write_csv(const sdr_summaries* sums,
                                   const char* path) {
  if (auto st = require(sums && path, "null pointer argument")) return st;
  return guarded([&] { sdr::io::write_results_csv(sums->result, path); });
}

sdr_status sdr_summaries_write_svgs(const sdr_summaries* sums,
                                    const char* dir) {
  if (auto st = require(sums && dir, "null pointer argument")) return st;
  return guarded([&] { sdr::io::write_dtsir_svgs(sums->result, dir); });
}

void sdr_summaries_free(sdr_summaries* sums) { delete sums; }

} /* extern "C" */
