#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sdr/linalg.hpp"

namespace sdr::models {

// Row-major so that sample rows are contiguous and generation at larger n
// extends the same RNG stream's prefix.
using SampleMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// n paired observations: y scalar, x in R^p.
struct Dataset {
  SampleMatrix X;     // n x p
  Eigen::VectorXd y;  // n

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
};

enum class Link {
  LinearMu,            // y = sqrt(mu/(1-mu)) u1 + eps, 0 < mu < 1
  TwoIndexConjecture,  // y = sqrt(mu) (1 + g(u1)) (g(u1) + g(u2)) + eps
  Dtsir1,              // y = u + sin(u) + eps
  Dtsir2,              // y = 2 atan(u) + eps
  Dtsir3,              // y = u^3 + eps
  Dtsir4,              // y = sinh(u) + eps
  Custom,
};

const char* link_name(Link link);

// Clipped identity used by the two-index link: x for |x| <= 100, else 0.
double clipped_g(double x);

// Signed-support direction: s nonzero entries +-1/sqrt(s) on the first s
// coordinates, signs drawn from the seed. ||beta||_2 = 1.
Eigen::VectorXd make_signed_beta(int p, int s, std::uint64_t seed);

// Sparsity rule s = floor(p^(1-delta)) applied to make_signed_beta.
std::pair<Eigen::VectorXd, int> make_dtsir_beta(int p, double delta_sparsity,
                                                std::uint64_t seed);

// A synthetic data-generating model together with its ground-truth central
// subspace. x ~ N(0, I_p), eps ~ N(0, noise_sd^2), y = m(V^T x) + eps.
class ModelSpec {
 public:
  using CustomMean = std::function<double(const Eigen::VectorXd&)>;

  static ModelSpec linear_mu(int p, double mu);
  static ModelSpec two_index_conjecture(int p, double mu);
  static ModelSpec dtsir(int variant, const Eigen::VectorXd& beta);
  static ModelSpec dtsir(int variant, int p, double delta_sparsity,
                         std::uint64_t seed);
  static ModelSpec custom(const linalg::OrthoMatrix& true_v, CustomMean mean,
                          std::string name = "custom");

  Link link() const { return link_; }
  int p() const { return true_v_.rows(); }
  int d() const { return true_v_.cols(); }
  double mu() const { return mu_; }
  int support_size() const { return s_; }
  double noise_sd() const { return noise_sd_; }
  ModelSpec& set_noise_sd(double sd);
  const linalg::OrthoMatrix& true_v() const { return true_v_; }
  const std::string& name() const { return name_; }

  // The noiseless regression surface m(u) for the index vector u = V^T x.
  double link_mean(const Eigen::VectorXd& u) const;

  // Eigenvalues of var(E[x|y]) where a closed form exists: [mu] for the
  // linear link, absent otherwise.
  std::optional<std::vector<double>> true_lambda() const;

  // Stable 64-bit identity of the model (link, parameters, direction),
  // used to key replication RNG streams.
  std::uint64_t identity_hash() const;

 private:
  ModelSpec(Link link, linalg::OrthoMatrix v, double mu, int s,
            std::string name);

  Link link_;
  linalg::OrthoMatrix true_v_;
  double mu_ = 0.0;
  int s_ = 0;
  double noise_sd_ = 1.0;
  std::string name_;
  CustomMean custom_mean_;
};

// n = floor(kappa * s * log(p - s)), natural log.
long long kappa_to_n(double kappa, int s, int p);

// X rows i.i.d. standard p-variate normal, y per link with a fresh noise draw
// per row. Pure function of (spec, n, seed).
Dataset generate(const ModelSpec& spec, int n, std::uint64_t seed);

}  // namespace sdr::models
