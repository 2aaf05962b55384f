#include "sdr/models.hpp"

#include <bit>
#include <cmath>
#include <utility>

#include "sdr/error.hpp"
#include "sdr/rng.hpp"

namespace sdr::models {

namespace {

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

linalg::OrthoMatrix leading_basis(int p, int d) {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(p, d);
  for (int j = 0; j < d; ++j) v(j, j) = 1.0;
  return linalg::OrthoMatrix(v);
}

int count_support(const Eigen::VectorXd& beta) {
  int s = 0;
  for (int i = 0; i < beta.size(); ++i)
    if (beta(i) != 0.0) ++s;
  return s;
}

}  // namespace

const char* link_name(Link link) {
  switch (link) {
    case Link::LinearMu: return "linear_mu";
    case Link::TwoIndexConjecture: return "two_index_conjecture";
    case Link::Dtsir1: return "dtsir_1";
    case Link::Dtsir2: return "dtsir_2";
    case Link::Dtsir3: return "dtsir_3";
    case Link::Dtsir4: return "dtsir_4";
    case Link::Custom: return "custom";
  }
  return "unknown";
}

double clipped_g(double x) { return std::abs(x) <= 100.0 ? x : 0.0; }

Eigen::VectorXd make_signed_beta(int p, int s, std::uint64_t seed) {
  if (s < 1 || s > p)
    fail(ErrorCode::Config, "signed beta needs 1 <= s <= p, got s=" +
                                std::to_string(s) + ", p=" + std::to_string(p));
  rng::Stream stream(rng::derive(seed, {0x62657461ULL, std::uint64_t(p),
                                        std::uint64_t(s)}));
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  const double mag = 1.0 / std::sqrt(static_cast<double>(s));
  for (int i = 0; i < s; ++i)
    beta(i) = stream.uniform() < 0.5 ? mag : -mag;
  return beta;
}

std::pair<Eigen::VectorXd, int> make_dtsir_beta(int p, double delta_sparsity,
                                                std::uint64_t seed) {
  if (p < 4) fail(ErrorCode::Config, "make_dtsir_beta requires p >= 4");
  const int s = static_cast<int>(
      std::floor(std::pow(static_cast<double>(p), 1.0 - delta_sparsity)));
  return {make_signed_beta(p, s, seed), s};
}

ModelSpec::ModelSpec(Link link, linalg::OrthoMatrix v, double mu, int s,
                     std::string name)
    : link_(link),
      true_v_(std::move(v)),
      mu_(mu),
      s_(s),
      name_(std::move(name)) {}

ModelSpec ModelSpec::linear_mu(int p, double mu) {
  if (!(mu > 0.0 && mu < 1.0))
    fail(ErrorCode::Config,
         "linear_mu requires 0 < mu < 1, got mu=" + std::to_string(mu));
  if (p < 1) fail(ErrorCode::Config, "linear_mu requires p >= 1");
  return ModelSpec(Link::LinearMu, leading_basis(p, 1), mu, 1, "linear_mu");
}

ModelSpec ModelSpec::two_index_conjecture(int p, double mu) {
  if (!(mu > 0.0))
    fail(ErrorCode::Config, "two_index_conjecture requires mu > 0");
  if (p < 2) fail(ErrorCode::Config, "two_index_conjecture requires p >= 2");
  return ModelSpec(Link::TwoIndexConjecture, leading_basis(p, 2), mu, 2,
                   "two_index_conjecture");
}

ModelSpec ModelSpec::dtsir(int variant, const Eigen::VectorXd& beta) {
  if (variant < 1 || variant > 4)
    fail(ErrorCode::Config, "dtsir variant must be in 1..4");
  if (std::abs(beta.norm() - 1.0) > 1e-10)
    fail(ErrorCode::Config, "dtsir direction must have unit l2 norm");
  Link link = static_cast<Link>(static_cast<int>(Link::Dtsir1) + variant - 1);
  return ModelSpec(link, linalg::OrthoMatrix(beta), 0.0, count_support(beta),
                   link_name(link));
}

ModelSpec ModelSpec::dtsir(int variant, int p, double delta_sparsity,
                           std::uint64_t seed) {
  auto [beta, s] = make_dtsir_beta(p, delta_sparsity, seed);
  (void)s;
  return dtsir(variant, beta);
}

ModelSpec ModelSpec::custom(const linalg::OrthoMatrix& true_v, CustomMean mean,
                            std::string name) {
  if (!mean) fail(ErrorCode::Config, "custom model requires a mean function");
  ModelSpec spec(Link::Custom, true_v, 0.0, 0, std::move(name));
  spec.custom_mean_ = std::move(mean);
  return spec;
}

ModelSpec& ModelSpec::set_noise_sd(double sd) {
  if (!(sd >= 0.0)) fail(ErrorCode::Config, "noise_sd must be >= 0");
  noise_sd_ = sd;
  return *this;
}

double ModelSpec::link_mean(const Eigen::VectorXd& u) const {
  switch (link_) {
    case Link::LinearMu:
      return std::sqrt(mu_ / (1.0 - mu_)) * u(0);
    case Link::TwoIndexConjecture: {
      const double g1 = clipped_g(u(0));
      const double g2 = clipped_g(u(1));
      return std::sqrt(mu_) * (1.0 + g1) * (g1 + g2);
    }
    case Link::Dtsir1:
      return u(0) + std::sin(u(0));
    case Link::Dtsir2:
      return 2.0 * std::atan(u(0));
    case Link::Dtsir3:
      return u(0) * u(0) * u(0);
    case Link::Dtsir4:
      return std::sinh(u(0));
    case Link::Custom:
      return custom_mean_(u);
  }
  fail(ErrorCode::Config, "unhandled link");
}

std::optional<std::vector<double>> ModelSpec::true_lambda() const {
  if (link_ == Link::LinearMu) return std::vector<double>{mu_};
  return std::nullopt;
}

std::uint64_t ModelSpec::identity_hash() const {
  std::uint64_t h = rng::derive(
      0x6d6f64656cULL,
      {std::uint64_t(link_), bits(mu_), bits(noise_sd_), std::uint64_t(p()),
       std::uint64_t(d())});
  for (char c : name_) h = rng::mix64(h ^ std::uint64_t(c));
  const Eigen::MatrixXd& v = true_v_.mat();
  for (int j = 0; j < v.cols(); ++j)
    for (int i = 0; i < v.rows(); ++i)
      h = rng::mix64(h ^ bits(v(i, j)));
  return h;
}

long long kappa_to_n(double kappa, int s, int p) {
  if (p <= s || s < 1)
    fail(ErrorCode::Config, "kappa_to_n requires p > s >= 1, got s=" +
                                std::to_string(s) + ", p=" + std::to_string(p));
  if (!(kappa > 0.0)) fail(ErrorCode::Config, "kappa_to_n requires kappa > 0");
  return static_cast<long long>(
      std::floor(kappa * s * std::log(static_cast<double>(p - s))));
}

Dataset generate(const ModelSpec& spec, int n, std::uint64_t seed) {
  if (n < 2) fail(ErrorCode::Config, "generate requires n >= 2");
  const int p = spec.p();

  // Row-major fill, then one noise draw per row: the draw order is part of
  // the determinism contract, and larger n extends the same stream's prefix.
  rng::Stream xs(rng::derive(seed, {0x786d6174ULL}));
  rng::Stream es(rng::derive(seed, {0x65707300ULL}));

  Dataset data;
  data.X.resize(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) data.X(i, j) = xs.normal();

  Eigen::MatrixXd u = data.X * spec.true_v().mat();  // n x d
  data.y.resize(n);
  const double sd = spec.noise_sd();
  Eigen::VectorXd ui(spec.d());
  for (int i = 0; i < n; ++i) {
    ui = u.row(i).transpose();
    data.y(i) = spec.link_mean(ui) + sd * es.normal();
  }
  return data;
}

}  // namespace sdr::models
