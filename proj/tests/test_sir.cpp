#include "sdr/sir.hpp"

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "sdr/error.hpp"
#include "sdr/rng.hpp"

using namespace sdr;
using models::Dataset;
using models::ModelSpec;

namespace {

Dataset tiny_dataset() {
  Dataset d;
  d.X.resize(4, 1);
  d.X << 0.1, 0.3, 0.5, 0.7;
  d.y.resize(4);
  d.y << 1, 2, 3, 4;
  return d;
}

}  // namespace

TEST_CASE("slice hand example") {
  const sir::SlicedView view = sir::slice(tiny_dataset(), 2);
  CHECK(view.slice_means(0, 0) == doctest::Approx(0.2));
  CHECK(view.slice_means(1, 0) == doctest::Approx(0.6));
  CHECK(view.overall_mean(0) == doctest::Approx(0.4));
  CHECK(view.slice_sizes == std::vector<int>{2, 2});
}

TEST_CASE("slice tie-break keeps input order") {
  Dataset d;
  d.X.resize(4, 1);
  d.X << 10, 20, 30, 40;
  d.y = Eigen::VectorXd::Zero(4);
  const sir::SlicedView view = sir::slice(d, 2);
  CHECK(view.slice_assignment == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("slice remainder goes to the earliest slices") {
  Dataset d;
  d.X.resize(5, 1);
  d.X << 1, 2, 3, 4, 5;
  d.y.resize(5);
  d.y << 1, 2, 3, 4, 5;
  const sir::SlicedView view = sir::slice(d, 2);
  CHECK(view.slice_sizes == std::vector<int>{3, 2});
}

TEST_CASE("slice validates H") {
  CHECK_THROWS_AS(sir::slice(tiny_dataset(), 1), Error);
  CHECK_THROWS_AS(sir::slice(tiny_dataset(), 5), Error);
  CHECK_THROWS_WITH_AS(sir::slice(tiny_dataset(), 5),
                       doctest::Contains("H exceeds sample count"), Error);
}

TEST_CASE("slice means average back to the overall mean") {
  const ModelSpec spec = ModelSpec::linear_mu(4, 0.5);
  const Dataset data = models::generate(spec, 103, 8);
  const sir::SlicedView view = sir::slice(data, 10);
  Eigen::VectorXd weighted = Eigen::VectorXd::Zero(4);
  for (int h = 0; h < 10; ++h)
    weighted += view.slice_sizes[h] * view.slice_means.row(h).transpose();
  weighted /= 103.0;
  CHECK((weighted - view.overall_mean).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("estimate_lambda hand example") {
  const sir::SlicedView view = sir::slice(tiny_dataset(), 2);
  const sir::CondCovEstimate unc = sir::estimate_lambda(view);
  CHECK(unc.lambda_hat(0, 0) == doctest::Approx(0.2));
  const sir::CondCovEstimate cen = sir::estimate_lambda(view, true);
  CHECK(cen.lambda_hat(0, 0) == doctest::Approx(0.04));
}

TEST_CASE("estimate_lambda zero means give the zero matrix") {
  sir::SlicedView view;
  view.H = 2;
  view.slice_means = Eigen::MatrixXd::Zero(2, 3);
  view.overall_mean = Eigen::VectorXd::Zero(3);
  view.slice_sizes = {2, 2};
  const sir::CondCovEstimate est = sir::estimate_lambda(view);
  CHECK(est.lambda_hat.mat().isZero(0));
  CHECK(sir::top_eigenvalues(est, 3).isZero(0));
}

TEST_CASE("lambda_hat is PSD with rank bounded by H") {
  const ModelSpec spec = ModelSpec::linear_mu(12, 0.5);
  const Dataset data = models::generate(spec, 400, 21);
  const sir::SlicedView view = sir::slice(data, 5);
  const sir::CondCovEstimate est = sir::estimate_lambda(view);
  const Eigen::VectorXd eigs = sir::top_eigenvalues(est, 12);
  CHECK(eigs.minCoeff() >= -1e-10);
  for (int j = 5; j < 12; ++j) CHECK(std::abs(eigs(j)) < 1e-12);

  // Uncentered trace identity.
  double tr = 0.0;
  for (int h = 0; h < 5; ++h)
    tr += view.slice_means.row(h).squaredNorm();
  tr /= 5.0;
  CHECK(est.lambda_hat.mat().trace() == doctest::Approx(tr).epsilon(1e-12));
}

TEST_CASE("permuting samples leaves lambda_hat unchanged when y has no ties") {
  const ModelSpec spec = ModelSpec::linear_mu(6, 0.3);
  const Dataset data = models::generate(spec, 97, 3);
  Dataset shuffled;
  shuffled.X.resize(97, 6);
  shuffled.y.resize(97);
  std::vector<int> perm(97);
  std::iota(perm.begin(), perm.end(), 0);
  rng::Stream s(42);
  for (int i = 96; i > 0; --i)
    std::swap(perm[i], perm[s.next_u64() % (i + 1)]);
  for (int i = 0; i < 97; ++i) {
    shuffled.X.row(i) = data.X.row(perm[i]);
    shuffled.y(i) = data.y(perm[i]);
  }
  const Eigen::MatrixXd a =
      sir::estimate_lambda(sir::slice(data, 7)).lambda_hat.mat();
  const Eigen::MatrixXd b =
      sir::estimate_lambda(sir::slice(shuffled, 7)).lambda_hat.mat();
  CHECK(a == b);
}

TEST_CASE("uncentered equals centered plus mean outer product") {
  const ModelSpec spec = ModelSpec::linear_mu(5, 0.4);
  const Dataset data = models::generate(spec, 120, 17);  // 120 = 8 * 15
  const sir::SlicedView view = sir::slice(data, 8);
  const Eigen::MatrixXd unc = sir::estimate_lambda(view).lambda_hat.mat();
  const Eigen::MatrixXd cen =
      sir::estimate_lambda(view, true).lambda_hat.mat();
  const Eigen::MatrixXd outer =
      view.overall_mean * view.overall_mean.transpose();
  CHECK((unc - cen - outer).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("sir_subspace on a diagonal estimate") {
  Eigen::MatrixXd lam = Eigen::Vector3d(0.5, 0.01, 0.0).asDiagonal();
  const sir::CondCovEstimate est{linalg::SymMatrix(lam), 5, 100, false};
  const sir::SubspaceEstimate fit = sir::sir_subspace(est, 1);
  CHECK(fit.basis.mat()(0, 0) == doctest::Approx(1.0));
  CHECK(fit.eigenvalues(0) == doctest::Approx(0.5));
}

TEST_CASE("sir_subspace enforces the rank bound") {
  Eigen::MatrixXd lam = Eigen::Matrix3d::Identity();
  const sir::CondCovEstimate uncentered{linalg::SymMatrix(lam), 2, 100, false};
  CHECK_THROWS_AS(sir::sir_subspace(uncentered, 3), Error);
  CHECK_NOTHROW(sir::sir_subspace(uncentered, 2));
  const sir::CondCovEstimate centered{linalg::SymMatrix(lam), 2, 100, true};
  CHECK_THROWS_AS(sir::sir_subspace(centered, 2), Error);
}

TEST_CASE("planted single index is recovered") {
  const ModelSpec spec = ModelSpec::linear_mu(10, 0.5);
  const Dataset data = models::generate(spec, 10000, 31);
  const auto est = sir::estimate_lambda(sir::slice(data, 10));
  const sir::SubspaceEstimate fit = sir::sir_subspace(est, 1);
  CHECK(linalg::projection_loss(fit.basis, spec.true_v()) < 0.05);
}

TEST_CASE("top eigenvalue approaches the fixed-H limit") {
  // Monte Carlo check of the slice-mean oracle at modest n.
  const double mu = 0.5;
  const ModelSpec spec = ModelSpec::linear_mu(8, mu);
  const int reps = 12;
  double acc = 0.0;
  for (int r = 0; r < reps; ++r) {
    const Dataset data = models::generate(spec, 20000, 1000 + r);
    acc += sir::top_eigenvalues(
        sir::estimate_lambda(sir::slice(data, 5)), 1)(0);
  }
  CHECK(std::abs(acc / reps - oracle::sir_eigenvalue_limit(mu, 5)) <= 0.01);
}

TEST_CASE("sliced stability diagnostic decays in H") {
  const ModelSpec spec = ModelSpec::linear_mu(5, 0.5);
  const Dataset data = models::generate(spec, 20000, 12);
  const auto diag = sir::sliced_stability_diagnostic(data, spec, {4, 64});
  REQUIRE(diag.ratio[0].has_value());
  REQUIRE(diag.ratio[1].has_value());
  CHECK(*diag.ratio[0] >= 0.0);
  CHECK(*diag.ratio[1] >= 0.0);
  CHECK(*diag.ratio[1] < *diag.ratio[0]);
}

TEST_CASE("sliced stability diagnostic is absent for pure noise") {
  const linalg::OrthoMatrix v =
      linalg::OrthoMatrix(Eigen::MatrixXd::Identity(5, 1));
  const ModelSpec spec =
      ModelSpec::custom(v, [](const Eigen::VectorXd&) { return 0.0; });
  const Dataset data = models::generate(spec, 20000, 13);
  const auto diag = sir::sliced_stability_diagnostic(data, spec, {4, 16});
  CHECK(!diag.ratio[0].has_value());
  CHECK(!diag.ratio[1].has_value());
}
