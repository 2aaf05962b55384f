#include "sdr/sir.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sdr/error.hpp"

namespace sdr::sir {

namespace {

std::vector<int> sorted_order(const Eigen::VectorXd& y) {
  std::vector<int> order(y.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return y(a) < y(b); });
  return order;
}

}  // namespace

SlicedView slice(const models::Dataset& data, int H) {
  const int n = data.n();
  const int p = data.p();
  if (H < 2) fail(ErrorCode::Config, "H must be at least 2");
  if (H > n)
    fail(ErrorCode::Config, "H exceeds sample count (H=" + std::to_string(H) +
                                ", n=" + std::to_string(n) + ")");
  if (!data.X.allFinite() || !data.y.allFinite())
    fail(ErrorCode::InvalidArgument, "dataset has non-finite entries");

  const std::vector<int> order = sorted_order(data.y);

  SlicedView view;
  view.H = H;
  view.slice_assignment.resize(n);
  view.slice_sizes.resize(H);
  view.slice_means = Eigen::MatrixXd::Zero(H, p);
  view.overall_mean = Eigen::VectorXd::Zero(p);

  const int base = n / H;
  const int rem = n % H;
  int pos = 0;
  for (int h = 0; h < H; ++h) {
    const int size = base + (h < rem ? 1 : 0);
    view.slice_sizes[h] = size;
    for (int k = 0; k < size; ++k, ++pos) {
      const int i = order[pos];
      view.slice_assignment[i] = h;
      view.slice_means.row(h) += data.X.row(i);
    }
    view.slice_means.row(h) /= static_cast<double>(size);
    view.overall_mean +=
        view.slice_means.row(h).transpose() * static_cast<double>(size);
  }
  view.overall_mean /= static_cast<double>(n);
  return view;
}

CondCovEstimate estimate_lambda(const SlicedView& view, bool centered) {
  const int H = view.H;
  const int p = static_cast<int>(view.slice_means.cols());
  Eigen::MatrixXd lam = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd m(p);
  for (int h = 0; h < H; ++h) {
    m = view.slice_means.row(h).transpose();
    if (centered) m -= view.overall_mean;
    lam.selfadjointView<Eigen::Lower>().rankUpdate(m, 1.0);
  }
  lam = lam.selfadjointView<Eigen::Lower>();
  lam /= static_cast<double>(H);
  int n = 0;
  for (int size : view.slice_sizes) n += size;
  return CondCovEstimate{linalg::SymMatrix(lam), H, n, centered};
}

SubspaceEstimate sir_subspace(const CondCovEstimate& est, int d) {
  const int p = est.lambda_hat.dim();
  const int rank_bound = std::min(p, est.centered ? est.H - 1 : est.H);
  if (d < 1 || d > rank_bound)
    fail(ErrorCode::Config,
         "d=" + std::to_string(d) + " exceeds the attainable rank " +
             std::to_string(rank_bound) + " (H=" + std::to_string(est.H) +
             (est.centered ? ", centered)" : ")"));
  auto [eigs, v] = linalg::sym_eig_topd(est.lambda_hat, d);
  return SubspaceEstimate{std::move(v), std::move(eigs), {}};
}

Eigen::VectorXd top_eigenvalues(const CondCovEstimate& est, int d) {
  if (d < 1 || d > est.lambda_hat.dim())
    fail(ErrorCode::Dimension, "d must be in [1, p]");
  return linalg::sym_eig_topd(est.lambda_hat, d).first;
}

namespace {

// Mean over slices of the within-slice sample variance of z (unbiased per
// slice); slices of size < 2 contribute zero.
double mean_within_slice_var(const Eigen::VectorXd& z,
                             const std::vector<int>& order, int H) {
  const int n = static_cast<int>(z.size());
  const int base = n / H;
  const int rem = n % H;
  double acc = 0.0;
  int pos = 0;
  for (int h = 0; h < H; ++h) {
    const int size = base + (h < rem ? 1 : 0);
    if (size >= 2) {
      double mean = 0.0;
      for (int k = 0; k < size; ++k) mean += z(order[pos + k]);
      mean /= size;
      double ss = 0.0;
      for (int k = 0; k < size; ++k) {
        const double dlt = z(order[pos + k]) - mean;
        ss += dlt * dlt;
      }
      acc += ss / (size - 1);
    }
    pos += size;
  }
  return acc / H;
}

}  // namespace

StabilityDiagnostic sliced_stability_diagnostic(
    const models::Dataset& data, const models::ModelSpec& spec,
    const std::vector<int>& H_list) {
  const int n = data.n();
  if (spec.p() != data.p())
    fail(ErrorCode::Config, "model and dataset dimensions differ");
  for (int H : H_list)
    if (H < 2 || H > n / 2)
      fail(ErrorCode::Config, "diagnostic H must be in [2, n/2]");

  const std::vector<int> order = sorted_order(data.y);
  const int H_ref = std::max(2, n / 10);  // ~10 samples per reference slice

  StabilityDiagnostic diag;
  diag.H = H_list;
  diag.ratio.assign(H_list.size(), std::nullopt);

  const Eigen::MatrixXd& v = spec.true_v().mat();
  for (int col = 0; col < v.cols(); ++col) {
    Eigen::VectorXd z = data.X * v.col(col);
    const double mean = z.mean();
    const double total_var = (z.array() - mean).square().sum() / (n - 1);
    const double noise = mean_within_slice_var(z, order, H_ref);
    const double signal_var = total_var - noise;
    // Indistinguishable from a flat central curve at this sample size.
    if (signal_var <= 5.0 * std::sqrt(2.0 / n) * total_var) continue;
    for (std::size_t k = 0; k < H_list.size(); ++k) {
      const double within = mean_within_slice_var(z, order, H_list[k]);
      const double ratio = std::max(0.0, within - noise) / signal_var;
      if (!diag.ratio[k] || ratio > *diag.ratio[k]) diag.ratio[k] = ratio;
    }
  }
  return diag;
}

}  // namespace sdr::sir
