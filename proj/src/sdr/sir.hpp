#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "sdr/linalg.hpp"
#include "sdr/models.hpp"

namespace sdr::sir {

// Order-statistic slicing of a dataset: samples sorted by y (stable, ties by
// original index), the first n mod H slices take ceil(n/H) samples and the
// rest floor(n/H).
struct SlicedView {
  int H = 0;
  std::vector<int> slice_assignment;       // per sample, slice index in [0, H)
  Eigen::MatrixXd slice_means;             // H x p
  Eigen::VectorXd overall_mean;            // p
  std::vector<int> slice_sizes;            // H
};

SlicedView slice(const models::Dataset& data, int H);

// The slice-mean covariance estimate (1/H) sum_h xbar_h xbar_h^T, optionally
// with the overall mean subtracted from each slice mean first.
struct CondCovEstimate {
  linalg::SymMatrix lambda_hat;
  int H;
  int n;
  bool centered;
};

CondCovEstimate estimate_lambda(const SlicedView& view, bool centered = false);

struct SubspaceEstimate {
  linalg::OrthoMatrix basis;        // p x d
  Eigen::VectorXd eigenvalues;      // d, descending
  std::vector<int> support;         // nonempty only for support-restricted fits
};

// Top-d eigenvectors of lambda_hat. d must not exceed the attainable rank
// (H slices, H-1 when centered).
SubspaceEstimate sir_subspace(const CondCovEstimate& est, int d);

// The d largest eigenvalues of lambda_hat, descending.
Eigen::VectorXd top_eigenvalues(const CondCovEstimate& est, int d);

// Qualitative slicing diagnostic: for each H, the within-slice share of the
// variance of beta^T m(Y), estimated from within-slice variances of beta^T x
// with the noise component removed via a fine reference slicing. Reported as
// the max over the columns of the true loading matrix; absent when the signal
// variance is indistinguishable from zero.
struct StabilityDiagnostic {
  std::vector<int> H;
  std::vector<std::optional<double>> ratio;
};

StabilityDiagnostic sliced_stability_diagnostic(const models::Dataset& data,
                                                const models::ModelSpec& spec,
                                                const std::vector<int>& H_list);

}  // namespace sdr::sir
