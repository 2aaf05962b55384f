#include "sdr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sdr/error.hpp"
#include "sdr/rng.hpp"

namespace sdr::linalg {

SymMatrix::SymMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1)
    fail(ErrorCode::Dimension, "SymMatrix requires a square matrix, got " +
                                   std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()));
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::restricted(const std::vector<int>& S) const {
  const int k = static_cast<int>(S.size());
  Eigen::MatrixXd sub(k, k);
  for (int a = 0; a < k; ++a) {
    if (S[a] < 0 || S[a] >= dim())
      fail(ErrorCode::Dimension, "restriction index out of range: " +
                                     std::to_string(S[a]));
    for (int b = 0; b < k; ++b) sub(a, b) = m_(S[a], S[b]);
  }
  return SymMatrix(sub);
}

OrthoMatrix::OrthoMatrix(const Eigen::MatrixXd& v) : v_(v) {
  if (v.rows() < 1 || v.cols() < 1 || v.cols() > v.rows())
    fail(ErrorCode::Dimension, "OrthoMatrix requires p x d with 1 <= d <= p");
  Eigen::MatrixXd g = v.transpose() * v;
  g.diagonal().array() -= 1.0;
  if (g.cwiseAbs().maxCoeff() > 1e-10)
    fail(ErrorCode::InvalidArgument,
         "columns are not orthonormal (max deviation " +
             std::to_string(g.cwiseAbs().maxCoeff()) + ")");
}

namespace {

// Largest-|entry| sign convention; among tied magnitudes the lowest index
// decides.
void fix_column_signs(Eigen::MatrixXd& v) {
  for (int j = 0; j < v.cols(); ++j) {
    int pivot = 0;
    double best = std::abs(v(0, j));
    for (int i = 1; i < v.rows(); ++i) {
      double a = std::abs(v(i, j));
      if (a > best) {
        best = a;
        pivot = i;
      }
    }
    if (v(pivot, j) < 0.0) v.col(j) = -v.col(j);
  }
}

}  // namespace

std::pair<Eigen::VectorXd, OrthoMatrix> sym_eig_topd(const SymMatrix& m,
                                                     int d) {
  const int p = m.dim();
  if (d < 1 || d > p)
    fail(ErrorCode::Dimension, "requested d=" + std::to_string(d) +
                                   " eigenpairs of a " + std::to_string(p) +
                                   "-dimensional matrix");
  if (!m.mat().allFinite())
    fail(ErrorCode::InvalidArgument, "matrix has non-finite entries");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.mat());
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::InvalidArgument, "eigendecomposition failed to converge");

  // Solver returns ascending order; stable descending re-sort keeps the
  // solver's basis order within degenerate groups.
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });

  Eigen::VectorXd eigs(d);
  Eigen::MatrixXd v(p, d);
  for (int j = 0; j < d; ++j) {
    eigs(j) = solver.eigenvalues()(order[j]);
    v.col(j) = solver.eigenvectors().col(order[j]);
  }
  fix_column_signs(v);
  return {eigs, OrthoMatrix(v)};
}

double projection_loss(const OrthoMatrix& a, const OrthoMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::Dimension,
         "projection_loss requires matching shapes, got " +
             std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
             " vs " + std::to_string(b.rows()) + "x" +
             std::to_string(b.cols()));
  const double cross = (a.mat().transpose() * b.mat()).squaredNorm();
  const double d = static_cast<double>(a.cols());
  return std::clamp(2.0 * (d - cross), 0.0, 2.0 * d);
}

OrthoMatrix orthonormalize(const Eigen::MatrixXd& m) {
  if (m.rows() < 1 || m.cols() < 1 || m.cols() > m.rows())
    fail(ErrorCode::Dimension, "orthonormalize requires p x d with d <= p");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (!(smax > 0.0) || smin < 1e-10 * smax)
    fail(ErrorCode::Rank, "rank-deficient input (sigma_min/sigma_max = " +
                              std::to_string(smax > 0 ? smin / smax : 0.0) +
                              ")");

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() *
                      Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd r =
      qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
  for (int j = 0; j < m.cols(); ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return OrthoMatrix(q);
}

OrthoMatrix random_orthogonal(int p, int d, std::uint64_t seed) {
  if (d < 1 || d > p)
    fail(ErrorCode::Dimension, "random_orthogonal requires 1 <= d <= p");
  rng::Stream stream(rng::derive(seed, {0x6f7274686f676f6eULL}));
  Eigen::MatrixXd g(p, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < p; ++i) g(i, j) = stream.normal();
  return orthonormalize(g);
}

}  // namespace sdr::linalg
