#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

namespace sdr::linalg {

// Dense symmetric matrix. Inputs are symmetrized as (M + M^T)/2 on
// construction so downstream eigen-solves never see floating-point asymmetry
// from accumulation order.
class SymMatrix {
 public:
  explicit SymMatrix(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  // Principal submatrix on the (sorted, 0-based) index set S.
  SymMatrix restricted(const std::vector<int>& S) const;

 private:
  Eigen::MatrixXd m_;
};

// Column-orthonormal p x d matrix: V^T V = I_d to 1e-10 in max-abs entry,
// enforced on construction.
class OrthoMatrix {
 public:
  explicit OrthoMatrix(const Eigen::MatrixXd& v);

  int rows() const { return static_cast<int>(v_.rows()); }
  int cols() const { return static_cast<int>(v_.cols()); }
  const Eigen::MatrixXd& mat() const { return v_; }

 private:
  Eigen::MatrixXd v_;
};

// Top-d eigenpairs of a symmetric matrix, eigenvalues sorted descending.
// Column signs are fixed so the entry of largest absolute value in each
// eigenvector is nonnegative (ties broken by lowest index); repeated
// eigenvalues keep the solver's basis in stable descending order.
std::pair<Eigen::VectorXd, OrthoMatrix> sym_eig_topd(const SymMatrix& m, int d);

// ||A A^T - B B^T||_F^2 computed via the identity 2(d - ||A^T B||_F^2).
double projection_loss(const OrthoMatrix& a, const OrthoMatrix& b);

// Orthonormal basis of col(M) via Householder QR with nonnegative R diagonal.
// Throws a rank error when the smallest singular value is below 1e-10 times
// the largest.
OrthoMatrix orthonormalize(const Eigen::MatrixXd& m);

// Haar-distributed p x d frame: orthonormalization of a p x d matrix of
// independent standard normals, deterministic given the seed.
OrthoMatrix random_orthogonal(int p, int d, std::uint64_t seed);

}  // namespace sdr::linalg
