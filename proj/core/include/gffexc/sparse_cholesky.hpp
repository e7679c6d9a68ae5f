#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace gffexc {

/// Sparse symmetric positive definite matrix with its fill-reducing Cholesky
/// factor P A P^T = L L^T.
class SparseCholesky {
 public:
  using Matrix = Eigen::SparseMatrix<double>;

  /// Throws std::runtime_error("factorization failed") if A is not SPD.
  explicit SparseCholesky(Matrix matrix);
  ~SparseCholesky();

  Eigen::Index size() const { return matrix_.rows(); }
  const Matrix& matrix() const { return matrix_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// x = P^T L^{-T} z. If z has i.i.d. standard normal entries then
  /// x is centred Gaussian with covariance A^{-1}.
  Eigen::VectorXd correlate(const Eigen::VectorXd& normals) const;

  /// diag(A^{-1}) via the Takahashi recurrences on the filled pattern of L.
  /// Cost is sum over columns of (column count)^2 log, far below N solves.
  const std::vector<double>& inverse_diagonal() const;

  /// Number of stored entries in L, including the diagonal.
  Eigen::Index factor_nonzeros() const;

 private:
  using Solver = Eigen::SimplicialLLT<Matrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

  Matrix matrix_;
  std::unique_ptr<Solver> llt_;
  mutable std::once_flag diagonal_once_;
  mutable std::vector<double> diagonal_;
};

}  // namespace gffexc
