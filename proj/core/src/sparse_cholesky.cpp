#include "gffexc/sparse_cholesky.hpp"

#include <algorithm>
#include <stdexcept>

namespace gffexc {

SparseCholesky::SparseCholesky(Matrix matrix)
    : matrix_(std::move(matrix)), llt_(std::make_unique<Solver>()) {
  matrix_.makeCompressed();
  llt_->compute(matrix_);
  if (llt_->info() != Eigen::Success) {
    throw std::runtime_error("factorization failed");
  }
}

SparseCholesky::~SparseCholesky() = default;

Eigen::VectorXd SparseCholesky::solve(const Eigen::VectorXd& rhs) const {
  return llt_->solve(rhs);
}

Eigen::VectorXd SparseCholesky::correlate(const Eigen::VectorXd& normals) const {
  Eigen::VectorXd y = llt_->matrixU().solve(normals);
  return llt_->permutationPinv() * y;
}

Eigen::Index SparseCholesky::factor_nonzeros() const {
  return llt_->matrixL().nestedExpression().nonZeros();
}

const std::vector<double>& SparseCholesky::inverse_diagonal() const {
  std::call_once(diagonal_once_, [this] {
    const auto& factor = llt_->matrixL().nestedExpression();
    const Eigen::Index n = factor.cols();
    const auto* outer = factor.outerIndexPtr();
    const auto* inner = factor.innerIndexPtr();
    const double* value = factor.valuePtr();

    // z[p] holds (L L^T)^{-1} at the position of L's p-th stored entry.
    std::vector<double> z(static_cast<std::size_t>(factor.nonZeros()), 0.0);

    auto lookup = [&](int row, int col) -> double {
      if (row < col) std::swap(row, col);
      const int* first = inner + outer[col];
      const int* last = inner + outer[col + 1];
      const int* hit = std::lower_bound(first, last, row);
      // The filled pattern is chordal: rows sharing a column form a clique.
      return z[static_cast<std::size_t>(hit - inner)];
    };

    for (Eigen::Index j = n - 1; j >= 0; --j) {
      const int begin = outer[j];
      const int end = outer[j + 1];
      const double diag = value[begin];
      for (int p = end - 1; p > begin; --p) {
        const int row = inner[p];
        double acc = 0.0;
        for (int q = begin + 1; q < end; ++q) {
          acc += value[q] * lookup(row, inner[q]);
        }
        z[static_cast<std::size_t>(p)] = -acc / diag;
      }
      double acc = 0.0;
      for (int q = begin + 1; q < end; ++q) {
        acc += value[q] * z[static_cast<std::size_t>(q)];
      }
      z[static_cast<std::size_t>(begin)] = (1.0 / diag - acc) / diag;
    }

    Eigen::VectorXd permuted(n);
    for (Eigen::Index k = 0; k < n; ++k) permuted[k] = z[static_cast<std::size_t>(outer[k])];
    Eigen::VectorXd original = llt_->permutationPinv() * permuted;
    diagonal_.assign(original.data(), original.data() + n);
  });
  return diagonal_;
}

}  // namespace gffexc
