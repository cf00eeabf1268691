#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace conceptsearch {

// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y = A x, with x of length cols and y of length rows (or the transpose).
using MatVec = std::function<void(std::span<const double> x, std::span<double> y)>;

struct SvdResult {
  // left[i] is the i-th left singular vector (length rows), right[i] the
  // i-th right singular vector (length cols).
  std::vector<std::vector<double>> left;
  std::vector<double> singular_values;  // nonincreasing
  std::vector<std::vector<double>> right;
};

/// Truncated SVD of an implicit rows x cols operator.
///
/// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization,
/// followed by a one-sided Jacobi SVD of the small bidiagonal factor. When
/// `steps` reaches min(rows, cols) the decomposition is complete and exact to
/// rounding; fewer steps give Ritz approximations of the leading triplets.
/// Returns the leading `rank` triplets (rank clamped to min(rows, cols)).
SvdResult lanczos_svd(std::size_t rows, std::size_t cols, const MatVec& apply,
                      const MatVec& apply_transpose, std::size_t rank, std::size_t steps);

// Convenience wrapper running to full depth on a dense matrix.
SvdResult svd(const DenseMatrix& a, std::size_t rank);

// One-sided Jacobi SVD of a small dense matrix; all min(rows, cols) triplets.
SvdResult jacobi_svd(const DenseMatrix& a);

}  // namespace conceptsearch
