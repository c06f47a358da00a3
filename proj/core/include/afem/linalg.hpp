#pragma once

#include <span>
#include <vector>

#include "afem/error.hpp"

namespace afem {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Square sparse matrix in compressed sparse row form.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Duplicate (row, col) entries accumulate in insertion order, so assembly
  // output is bitwise reproducible.
  static SparseMatrix from_triplets(int n, std::vector<Triplet> entries);

  int size() const { return n_; }
  std::size_t nnz() const { return col_.size(); }

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  std::vector<double> diagonal() const;

  // Principal submatrix on the given (strictly increasing) index set.
  SparseMatrix extract(const std::vector<int>& keep) const;

  // max |a_ij - a_ji| over all entries.
  double max_asymmetry() const;

  // Row access.
  std::span<const int> row_cols(int r) const;
  std::span<const double> row_values(int r) const;

  const std::vector<double>& values() const { return val_; }

 private:
  int n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

struct SolveOptions {
  double tol = 1e-10;        // relative residual target
  long max_iterations = 0;   // 0 means 10 * n
  bool force_iterative = false;
  int dense_threshold = 500;
};

struct SolveStats {
  long iterations = 0;
  double rel_residual = 0.0;
  bool used_dense = false;
};

// SPD solve: dense Cholesky below opts.dense_threshold unknowns, otherwise
// conjugate gradients with a diagonal preconditioner. Throws SolveError on
// breakdown or non-convergence, carrying the residual reached.
std::vector<double> solve_sparse(const SparseMatrix& A,
                                 std::span<const double> b,
                                 const SolveOptions& opts = {},
                                 SolveStats* stats = nullptr);

}  // namespace afem
