#include "afem/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace afem {

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw Error("SparseMatrix: triplet index out of range");
    }
  }
  // Stable sort keeps the insertion order of duplicates, so the summation
  // order (and therefore the result) is reproducible bit for bit.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Triplet& a, const Triplet& b) {
                     return a.row != b.row ? a.row < b.row : a.col < b.col;
                   });

  SparseMatrix m;
  m.n_ = n;
  m.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  m.col_.reserve(entries.size());
  m.val_.reserve(entries.size());

  std::size_t k = 0;
  for (int r = 0; r < n; ++r) {
    while (k < entries.size() && entries[k].row == r) {
      const int c = entries[k].col;
      double sum = entries[k].value;
      ++k;
      while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
        sum += entries[k].value;
        ++k;
      }
      m.col_.push_back(c);
      m.val_.push_back(sum);
    }
    m.row_ptr_[static_cast<std::size_t>(r) + 1] = m.col_.size();
  }
  return m;
}

void SparseMatrix::multiply(std::span<const double> x,
                            std::span<double> y) const {
  for (int r = 0; r < n_; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      acc += val_[k] * x[col_[k]];
    }
    y[r] = acc;
  }
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

std::vector<double> SparseMatrix::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (int r = 0; r < n_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_[k] == r) d[r] += val_[k];
    }
  }
  return d;
}

SparseMatrix SparseMatrix::extract(const std::vector<int>& keep) const {
  std::vector<int> where(n_, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) where[keep[i]] = static_cast<int>(i);

  SparseMatrix m;
  m.n_ = static_cast<int>(keep.size());
  m.row_ptr_.assign(keep.size() + 1, 0);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const int r = keep[i];
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int c = where[col_[k]];
      if (c >= 0) {
        m.col_.push_back(c);
        m.val_.push_back(val_[k]);
      }
    }
    m.row_ptr_[i + 1] = m.col_.size();
  }
  return m;
}

double SparseMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int r = 0; r < n_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int c = col_[k];
      // Find a_cr.
      double mirror = 0.0;
      for (std::size_t j = row_ptr_[c]; j < row_ptr_[c + 1]; ++j) {
        if (col_[j] == r) {
          mirror = val_[j];
          break;
        }
      }
      worst = std::max(worst, std::abs(val_[k] - mirror));
    }
  }
  return worst;
}

std::span<const int> SparseMatrix::row_cols(int r) const {
  return {col_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
}

std::span<const double> SparseMatrix::row_values(int r) const {
  return {val_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> dense_cholesky_solve(const SparseMatrix& A,
                                         std::span<const double> b) {
  const int n = A.size();
  std::vector<double> full(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) {
    const auto cols = A.row_cols(r);
    const auto vals = A.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      full[static_cast<std::size_t>(r) * n + cols[k]] = vals[k];
    }
  }
  double scale = 0.0;
  for (int j = 0; j < n; ++j) {
    scale = std::max(scale, std::abs(full[static_cast<std::size_t>(j) * n + j]));
  }
  // In-place LL^T. Pivots are measured against the diagonal scale so a
  // singular matrix fails instead of factoring through rounding noise.
  for (int j = 0; j < n; ++j) {
    double d = full[static_cast<std::size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      const double l = full[static_cast<std::size_t>(j) * n + k];
      d -= l * l;
    }
    if (!(d > 1e-14 * scale)) {
      throw SolveError("dense Cholesky: matrix not positive definite", 0.0);
    }
    const double dj = std::sqrt(d);
    full[static_cast<std::size_t>(j) * n + j] = dj;
    for (int i = j + 1; i < n; ++i) {
      double s = full[static_cast<std::size_t>(i) * n + j];
      for (int k = 0; k < j; ++k) {
        s -= full[static_cast<std::size_t>(i) * n + k] *
             full[static_cast<std::size_t>(j) * n + k];
      }
      full[static_cast<std::size_t>(i) * n + j] = s / dj;
    }
  }
  // Forward/backward substitution.
  std::vector<double> x(b.begin(), b.end());
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= full[static_cast<std::size_t>(i) * n + k] * x[k];
    x[i] = s / full[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= full[static_cast<std::size_t>(k) * n + i] * x[k];
    x[i] = s / full[static_cast<std::size_t>(i) * n + i];
  }
  return x;
}

std::vector<double> pcg(const SparseMatrix& A, std::span<const double> b,
                        double tol, long max_iterations, SolveStats* stats) {
  const int n = A.size();
  std::vector<double> x(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    if (stats) {
      stats->iterations = 0;
      stats->rel_residual = 0.0;
    }
    return x;
  }

  std::vector<double> diag = A.diagonal();
  for (double& d : diag) {
    if (d <= 0.0) {
      throw SolveError("pcg: non-positive diagonal entry", 1.0);
    }
    d = 1.0 / d;
  }

  std::vector<double> r(b.begin(), b.end());  // x0 = 0
  std::vector<double> z(n), p(n), q(n);
  for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
  p = z;
  double rz = std::inner_product(r.begin(), r.end(), z.begin(), 0.0);

  long it = 0;
  double rel = norm2(r) / bnorm;
  while (rel > tol && it < max_iterations) {
    ++it;
    A.multiply(p, q);
    const double pq = std::inner_product(p.begin(), p.end(), q.begin(), 0.0);
    if (!(pq > 0.0)) {
      throw SolveError("pcg: breakdown (matrix not SPD?)", rel);
    }
    const double alpha = rz / pq;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rel = norm2(r) / bnorm;
    if (rel <= tol) break;
    for (int i = 0; i < n; ++i) z[i] = diag[i] * r[i];
    const double rz_new =
        std::inner_product(r.begin(), r.end(), z.begin(), 0.0);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  if (stats) {
    stats->iterations = it;
    stats->rel_residual = rel;
  }
  if (rel > tol) {
    throw SolveError("pcg: no convergence within " +
                         std::to_string(max_iterations) + " iterations",
                     rel);
  }
  return x;
}

}  // namespace

std::vector<double> solve_sparse(const SparseMatrix& A,
                                 std::span<const double> b,
                                 const SolveOptions& opts, SolveStats* stats) {
  if (A.size() != static_cast<int>(b.size())) {
    throw Error("solve_sparse: dimension mismatch");
  }
  if (A.size() == 0) return {};
  if (!opts.force_iterative && A.size() < opts.dense_threshold) {
    auto x = dense_cholesky_solve(A, b);
    if (stats) {
      stats->used_dense = true;
      stats->iterations = 0;
      std::vector<double> r = A.multiply(x);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
      const double bn = norm2(b);
      stats->rel_residual = bn > 0.0 ? norm2(r) / bn : 0.0;
    }
    return x;
  }
  const long cap = opts.max_iterations > 0 ? opts.max_iterations
                                           : 10L * A.size();
  if (stats) stats->used_dense = false;
  return pcg(A, b, opts.tol, cap, stats);
}

}  // namespace afem
