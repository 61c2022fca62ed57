#include "tpsfem/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "tpsfem/errors.hpp"

namespace tpsfem {

SparseSymmetric SparseSymmetric::from_triplets(int n, std::vector<Triplet> entries) {
  if (n < 0) throw InvalidArgument("matrix dimension must be nonnegative");
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw InvalidArgument("triplet index out of range");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseSymmetric m;
  m.n_ = n;
  m.row_ptr_.assign(n + 1, 0);
  m.col_.reserve(entries.size());
  m.val_.reserve(entries.size());
  size_t i = 0;
  for (int row = 0; row < n; ++row) {
    while (i < entries.size() && entries[i].row == row) {
      const int col = entries[i].col;
      double sum = 0.0;
      for (; i < entries.size() && entries[i].row == row && entries[i].col == col; ++i) {
        sum += entries[i].value;
      }
      m.col_.push_back(col);
      m.val_.push_back(sum);
    }
    m.row_ptr_[row + 1] = static_cast<long long>(m.col_.size());
  }
  return m;
}

SparseSymmetric SparseSymmetric::combine(double a, const SparseSymmetric& A, double b,
                                         const SparseSymmetric& B) {
  if (A.n_ != B.n_) throw InvalidArgument("combined matrices must have equal dimensions");
  SparseSymmetric m;
  m.n_ = A.n_;
  m.row_ptr_.assign(m.n_ + 1, 0);
  m.col_.reserve(A.col_.size() + B.col_.size());
  m.val_.reserve(A.col_.size() + B.col_.size());
  for (int row = 0; row < m.n_; ++row) {
    long long ia = A.row_ptr_[row], ib = B.row_ptr_[row];
    const long long ea = A.row_ptr_[row + 1], eb = B.row_ptr_[row + 1];
    while (ia < ea || ib < eb) {
      const int ca = ia < ea ? A.col_[ia] : m.n_;
      const int cb = ib < eb ? B.col_[ib] : m.n_;
      if (ca < cb) {
        m.col_.push_back(ca);
        m.val_.push_back(a * A.val_[ia++]);
      } else if (cb < ca) {
        m.col_.push_back(cb);
        m.val_.push_back(b * B.val_[ib++]);
      } else {
        m.col_.push_back(ca);
        m.val_.push_back(a * A.val_[ia++] + b * B.val_[ib++]);
      }
    }
    m.row_ptr_[row + 1] = static_cast<long long>(m.col_.size());
  }
  return m;
}

void SparseSymmetric::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  y.assign(n_, 0.0);
  for (int row = 0; row < n_; ++row) {
    double sum = 0.0;
    for (long long i = row_ptr_[row]; i < row_ptr_[row + 1]; ++i) {
      sum += val_[i] * x[col_[i]];
    }
    y[row] = sum;
  }
}

std::vector<double> SparseSymmetric::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (int row = 0; row < n_; ++row) {
    for (long long i = row_ptr_[row]; i < row_ptr_[row + 1]; ++i) {
      if (col_[i] == row) d[row] = val_[i];
    }
  }
  return d;
}

double SparseSymmetric::quadratic_form(const std::vector<double>& x) const {
  double sum = 0.0;
  for (int row = 0; row < n_; ++row) {
    double rowsum = 0.0;
    for (long long i = row_ptr_[row]; i < row_ptr_[row + 1]; ++i) {
      rowsum += val_[i] * x[col_[i]];
    }
    sum += x[row] * rowsum;
  }
  return sum;
}

namespace {

double norm2(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

}  // namespace

PcgResult pcg_jacobi(const SparseSymmetric& A, const std::vector<double>& b,
                     std::vector<double>& x, double tolerance, long long max_iterations) {
  const int n = A.size();
  if (static_cast<int>(b.size()) != n || static_cast<int>(x.size()) != n) {
    throw InvalidArgument("vector length does not match matrix dimension");
  }

  std::vector<double> inv_diag = A.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0.0)) throw IllConditionedSystem("matrix diagonal is not positive");
    d = 1.0 / d;
  }

  const double b_norm = norm2(b);
  if (b_norm == 0.0) {
    x.assign(n, 0.0);
    return PcgResult{0, 0.0, true};
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  A.multiply(x, q);
  for (int i = 0; i < n; ++i) r[i] = b[i] - q[i];
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = 0.0;
  for (int i = 0; i < n; ++i) rz += r[i] * z[i];

  PcgResult result;
  result.rel_residual = norm2(r) / b_norm;
  if (result.rel_residual <= tolerance) {
    result.converged = true;
    return result;
  }

  for (long long it = 1; it <= max_iterations; ++it) {
    A.multiply(p, q);
    double pq = 0.0;
    for (int i = 0; i < n; ++i) pq += p[i] * q[i];
    if (!(pq > 0.0)) throw IllConditionedSystem("matrix is not positive definite");
    const double alpha = rz / pq;
    for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
    for (int i = 0; i < n; ++i) r[i] -= alpha * q[i];

    result.iterations = static_cast<int>(it);
    result.rel_residual = norm2(r) / b_norm;
    if (result.rel_residual <= tolerance) {
      result.converged = true;
      return result;
    }

    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    double rz_next = 0.0;
    for (int i = 0; i < n; ++i) rz_next += r[i] * z[i];
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return result;
}

}  // namespace tpsfem
