#pragma once

#include <vector>

namespace tpsfem {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Sparse symmetric matrix in CSR form with both triangles stored, so a
/// matrix-vector product is a plain row sweep. Built from triplets; duplicate
/// entries are summed. Callers supply a symmetric entry set.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  static SparseSymmetric from_triplets(int n, std::vector<Triplet> entries);

  /// a*A + b*B entrywise; patterns may differ.
  static SparseSymmetric combine(double a, const SparseSymmetric& A, double b,
                                 const SparseSymmetric& B);

  int size() const { return n_; }
  long long nonzeros() const { return static_cast<long long>(col_.size()); }

  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
  std::vector<double> diagonal() const;
  double quadratic_form(const std::vector<double>& x) const;

  const std::vector<long long>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& cols() const { return col_; }
  const std::vector<double>& values() const { return val_; }

 private:
  int n_ = 0;
  std::vector<long long> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

struct PcgResult {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

/// Conjugate gradients with diagonal (Jacobi) preconditioning. `x` holds the
/// starting guess on entry and the solution on exit. Convergence is measured
/// by the 2-norm residual relative to the right-hand side.
PcgResult pcg_jacobi(const SparseSymmetric& A, const std::vector<double>& b,
                     std::vector<double>& x, double tolerance, long long max_iterations);

}  // namespace tpsfem
