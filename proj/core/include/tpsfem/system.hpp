#pragma once

#include <memory>
#include <vector>

#include "tpsfem/geometry.hpp"
#include "tpsfem/morley.hpp"
#include "tpsfem/sparse.hpp"

namespace tpsfem {

/// Scattered observations (x_i, y_i), optionally with the noiseless truth
/// recorded alongside. Duplicate points are allowed and count with their
/// multiplicity in all empirical norms.
struct SampleSet {
  std::vector<Point2> points;
  std::vector<double> values;
  std::vector<double> truth;

  int size() const { return static_cast<int>(points.size()); }
  bool has_truth() const { return !truth.empty(); }
};

/// Throws unless the sample set is usable for fitting: at least three finite
/// in-domain points, finite values, and points not all on one line.
void validate_samples(const SampleSet& samples, const Rect& domain);

/// True when the points lie on a single line (smallest singular value of the
/// affine design matrix below 1e-10 times the largest).
bool collinear(const std::vector<Point2>& points);

/// Sparse evaluation operator: row i holds the averaged shape function
/// values that produce the pointwise value of a discrete function at x_i.
class DataOperator {
 public:
  DataOperator(int rows, int cols, std::vector<long long> row_ptr, std::vector<int> col,
               std::vector<double> val);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  /// B * c: pointwise values of the function with coefficients c.
  std::vector<double> apply(const std::vector<double>& c) const;
  /// scale * B^T * r.
  std::vector<double> apply_transpose(const std::vector<double>& r, double scale) const;
  /// scale * B^T B as a symmetric sparse matrix.
  SparseSymmetric gram(double scale) const;

  long long row_begin(int i) const { return row_ptr_[i]; }
  long long row_end(int i) const { return row_ptr_[i + 1]; }
  int entry_col(long long k) const { return col_[k]; }
  double entry_value(long long k) const { return val_[k]; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<long long> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

/// Bending stiffness: S_ab = sum_K |K| (Hessian(phi_a) : Hessian(phi_b)) with
/// the mixed second derivatives counted twice. Its kernel is spanned by the
/// affine functions.
SparseSymmetric assemble_stiffness(const MorleySpace& space);

/// Evaluation operator for the sample points.
DataOperator assemble_data(const MorleySpace& space, const SampleSet& samples);

struct SolverOptions {
  double tolerance = 1e-10;
  /// Iteration cap as a multiple of the number of unknowns.
  int max_iterations_factor = 20;
  /// Explicit iteration cap; 0 means use the factor.
  long long max_iterations = 0;
};

struct FitResult {
  MorleyFunction fit;
  double lambda = 0.0;
  double residual_n = 0.0;   // empirical distance between fit and data
  double seminorm_2h = 0.0;  // broken H2 seminorm of the fit
  double energy = 0.0;       // residual_n^2 + lambda * seminorm_2h^2
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Stiffness and data operator assembled once for repeated solves against
/// the same space and samples.
struct FitProblem {
  std::shared_ptr<const MorleySpace> space;
  SparseSymmetric stiffness;
  DataOperator data;
};

FitProblem build_fit_problem(std::shared_ptr<const MorleySpace> space,
                             const SampleSet& samples);

/// Minimizes ||u - y||_n^2 + lambda |u|_{2,h}^2 over the discrete space by
/// conjugate gradients on the normal equations
/// (lambda S + n^-1 B^T B) c = n^-1 B^T y.
FitResult solve_fit(const FitProblem& problem, const SampleSet& samples, double lambda,
                    const SolverOptions& options = {});

FitResult solve_fit(std::shared_ptr<const MorleySpace> space, const SampleSet& samples,
                    double lambda, const SolverOptions& options = {});

}  // namespace tpsfem
