#include "tpsfem/system.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "tpsfem/errors.hpp"

namespace tpsfem {

bool collinear(const std::vector<Point2>& points) {
  Eigen::MatrixXd design(points.size(), 3);
  for (size_t i = 0; i < points.size(); ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = points[i].x;
    design(i, 2) = points[i].y;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
  const auto& sv = svd.singularValues();
  return sv(2) <= 1e-10 * sv(0);
}

void validate_samples(const SampleSet& samples, const Rect& domain) {
  if (samples.size() < 3) {
    throw InvalidArgument("need at least three samples");
  }
  if (samples.values.size() != samples.points.size()) {
    throw InvalidArgument("sample points and values must have equal length");
  }
  if (samples.has_truth() && samples.truth.size() != samples.points.size()) {
    throw InvalidArgument("sample truth must be empty or match the number of points");
  }
  const double tol = 1e-12 * std::max(domain.width(), domain.height());
  for (int i = 0; i < samples.size(); ++i) {
    const Point2 p = samples.points[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(samples.values[i])) {
      throw InvalidArgument("sample " + std::to_string(i) + " is not finite");
    }
    if (!domain.contains(p, tol)) {
      throw PointOutsideDomain("sample " + std::to_string(i) + " is outside the domain");
    }
  }
  if (collinear(samples.points)) {
    throw CollinearSamples("sample points lie on a single line");
  }
}

DataOperator::DataOperator(int rows, int cols, std::vector<long long> row_ptr,
                           std::vector<int> col, std::vector<double> val)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_(std::move(col)),
      val_(std::move(val)) {}

std::vector<double> DataOperator::apply(const std::vector<double>& c) const {
  std::vector<double> out(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (long long k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) sum += val_[k] * c[col_[k]];
    out[i] = sum;
  }
  return out;
}

std::vector<double> DataOperator::apply_transpose(const std::vector<double>& r,
                                                  double scale) const {
  std::vector<double> out(cols_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double ri = scale * r[i];
    for (long long k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out[col_[k]] += ri * val_[k];
  }
  return out;
}

SparseSymmetric DataOperator::gram(double scale) const {
  std::vector<Triplet> triplets;
  long long count = 0;
  for (int i = 0; i < rows_; ++i) {
    const long long len = row_ptr_[i + 1] - row_ptr_[i];
    count += len * len;
  }
  triplets.reserve(count);
  for (int i = 0; i < rows_; ++i) {
    for (long long a = row_ptr_[i]; a < row_ptr_[i + 1]; ++a) {
      for (long long b = row_ptr_[i]; b < row_ptr_[i + 1]; ++b) {
        triplets.push_back(Triplet{col_[a], col_[b], scale * val_[a] * val_[b]});
      }
    }
  }
  return SparseSymmetric::from_triplets(cols_, std::move(triplets));
}

SparseSymmetric assemble_stiffness(const MorleySpace& space) {
  const Mesh2D& mesh = space.mesh();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<size_t>(mesh.triangle_count()) * 36);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementBasis& eb = space.element_basis(t);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        const SymMat2& hi = eb.hessians[i];
        const SymMat2& hj = eb.hessians[j];
        const double value =
            eb.area * (hi.xx * hj.xx + 2.0 * hi.xy * hj.xy + hi.yy * hj.yy);
        triplets.push_back(Triplet{eb.dofs[i], eb.dofs[j], value});
      }
    }
  }
  return SparseSymmetric::from_triplets(space.dof_count(), std::move(triplets));
}

DataOperator assemble_data(const MorleySpace& space, const SampleSet& samples) {
  std::vector<long long> row_ptr(samples.size() + 1, 0);
  std::vector<int> cols;
  std::vector<double> vals;
  cols.reserve(samples.size() * 6);
  vals.reserve(samples.size() * 6);

  std::vector<std::pair<int, double>> row;
  for (int i = 0; i < samples.size(); ++i) {
    const auto hits = space.mesh().locate(samples.points[i]);
    const double weight = 1.0 / static_cast<double>(hits.size());
    row.clear();
    for (const LocateHit& hit : hits) {
      const auto values = space.basis_values(hit.tri, samples.points[i]);
      const auto& dofs = space.element_basis(hit.tri).dofs;
      for (int k = 0; k < 6; ++k) row.emplace_back(dofs[k], weight * values[k]);
    }
    std::sort(row.begin(), row.end());
    for (size_t k = 0; k < row.size(); ++k) {
      if (!cols.empty() && static_cast<long long>(cols.size()) > row_ptr[i] &&
          cols.back() == row[k].first) {
        vals.back() += row[k].second;
      } else {
        cols.push_back(row[k].first);
        vals.push_back(row[k].second);
      }
    }
    row_ptr[i + 1] = static_cast<long long>(cols.size());
  }
  return DataOperator(samples.size(), space.dof_count(), std::move(row_ptr),
                      std::move(cols), std::move(vals));
}

FitProblem build_fit_problem(std::shared_ptr<const MorleySpace> space,
                             const SampleSet& samples) {
  validate_samples(samples, space->mesh().domain());
  FitProblem problem{space, assemble_stiffness(*space), assemble_data(*space, samples)};
  return problem;
}

namespace {

// Least-squares affine fit of the data, interpolated into the space. An
// exact representation of the affine part of the solution, so it serves as
// the starting guess.
std::vector<double> affine_start(const MorleySpace& space, const SampleSet& samples) {
  Eigen::Matrix3d gram = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (int i = 0; i < samples.size(); ++i) {
    const Eigen::Vector3d row(1.0, samples.points[i].x, samples.points[i].y);
    gram += row * row.transpose();
    rhs += samples.values[i] * row;
  }
  const Eigen::Vector3d theta = gram.ldlt().solve(rhs);

  const Mesh2D& mesh = space.mesh();
  std::vector<double> c(space.dof_count(), 0.0);
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const Point2 p = mesh.vertices()[v];
    c[space.vertex_dof(v)] = theta(0) + theta(1) * p.x + theta(2) * p.y;
  }
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const Vec2 n = mesh.edge_normal(e);
    c[space.edge_dof(e)] = theta(1) * n.x + theta(2) * n.y;
  }
  return c;
}

}  // namespace

FitResult solve_fit(const FitProblem& problem, const SampleSet& samples, double lambda,
                    const SolverOptions& options) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("smoothing parameter must be positive and finite");
  }
  const int n = samples.size();
  const int dofs = problem.space->dof_count();

  const SparseSymmetric system =
      SparseSymmetric::combine(lambda, problem.stiffness, 1.0, problem.data.gram(1.0 / n));
  const std::vector<double> rhs = problem.data.apply_transpose(samples.values, 1.0 / n);

  std::vector<double> c = affine_start(*problem.space, samples);
  const long long max_iterations = options.max_iterations > 0
                                       ? options.max_iterations
                                       : static_cast<long long>(options.max_iterations_factor) * dofs;
  const PcgResult pcg = pcg_jacobi(system, rhs, c, options.tolerance, max_iterations);
  if (!pcg.converged) {
    throw NoConvergence("conjugate gradient solver hit the iteration cap (" +
                        std::to_string(max_iterations) + ") at relative residual " +
                        std::to_string(pcg.rel_residual));
  }

  FitResult result;
  result.lambda = lambda;
  result.iterations = pcg.iterations;
  result.rel_residual = pcg.rel_residual;

  const std::vector<double> fitted = problem.data.apply(c);
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = fitted[i] - samples.values[i];
    ss += d * d;
  }
  result.residual_n = std::sqrt(ss / n);
  result.fit = MorleyFunction{problem.space, std::move(c)};
  // Element-wise evaluation lets the Hessian sums cancel before squaring,
  // which keeps the seminorm of near-affine fits at the rounding floor.
  result.seminorm_2h = h2_seminorm(result.fit);
  result.energy = ss / n + lambda * result.seminorm_2h * result.seminorm_2h;
  return result;
}

FitResult solve_fit(std::shared_ptr<const MorleySpace> space, const SampleSet& samples,
                    double lambda, const SolverOptions& options) {
  const FitProblem problem = build_fit_problem(std::move(space), samples);
  return solve_fit(problem, samples, lambda, options);
}

}  // namespace tpsfem
