#include "tpsfem/dense_tps.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "tpsfem/errors.hpp"

namespace tpsfem {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double tps_kernel(double r_squared) {
  if (!(r_squared >= 0.0)) {
    throw InvalidArgument("tps_kernel: squared distance must be >= 0");
  }
  if (r_squared == 0.0) {
    return 0.0;
  }
  // r^2 log(r) = r_squared * log(r_squared) / 2.
  return r_squared * std::log(r_squared) / (16.0 * kPi);
}

SymMat2 tps_kernel_hessian(const Vec2& d) {
  const double u = d.x * d.x + d.y * d.y;
  if (u == 0.0) {
    throw InvalidArgument("tps_kernel_hessian: singular at the center");
  }
  const double logu = std::log(u);
  const double s = 1.0 / (16.0 * kPi);
  return SymMat2{s * (2.0 * logu + 2.0 + 4.0 * d.x * d.x / u),
                 s * (4.0 * d.x * d.y / u),
                 s * (2.0 * logu + 2.0 + 4.0 * d.y * d.y / u)};
}

DenseTpsModel fit_dense(const SampleSet& samples, double lambda) {
  const std::size_t n = samples.size();
  if (n < 3) {
    throw InvalidArgument("fit_dense: need at least 3 samples");
  }
  if (samples.values.size() != n) {
    throw InvalidArgument("fit_dense: point and value counts differ");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("fit_dense: lambda must be finite and > 0");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(samples.points[i].x) ||
        !std::isfinite(samples.points[i].y) ||
        !std::isfinite(samples.values[i])) {
      throw InvalidArgument("fit_dense: samples must be finite");
    }
  }
  if (collinear(samples.points)) {
    throw CollinearSamples("fit_dense: sample points lie on a line");
  }

  const Eigen::Index m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 3, m + 3);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 3);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Point2& pi = samples.points[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < i; ++j) {
      const Point2& pj = samples.points[static_cast<std::size_t>(j)];
      const Vec2 d = pi - pj;
      const double k = tps_kernel(d.x * d.x + d.y * d.y);
      A(i, j) = k;
      A(j, i) = k;
    }
    A(i, i) = static_cast<double>(n) * lambda;
    A(i, m) = 1.0;
    A(i, m + 1) = pi.x;
    A(i, m + 2) = pi.y;
    A(m, i) = 1.0;
    A(m + 1, i) = pi.x;
    A(m + 2, i) = pi.y;
    b(i) = samples.values[static_cast<std::size_t>(i)];
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd z = lu.solve(b);
  const double rel_residual = (A * z - b).norm() / std::max(b.norm(), 1e-300);
  if (!z.allFinite() || rel_residual > 1e-8) {
    throw IllConditionedSystem("fit_dense: saddle system solve failed");
  }

  DenseTpsModel model;
  model.centers = samples.points;
  model.kernel_coeffs.assign(z.data(), z.data() + m);
  model.affine = {z(m), z(m + 1), z(m + 2)};
  model.lambda = lambda;
  model.fitted.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.fitted[i] =
        samples.values[i] - static_cast<double>(n) * lambda * model.kernel_coeffs[i];
  }
  // Energy c^T K c; the diagonal of K is zero so only cross terms appear.
  double energy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Vec2 d = samples.points[i] - samples.points[j];
      energy += 2.0 * model.kernel_coeffs[i] * model.kernel_coeffs[j] *
                tps_kernel(d.x * d.x + d.y * d.y);
    }
  }
  model.bending_energy = energy;
  return model;
}

double eval_dense(const DenseTpsModel& model, const Point2& p) {
  double v = model.affine[0] + model.affine[1] * p.x + model.affine[2] * p.y;
  for (std::size_t i = 0; i < model.centers.size(); ++i) {
    const Vec2 d = p - model.centers[i];
    v += model.kernel_coeffs[i] * tps_kernel(d.x * d.x + d.y * d.y);
  }
  return v;
}

SeminormCheck seminorm_identity_check(const DenseTpsModel& model,
                                      double radius, int radial, int angular) {
  if (radius <= 0.0 || radial < 1 || angular < 1) {
    throw InvalidArgument("seminorm_identity_check: bad quadrature parameters");
  }
  const std::size_t n = model.centers.size();
  if (model.kernel_coeffs.size() != n) {
    throw InvalidArgument("seminorm_identity_check: center and coefficient counts differ");
  }

  SeminormCheck check;
  check.radius = radius;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Vec2 d = model.centers[i] - model.centers[j];
      check.energy += 2.0 * model.kernel_coeffs[i] * model.kernel_coeffs[j] *
                      tps_kernel(d.x * d.x + d.y * d.y);
    }
  }

  // Disk centered at the centroid of the centers, midpoint rule in polar
  // coordinates.  The log singularities at the centers are integrable and
  // the midpoint nodes avoid hitting them exactly.
  Point2 centroid{0.0, 0.0};
  for (const Point2& c : model.centers) {
    centroid.x += c.x / static_cast<double>(n);
    centroid.y += c.y / static_cast<double>(n);
  }
  const double dr = radius / radial;
  const double dth = 2.0 * kPi / angular;
  double integral = 0.0;
  for (int jr = 0; jr < radial; ++jr) {
    const double r = (jr + 0.5) * dr;
    for (int jt = 0; jt < angular; ++jt) {
      const double th = (jt + 0.5) * dth;
      const Point2 p{centroid.x + r * std::cos(th),
                     centroid.y + r * std::sin(th)};
      SymMat2 h{0.0, 0.0, 0.0};
      for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = p - model.centers[i];
        if (d.x * d.x + d.y * d.y < 1e-300) {
          continue;
        }
        const SymMat2 hk = tps_kernel_hessian(d);
        h.xx += model.kernel_coeffs[i] * hk.xx;
        h.xy += model.kernel_coeffs[i] * hk.xy;
        h.yy += model.kernel_coeffs[i] * hk.yy;
      }
      integral += h.frobenius_sq() * r * dr * dth;
    }
  }
  check.integral = integral;
  return check;
}

}  // namespace tpsfem
