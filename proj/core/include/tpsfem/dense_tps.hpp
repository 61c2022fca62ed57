#pragma once

#include <array>
#include <vector>

#include "tpsfem/geometry.hpp"
#include "tpsfem/system.hpp"

namespace tpsfem {

// Radial kernel of the whole-plane bending-energy minimizer, as a function
// of squared distance: r^2 log(r) / (8 pi), with the removable singularity
// at zero patched to 0.
double tps_kernel(double r_squared);

// Hessian of the kernel at offset d from its center.  Log-singular at the
// center itself.
SymMat2 tps_kernel_hessian(const Vec2& d);

// Whole-plane smoother in closed form: a kernel expansion around the sample
// points plus an affine part, u(x) = sum_i c_i k(x - x_i) + a0 + a1 x + a2 y,
// with the side conditions sum c_i = sum c_i x_i = sum c_i y_i = 0.  Serves
// as an independent reference for the mesh-based smoother.
struct DenseTpsModel {
  std::vector<Point2> centers;
  std::vector<double> kernel_coeffs;
  std::array<double, 3> affine{};  // constant, x and y coefficients
  double lambda = 0.0;
  double bending_energy = 0.0;  // c^T K c, the squared bending seminorm
  std::vector<double> fitted;   // values at the centers, equal to y - n*lambda*c
};

// Solves the saddle system [K + n*lambda*I, P; P^T, 0] [c; a] = [y; 0] by
// dense LU.  Requires at least 3 non-collinear points and lambda > 0.
DenseTpsModel fit_dense(const SampleSet& samples, double lambda);

double eval_dense(const DenseTpsModel& model, const Point2& p);

struct SeminormCheck {
  double energy = 0.0;    // c^T K c recomputed from the model
  double integral = 0.0;  // squared bending seminorm by polar quadrature
  double radius = 0.0;    // truncation radius of the quadrature
};

// Numerically integrates the squared bending seminorm of the kernel part
// (the affine part has no curvature) over a disk and reports it next to the
// algebraic energy c^T K c.  The two agree for models satisfying the side
// conditions; the truncation tail decays like 1/radius^2.
SeminormCheck seminorm_identity_check(const DenseTpsModel& model,
                                      double radius = 60.0, int radial = 1200,
                                      int angular = 512);

}  // namespace tpsfem
