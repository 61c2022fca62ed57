#include "tpsfem/fields.hpp"

#include <cmath>
#include <string>

#include "tpsfem/errors.hpp"

namespace tpsfem {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDerivativeFloor = 1e-14;

double radicand(Point2 p) { return p.x * p.x * p.x + p.y; }

[[noreturn]] void domain_error(Point2 p, const char* what) {
  throw DomainError(std::string(what) + " undefined at (" +
                    std::to_string(p.x) + ", " + std::to_string(p.y) +
                    "): x^3 + y = " + std::to_string(radicand(p)));
}

}  // namespace

double benchmark_value(Point2 p) {
  const double t = radicand(p);
  if (t < 0.0) domain_error(p, "benchmark value");
  return std::sin(2.0 * kPi * p.x * p.x + 3.0 * kPi * p.y) *
         std::exp(std::sqrt(t));
}

Vec2 benchmark_gradient(Point2 p) { return benchmark_jet(p).gradient; }

Jet2 benchmark_jet(Point2 p) {
  const double t = radicand(p);
  if (t <= kDerivativeFloor) domain_error(p, "benchmark derivative");

  const double theta = 2.0 * kPi * p.x * p.x + 3.0 * kPi * p.y;
  const double tx = 3.0 * p.x * p.x;
  const double txx = 6.0 * p.x;
  const double thx = 4.0 * kPi * p.x;
  const double thy = 3.0 * kPi;
  const double thxx = 4.0 * kPi;

  const double g = std::sqrt(t);
  const double gx = tx / (2.0 * g);
  const double gy = 1.0 / (2.0 * g);
  const double g3 = 4.0 * g * g * g;
  const double gxx = txx / (2.0 * g) - tx * tx / g3;
  const double gxy = -tx / g3;
  const double gyy = -1.0 / g3;

  const double ex = std::exp(g);
  const double exx_ = ex * (gx * gx + gxx);
  const double exy_ = ex * (gx * gy + gxy);
  const double eyy_ = ex * (gy * gy + gyy);
  const double s = std::sin(theta);
  const double c = std::cos(theta);

  Jet2 jet;
  jet.value = s * ex;
  jet.gradient = Vec2{c * thx * ex + s * ex * gx, c * thy * ex + s * ex * gy};
  jet.hessian.xx =
      -s * thx * thx * ex + c * thxx * ex + 2.0 * c * thx * ex * gx + s * exx_;
  jet.hessian.xy = -s * thx * thy * ex + c * thx * ex * gy +
                   c * thy * ex * gx + s * exy_;
  jet.hessian.yy = -s * thy * thy * ex + 2.0 * c * thy * ex * gy + s * eyy_;
  return jet;
}

}  // namespace tpsfem
