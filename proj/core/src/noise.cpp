#include "tpsfem/noise.hpp"

#include <algorithm>
#include <cmath>

#include "tpsfem/errors.hpp"

namespace tpsfem {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void check_scale(double s, const char* what) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw InvalidArgument(std::string(what) + " must be a finite value >= 0");
  }
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(seed ^ splitmix64(stream))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + counter_++); }

double CounterRng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double CounterRng::sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

const char* noise_kind_name(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none:
      return "none";
    case NoiseKind::gaussian:
      return "gaussian";
    case NoiseKind::combined:
      return "combined";
    case NoiseKind::uniform:
      return "uniform";
    case NoiseKind::rademacher:
      return "rademacher";
  }
  return "unknown";
}

NoiseModel gaussian_noise(double sigma, std::uint64_t seed) {
  check_scale(sigma, "gaussian sigma");
  return NoiseModel{NoiseKind::gaussian, sigma, 0.0, seed};
}

NoiseModel combined_noise(double sigma1, double sigma2, std::uint64_t seed) {
  check_scale(sigma1, "combined sigma1");
  check_scale(sigma2, "combined sigma2");
  return NoiseModel{NoiseKind::combined, sigma1, sigma2, seed};
}

NoiseModel uniform_noise(double bound, std::uint64_t seed) {
  check_scale(bound, "uniform bound");
  return NoiseModel{NoiseKind::uniform, bound, 0.0, seed};
}

NoiseModel rademacher_noise(double scale, std::uint64_t seed) {
  check_scale(scale, "rademacher scale");
  return NoiseModel{NoiseKind::rademacher, scale, 0.0, seed};
}

double sub_gaussian_sigma(const NoiseModel& model) {
  switch (model.kind) {
    case NoiseKind::none:
      return 0.0;
    case NoiseKind::gaussian:
      return model.a;
    case NoiseKind::combined:
      // E exp(t(eta + alpha)) = exp(a^2 t^2/2) cosh(b t) <= exp((a^2+b^2)t^2/2).
      return std::sqrt(model.a * model.a + model.b * model.b);
    case NoiseKind::uniform:
      // sinh(bt)/(bt) <= exp(b^2 t^2 / 6); matches the variance b^2/3.
      return model.a / std::sqrt(3.0);
    case NoiseKind::rademacher:
      return model.a;
  }
  throw InvalidArgument("unknown noise kind");
}

double draw_noise(const NoiseModel& model, CounterRng& rng) {
  switch (model.kind) {
    case NoiseKind::none:
      return 0.0;
    case NoiseKind::gaussian:
      return model.a * rng.normal();
    case NoiseKind::combined:
      return model.a * rng.normal() + model.b * rng.sign();
    case NoiseKind::uniform:
      return model.a * (2.0 * rng.uniform01() - 1.0);
    case NoiseKind::rademacher:
      return model.a * rng.sign();
  }
  throw InvalidArgument("unknown noise kind");
}

double psi2_norm(const std::vector<double>& values) {
  if (values.empty()) throw InvalidArgument("psi2_norm: no values");
  double peak = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw InvalidArgument("psi2_norm: non-finite value");
    peak = std::max(peak, std::abs(v));
  }
  if (peak == 0.0) return 0.0;

  const auto excess = [&values](double k) {
    double acc = 0.0;
    for (double v : values) acc += std::exp(v * v / (k * k));
    return acc / static_cast<double>(values.size()) - 2.0;
  };

  // excess is strictly decreasing in k, positive near 0 and negative at
  // 10*peak (where every summand is at most exp(1/100)); bisect.
  double lo = 1e-12 * peak;
  double hi = 10.0 * peak;
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace tpsfem
