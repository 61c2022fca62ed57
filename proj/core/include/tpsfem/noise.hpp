#pragma once

#include <cstdint>
#include <vector>

namespace tpsfem {

/// Deterministic counter-based generator: every output is a pure function of
/// (seed, stream, counter), so independent streams can be drawn in any order
/// or in parallel and always reproduce.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();
  /// Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal();
  /// -1 or +1 with equal probability.
  double sign();

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

enum class NoiseKind { none, gaussian, combined, uniform, rademacher };

/// Observation-noise model. Meaning of the scale fields by kind:
///   none:        (unused)
///   gaussian:    a = standard deviation
///   combined:    a = gaussian standard deviation, b = magnitude of an
///                independent equiprobable +-b offset
///   uniform:     a = half-width of [-a, a]
///   rademacher:  a = magnitude of the +-a coin flip
struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double a = 0.0;
  double b = 0.0;
  std::uint64_t seed = 0;
};

/// Lowercase kind name, e.g. "gaussian"; stable across releases.
const char* noise_kind_name(NoiseKind kind);

NoiseModel gaussian_noise(double sigma, std::uint64_t seed);
NoiseModel combined_noise(double sigma1, double sigma2, std::uint64_t seed);
NoiseModel uniform_noise(double bound, std::uint64_t seed);
NoiseModel rademacher_noise(double scale, std::uint64_t seed);

/// Parameter s such that E exp(t e) <= exp(s^2 t^2 / 2) for all t.
double sub_gaussian_sigma(const NoiseModel& model);

/// One noise draw; rng must be the stream the caller dedicated to this
/// replicate.
double draw_noise(const NoiseModel& model, CounterRng& rng);

/// Smallest K with mean(exp(x_i^2 / K^2)) <= 2, found by bisection; 0 for an
/// all-zero sample. This is the empirical Orlicz norm that calibrates
/// exponential-squared tail bounds.
double psi2_norm(const std::vector<double>& values);

}  // namespace tpsfem
