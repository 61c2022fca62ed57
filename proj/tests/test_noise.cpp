#include "tpsfem/noise.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "tpsfem/errors.hpp"

namespace {

using namespace tpsfem;

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::vector<double> draws(const NoiseModel& model, std::uint64_t stream,
                          int count) {
  CounterRng rng(model.seed, stream);
  std::vector<double> out(count);
  for (double& v : out) v = draw_noise(model, rng);
  return out;
}

double sample_variance(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(xs.size() - 1);
}

TEST(Noise, CounterConstructionIsPinned) {
  // The generator is the keyed counter construction; a change here would
  // silently reshuffle every experiment, so the exact outputs are pinned.
  const std::uint64_t seed = 1, stream = 2;
  CounterRng rng(seed, stream);
  const std::uint64_t key = mix64(seed ^ mix64(stream));
  for (std::uint64_t i = 0; i < 8; ++i) {
    EXPECT_EQ(rng.next_u64(), mix64(key + i));
  }
}

TEST(Noise, DeterministicStreams) {
  CounterRng a(7, 3), b(7, 3), c(7, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    differs = differs || (va != c.next_u64());
  }
  EXPECT_TRUE(differs);
}

TEST(Noise, UniformsLieInHalfOpenUnitInterval) {
  CounterRng rng(11, 0);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 0.01);
  EXPECT_GT(hi, 0.99);
}

TEST(Noise, GaussianVarianceWindow) {
  const auto e = draws(gaussian_noise(1.0, 42), 0, 2500);
  const double var = sample_variance(e);
  EXPECT_GE(var, 0.9);
  EXPECT_LE(var, 1.1);
}

TEST(Noise, CombinedVarianceWindow) {
  // Gaussian part of unit variance plus an equiprobable +-10 offset: total
  // variance 101.
  const auto e = draws(combined_noise(1.0, 10.0, 42), 0, 2500);
  const double var = sample_variance(e);
  EXPECT_GE(var, 90.0);
  EXPECT_LE(var, 112.0);
}

TEST(Noise, SubGaussianParameters) {
  EXPECT_EQ(sub_gaussian_sigma(NoiseModel{}), 0.0);
  EXPECT_EQ(sub_gaussian_sigma(gaussian_noise(1.5, 0)), 1.5);
  EXPECT_NEAR(sub_gaussian_sigma(combined_noise(1.0, 10.0, 0)),
              std::sqrt(101.0), 1e-15);
  EXPECT_NEAR(sub_gaussian_sigma(uniform_noise(2.0, 0)), 2.0 / std::sqrt(3.0),
              1e-15);
  EXPECT_EQ(sub_gaussian_sigma(rademacher_noise(0.5, 0)), 0.5);
}

TEST(Noise, MomentGeneratingFunctionBound) {
  const int n = 100000;
  const std::vector<NoiseModel> models{
      gaussian_noise(1.0, 9), combined_noise(1.0, 10.0, 9),
      uniform_noise(2.0, 9), rademacher_noise(1.5, 9)};
  for (const NoiseModel& model : models) {
    const double sigma = sub_gaussian_sigma(model);
    const auto e = draws(model, 1, n);
    for (double t : {-1.0, -0.5, 0.5, 1.0}) {
      double acc = 0.0;
      for (double v : e) acc += std::exp(t * v);
      const double mgf = acc / n;
      EXPECT_LE(mgf, std::exp(0.5 * sigma * sigma * t * t) * 1.05)
          << "kind=" << static_cast<int>(model.kind) << " t=" << t;
    }
  }
}

TEST(Noise, NoiselessModelDrawsZero) {
  CounterRng rng(3, 0);
  EXPECT_EQ(draw_noise(NoiseModel{}, rng), 0.0);
}

TEST(Noise, RejectsNegativeScales) {
  EXPECT_THROW(gaussian_noise(-1.0, 0), InvalidArgument);
  EXPECT_THROW(combined_noise(1.0, -2.0, 0), InvalidArgument);
  EXPECT_THROW(uniform_noise(-0.1, 0), InvalidArgument);
  EXPECT_THROW(rademacher_noise(-0.1, 0), InvalidArgument);
}

TEST(Noise, Psi2OfConstantSample) {
  // mean(exp(c^2/K^2)) = 2 solves to K = c / sqrt(ln 2).
  const std::vector<double> xs(17, 3.0);
  EXPECT_NEAR(psi2_norm(xs), 3.0 / std::sqrt(std::log(2.0)), 1e-9);
  EXPECT_EQ(psi2_norm(std::vector<double>(5, 0.0)), 0.0);
}

TEST(Noise, Psi2ScaleEquivariance) {
  const auto xs = draws(gaussian_noise(1.0, 13), 0, 400);
  std::vector<double> doubled(xs);
  for (double& v : doubled) v *= 2.0;
  EXPECT_NEAR(psi2_norm(doubled), 2.0 * psi2_norm(xs),
              1e-9 * psi2_norm(doubled));
}

TEST(Noise, Psi2GrowsWithNoiseLevel) {
  const auto small = draws(gaussian_noise(0.5, 21), 0, 2000);
  const auto large = draws(gaussian_noise(2.0, 21), 0, 2000);
  EXPECT_LT(psi2_norm(small), psi2_norm(large));
}

TEST(Noise, Psi2RejectsBadInput) {
  EXPECT_THROW(psi2_norm({}), InvalidArgument);
  EXPECT_THROW(psi2_norm({1.0, std::nan("")}), InvalidArgument);
}

}  // namespace
