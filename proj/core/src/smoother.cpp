#include "tpsfem/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "tpsfem/errors.hpp"
#include "tpsfem/mesh.hpp"
#include "tpsfem/morley.hpp"

namespace tpsfem {

double optimal_lambda(double sigma, std::size_t n, double rho, int d) {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw InvalidArgument("optimal_lambda: sigma must be finite and >= 0");
  }
  if (n == 0) {
    throw InvalidArgument("optimal_lambda: n must be positive");
  }
  if (!std::isfinite(rho) || rho < 0.0) {
    throw InvalidArgument("optimal_lambda: rho must be finite and >= 0");
  }
  if (d < 1) {
    throw InvalidArgument("optimal_lambda: dimension must be >= 1");
  }
  const double s = sigma / std::sqrt(static_cast<double>(n));
  if (s == 0.0) {
    return 0.0;
  }
  const double t = s / (rho + s);
  return std::pow(t, 8.0 / (4.0 + static_cast<double>(d)));
}

int mesh_divisions_for_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw InvalidArgument("mesh_divisions_for_lambda: lambda must be finite and > 0");
  }
  const double raw = std::round(std::pow(lambda, -0.25));
  return std::max(1, static_cast<int>(raw));
}

namespace {

void check_config(const SmootherConfig& config) {
  if (!(config.lambda_min > 0.0) || !std::isfinite(config.lambda_min) ||
      config.lambda_min > 1.0) {
    throw InvalidArgument("self_consistent_lambda: lambda_min must be in (0, 1]");
  }
  if (!(config.tol_lambda > 0.0) || !std::isfinite(config.tol_lambda)) {
    throw InvalidArgument("self_consistent_lambda: tol_lambda must be > 0");
  }
  if (config.max_iterations < 1) {
    throw InvalidArgument("self_consistent_lambda: max_iterations must be >= 1");
  }
  if (config.max_mesh_divisions < 1) {
    throw InvalidArgument("self_consistent_lambda: max_mesh_divisions must be >= 1");
  }
}

// Fit problems are cached per mesh resolution: the samples never change
// during the iteration, so revisiting a resolution costs nothing.
class ProblemCache {
 public:
  ProblemCache(const SampleSet& samples, const Rect& domain)
      : samples_(samples), domain_(domain) {}

  const FitProblem& at(int divisions) {
    auto it = problems_.find(divisions);
    if (it == problems_.end()) {
      auto mesh = std::make_shared<Mesh2D>(build_uniform_mesh(divisions, domain_));
      auto space = std::make_shared<MorleySpace>(std::move(mesh));
      it = problems_.emplace(divisions, build_fit_problem(space, samples_)).first;
    }
    return it->second;
  }

 private:
  const SampleSet& samples_;
  Rect domain_;
  std::map<int, FitProblem> problems_;
};

}  // namespace

LambdaTrace self_consistent_lambda(const SampleSet& samples,
                                   std::optional<double> lambda0,
                                   const SmootherConfig& config) {
  check_config(config);
  const std::size_t n = samples.size();
  double lambda = lambda0 ? *lambda0
                          : std::pow(static_cast<double>(n), -2.0 / 3.0);
  if (!std::isfinite(lambda) || lambda <= 0.0) {
    throw InvalidArgument("self_consistent_lambda: lambda0 must be finite and > 0");
  }
  lambda = std::clamp(lambda, config.lambda_min, 1.0);

  // A fit whose misfit is at rounding level relative to the data counts as
  // interpolating: the weight update would otherwise be driven by the noise
  // ratio of two negligible quantities.
  double data_scale = 0.0;
  for (double v : samples.values) {
    data_scale += v * v;
  }
  const double zero_floor =
      1e-12 * std::sqrt(data_scale / static_cast<double>(n));

  ProblemCache cache(samples, config.domain);
  LambdaTrace trace;
  auto fit_at = [&](double weight, int k) {
    const int divisions =
        std::min(mesh_divisions_for_lambda(weight), config.max_mesh_divisions);
    FitResult result =
        solve_fit(cache.at(divisions), samples, weight, config.solver);
    trace.iterates.push_back(LambdaIterate{k, weight, divisions,
                                           result.residual_n,
                                           result.seminorm_2h});
    trace.final_lambda = weight;
    trace.fit = std::move(result);
  };

  for (int k = 0; k < config.max_iterations; ++k) {
    fit_at(lambda, k);
    const double raw =
        trace.fit.residual_n <= zero_floor
            ? 0.0
            : optimal_lambda(trace.fit.residual_n, n, trace.fit.seminorm_2h);
    const double next = std::clamp(raw, config.lambda_min, 1.0);
    const bool settled = std::abs(next - lambda) <= config.tol_lambda * lambda;
    // raw == 0 means an interpolating fit: the update collapses to the floor
    // and no later pass can move it, so settle there directly.
    if (settled || raw == 0.0) {
      if (next != lambda) {
        fit_at(next, k + 1);
      }
      trace.converged = true;
      break;
    }
    lambda = next;
  }
  return trace;
}

FitResult fit_auto(const SampleSet& samples, const SmootherConfig& config) {
  LambdaTrace trace = self_consistent_lambda(samples, {}, config);
  if (!trace.converged) {
    throw NoConvergence("fit_auto: smoothing weight iteration did not settle");
  }
  return std::move(trace.fit);
}

}  // namespace tpsfem
