#pragma once

#include <optional>
#include <vector>

#include "tpsfem/geometry.hpp"
#include "tpsfem/system.hpp"

namespace tpsfem {

// Balance rule for the smoothing weight: with s = sigma / sqrt(n) the value
// lambda = (s / (rho + s))^(8 / (4 + d)) equates the expected data misfit with
// the roughness penalty for a d-dimensional domain.  sigma = 0 yields 0; the
// caller is expected to clamp degenerate values to its configured floor.
double optimal_lambda(double sigma, std::size_t n, double rho, int d = 2);

// Mesh resolution matched to a smoothing weight: max(1, round(lambda^(-1/4))).
// The fit error is insensitive to resolving the mesh finer than this.
int mesh_divisions_for_lambda(double lambda);

struct SmootherConfig {
  double lambda_min = 1e-14;       // clamp floor for degenerate iterates
  double tol_lambda = 1e-3;        // relative stopping tolerance on lambda
  int max_iterations = 30;         // fits before giving up
  int max_mesh_divisions = 200;    // cap on the matched mesh resolution
  Rect domain{};                   // rectangle holding the samples
  SolverOptions solver{};          // forwarded to the inner linear solves
};

struct LambdaIterate {
  int k = 0;                 // iteration index, 0-based
  double lambda = 0.0;       // smoothing weight used for this fit
  int mesh_divisions = 0;    // per-side mesh resolution used for this fit
  double residual_n = 0.0;   // empirical misfit of the fit
  double seminorm_2h = 0.0;  // broken second-order seminorm of the fit
};

struct LambdaTrace {
  std::vector<LambdaIterate> iterates;  // one row per fit, in order
  bool converged = false;               // stopping rule met within budget
  double final_lambda = 0.0;            // weight of the last recorded fit
  FitResult fit;                        // the last recorded fit itself
};

// Fixed-point iteration for the smoothing weight.  Each pass fits at the
// current weight on the matched mesh, then re-estimates the weight from the
// fit's own misfit and roughness: lambda' = optimal_lambda(residual_n, n,
// seminorm_2h).  Stops when successive weights agree to tol_lambda in
// relative terms, after a final fit at the converged weight.  Starts from
// lambda0 if given, else n^(-2/3).
LambdaTrace self_consistent_lambda(const SampleSet& samples,
                                   std::optional<double> lambda0 = {},
                                   const SmootherConfig& config = {});

// Convenience wrapper returning just the final fit of the iteration.
FitResult fit_auto(const SampleSet& samples, const SmootherConfig& config = {});

}  // namespace tpsfem
