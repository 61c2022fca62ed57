#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tpsfem/geometry.hpp"
#include "tpsfem/noise.hpp"
#include "tpsfem/smoother.hpp"
#include "tpsfem/system.hpp"

namespace tpsfem {

enum class SampleLayout { grid, jittered_grid };

/// Cell-centered sqrt(n) x sqrt(n) tensor grid over the unit square, row
/// major (index = row * sqrt(n) + column); n must be a perfect square. The
/// jittered layout displaces each coordinate by at most 0.3 of the spacing,
/// which keeps the fill-to-separation ratio provably below 4 for every seed.
/// Values are the benchmark field plus one noise draw per point; the exact
/// field values are kept in `truth`. `replicate` selects the noise stream,
/// so distinct replicates are statistically independent yet reproducible.
SampleSet generate_samples(int n, SampleLayout layout, const NoiseModel& noise,
                           std::uint64_t replicate = 0);

/// Rectangular nx x ny variant of the grid layout.
SampleSet make_grid_samples(int nx, int ny, const NoiseModel& noise,
                            std::uint64_t replicate = 0);

/// fill: sup over the unit square of the distance to the nearest point,
/// measured on a fine probe grid that includes the boundary; separation:
/// smallest pairwise distance.
struct LayoutMetrics {
  double fill = 0.0;
  double separation = 0.0;
  double ratio() const { return fill / separation; }
};
LayoutMetrics layout_metrics(const std::vector<Point2>& points);

/// Chart recipe for the optional SVG companion of a report: column indices
/// into the result rows. Points that a log axis cannot show are dropped.
struct ReportPlot {
  int x_column = 0;
  std::vector<int> y_columns;
  bool log_x = false;
  bool log_y = false;
  std::string title;
  std::string x_label;
  std::string y_label;
};

/// Everything a runner produces: CSV-ready result rows plus the echoed
/// configuration and derived summary values. Deterministic given the same
/// configuration; the wall clock never enters the emitted files.
struct ExperimentReport {
  std::string id;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  std::optional<ReportPlot> plot;
  double wall_seconds = 0.0;
};

/// Writes <id>.csv (result rows), <id>_summary.csv (key,value pairs) and
/// <id>_config.txt ("key = value" lines) into dir, plus a best-effort
/// <id>.svg when the report carries a plot recipe.
void write_report(const ExperimentReport& report,
                  const std::filesystem::path& dir);

/// The standard sweep 10^-k for k = 0..10.
std::vector<double> default_lambda_grid();

/// Fits the samples at every weight on the matched mesh (capped divisions)
/// and records the misfit against the stored truth. Rows: lambda, mesh_div,
/// error_n, residual_n, seminorm_2h. Summary: the weight with the smallest
/// truth error. Requires samples.truth.
ExperimentReport run_lambda_sweep(const SampleSet& samples,
                                  const std::vector<double>& lambdas,
                                  int max_mesh_divisions = 200);

/// Convenience variant on freshly generated grid samples of the benchmark
/// field.
ExperimentReport run_lambda_sweep(int n, const NoiseModel& noise,
                                  const std::vector<double>& lambdas,
                                  int max_mesh_divisions = 200);

/// For each n: weight from the balance rule (the noise scale is known to the
/// experiment; rho calibrates the roughness), `replicates` fits with fresh
/// noise, mean misfit against the truth. Rows: n, lambda, sqrt_lambda,
/// mesh_div, mean_error, sd_error. Summary: least-squares line of mean_error
/// against sqrt_lambda with its Pearson correlation; sufficient_spread is 0
/// when the abscissa is too degenerate to fit a slope (then slope, intercept
/// and pearson_r are reported as 0).
ExperimentReport run_rate_study(const std::vector<int>& ns,
                                const NoiseModel& noise, int replicates = 10,
                                double rho = 200.0,
                                int max_mesh_divisions = 200);

/// Fixed-point iteration for the weight on one generated sample set, with
/// the misfit against the truth recomputed at every iterate. Rows: k,
/// lambda, mesh_div, residual_n, seminorm_2h, error_n.
ExperimentReport run_self_consistent(int n, const NoiseModel& noise,
                                     std::optional<double> lambda0 = {},
                                     const SmootherConfig& config = {});

/// `replicates` fits with fresh noise at a fixed weight; reports the
/// empirical survival curve of the misfit X = error_n. Rows: k, x, survival
/// (share of replicates strictly above x). Summary: slope, intercept and
/// r_squared of log survival against x^2 over the upper half of the support,
/// the psi2 estimate of X, and fit_ok = 0 when too few distinct points with
/// positive survival remain for a line.
ExperimentReport run_tail_study(int n, const NoiseModel& noise, double lambda,
                                int replicates, int max_mesh_divisions = 200);

/// Interpolation accuracy for the benchmark field over a division ladder.
/// Rows: m_div, h, err_l2, err_h1, err_n. Summary: observed orders (log-log
/// slopes against h).
ExperimentReport run_interpolation_rates(
    const std::vector<int>& divisions = {8, 16, 32, 64});

/// Smoothing-enrichment distances for seeded random coefficient vectors over
/// a division ladder. Rows: m_div, h, dist_m0, dist_m1, dist_m2, hat_dist,
/// seminorm. Summary: observed orders of the seminorm-normalized distances.
ExperimentReport run_enrichment_rates(
    const std::vector<int>& divisions = {8, 16, 32, 64},
    std::uint64_t seed = 2026);

}  // namespace tpsfem
