#include "tpsfem/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <utility>

#include "tpsfem/argyris.hpp"
#include "tpsfem/csv.hpp"
#include "tpsfem/errors.hpp"
#include "tpsfem/fields.hpp"
#include "tpsfem/mesh.hpp"
#include "tpsfem/morley.hpp"
#include "tpsfem/norms.hpp"
#include "tpsfem/parallel.hpp"
#include "tpsfem/svg.hpp"

namespace tpsfem {
namespace {

// Per-coordinate jitter as a fraction of the grid spacing. At 0.3 the
// separation stays >= 0.4 spacing and the fill <= 0.8*sqrt(2) spacing, so
// the ratio is below 2.9 for every realization.
constexpr double kJitterFraction = 0.3;
// Jitter draws live on their own streams, far above any replicate index.
constexpr std::uint64_t kJitterStreamOffset = 1ull << 32;

class Timer {
 public:
  double seconds() const {
    const auto dt = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double>(dt).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void add_entry(KeyValues& kv, const std::string& key, const std::string& value) {
  kv.emplace_back(key, value);
}

void add_entry(KeyValues& kv, const std::string& key, double value) {
  kv.emplace_back(key, format_double(value));
}

void add_entry(KeyValues& kv, const std::string& key, std::uint64_t value) {
  kv.emplace_back(key, std::to_string(value));
}

void add_entry(KeyValues& kv, const std::string& key, int value) {
  kv.emplace_back(key, std::to_string(value));
}

void echo_noise(KeyValues& config, const NoiseModel& noise) {
  add_entry(config, "noise", noise_kind_name(noise.kind));
  add_entry(config, "noise_a", noise.a);
  add_entry(config, "noise_b", noise.b);
  add_entry(config, "seed", noise.seed);
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double pearson = 0.0;
  bool ok = false;
};

// Least squares y = intercept + slope * x; ok requires two points and a
// non-degenerate abscissa.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit out;
  const int n = static_cast<int>(x.size());
  if (n < 2) return out;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(x[i]));
  if (sxx <= 1e-24 * std::max(1.0, scale * scale)) return out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.pearson = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
  out.ok = true;
  return out;
}

std::shared_ptr<const MorleySpace> make_space(int divisions) {
  auto mesh = std::make_shared<Mesh2D>(build_uniform_mesh(divisions));
  return std::make_shared<MorleySpace>(mesh);
}

int capped_divisions(double lambda, int max_divisions) {
  return std::min(mesh_divisions_for_lambda(lambda), std::max(1, max_divisions));
}

// RMS distance between the stored truth and the fitted values at the sample
// points, using the same averaged evaluation rule as the fit itself.
double truth_error(const FitProblem& problem, const std::vector<double>& truth,
                   const std::vector<double>& coeffs) {
  std::vector<double> fitted = problem.data.apply(coeffs);
  for (std::size_t i = 0; i < fitted.size(); ++i) fitted[i] -= truth[i];
  return empirical_norm(fitted);
}

// Build one problem per distinct division count, in parallel.
std::map<int, std::shared_ptr<const FitProblem>> build_problems(
    std::vector<int> divisions, const SampleSet& samples) {
  std::sort(divisions.begin(), divisions.end());
  divisions.erase(std::unique(divisions.begin(), divisions.end()), divisions.end());
  std::vector<std::shared_ptr<const FitProblem>> built(divisions.size());
  parallel_for(static_cast<int>(divisions.size()), [&](int i) {
    built[i] = std::make_shared<FitProblem>(
        build_fit_problem(make_space(divisions[i]), samples));
  });
  std::map<int, std::shared_ptr<const FitProblem>> out;
  for (std::size_t i = 0; i < divisions.size(); ++i) out[divisions[i]] = built[i];
  return out;
}

std::vector<Point2> probe_grid(int side) {
  std::vector<Point2> points;
  points.reserve(static_cast<std::size_t>(side) * side);
  const double h = 1.0 / side;
  for (int j = 0; j < side; ++j)
    for (int i = 0; i < side; ++i)
      points.push_back({(i + 0.5) * h, (j + 0.5) * h});
  return points;
}

double benchmark_value_fn(Point2 p) { return benchmark_value(p); }
Vec2 benchmark_gradient_fn(Point2 p) { return benchmark_gradient(p); }

}  // namespace

SampleSet generate_samples(int n, SampleLayout layout, const NoiseModel& noise,
                           std::uint64_t replicate) {
  if (n <= 0) throw InvalidArgument("generate_samples: n must be positive");
  const int side = static_cast<int>(std::lround(std::sqrt(double(n))));
  if (side * side != n)
    throw InvalidArgument("generate_samples: n must be a perfect square");

  CounterRng noise_rng(noise.seed, replicate);
  CounterRng jitter_rng(noise.seed, kJitterStreamOffset + replicate);
  const double h = 1.0 / side;

  SampleSet samples;
  samples.points.reserve(n);
  samples.values.reserve(n);
  samples.truth.reserve(n);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      Point2 p{(i + 0.5) * h, (j + 0.5) * h};
      if (layout == SampleLayout::jittered_grid) {
        p.x += kJitterFraction * h * (2.0 * jitter_rng.uniform01() - 1.0);
        p.y += kJitterFraction * h * (2.0 * jitter_rng.uniform01() - 1.0);
      }
      const double exact = benchmark_value(p);
      samples.points.push_back(p);
      samples.truth.push_back(exact);
      samples.values.push_back(exact + draw_noise(noise, noise_rng));
    }
  }
  return samples;
}

SampleSet make_grid_samples(int nx, int ny, const NoiseModel& noise,
                            std::uint64_t replicate) {
  if (nx <= 0 || ny <= 0)
    throw InvalidArgument("make_grid_samples: grid sides must be positive");
  CounterRng noise_rng(noise.seed, replicate);
  const double hx = 1.0 / nx;
  const double hy = 1.0 / ny;
  SampleSet samples;
  samples.points.reserve(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point2 p{(i + 0.5) * hx, (j + 0.5) * hy};
      const double exact = benchmark_value(p);
      samples.points.push_back(p);
      samples.truth.push_back(exact);
      samples.values.push_back(exact + draw_noise(noise, noise_rng));
    }
  }
  return samples;
}

namespace {

// Uniform bucket grid over the unit square for nearest-point queries.
class PointBuckets {
 public:
  explicit PointBuckets(const std::vector<Point2>& points)
      : points_(points),
        side_(std::max(1, static_cast<int>(std::floor(
                              std::sqrt(double(points.size())))))),
        cell_(1.0 / side_),
        buckets_(static_cast<std::size_t>(side_) * side_) {
    for (int i = 0; i < static_cast<int>(points.size()); ++i)
      buckets_[bucket_of(points[i])].push_back(i);
  }

  // Distance from p to the nearest stored point other than skip.
  double nearest(Point2 p, int skip = -1) const {
    const int cx = clamp_cell(p.x);
    const int cy = clamp_cell(p.y);
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r <= side_; ++r) {
      if (r > 0 && (r - 1) * cell_ >= best) break;
      bool any_cell = false;
      for (int by = cy - r; by <= cy + r; ++by) {
        if (by < 0 || by >= side_) continue;
        for (int bx = cx - r; bx <= cx + r; ++bx) {
          if (bx < 0 || bx >= side_) continue;
          if (std::max(std::abs(bx - cx), std::abs(by - cy)) != r) continue;
          any_cell = true;
          for (int idx : buckets_[static_cast<std::size_t>(by) * side_ + bx]) {
            if (idx == skip) continue;
            const double dx = points_[idx].x - p.x;
            const double dy = points_[idx].y - p.y;
            best = std::min(best, std::sqrt(dx * dx + dy * dy));
          }
        }
      }
      if (!any_cell && r > 0 && std::isfinite(best)) break;
    }
    return best;
  }

 private:
  int clamp_cell(double v) const {
    return std::clamp(static_cast<int>(std::floor(v * side_)), 0, side_ - 1);
  }
  std::size_t bucket_of(Point2 p) const {
    return static_cast<std::size_t>(clamp_cell(p.y)) * side_ + clamp_cell(p.x);
  }

  const std::vector<Point2>& points_;
  int side_;
  double cell_;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace

LayoutMetrics layout_metrics(const std::vector<Point2>& points) {
  if (points.size() < 2)
    throw InvalidArgument("layout_metrics: needs at least two points");
  const PointBuckets buckets(points);

  LayoutMetrics metrics;
  metrics.separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < static_cast<int>(points.size()); ++i)
    metrics.separation = std::min(metrics.separation, buckets.nearest(points[i], i));

  // Probe grid four times finer than the average spacing, boundary included;
  // corners of the square are always probed.
  const int refine = 4 * std::max(1, static_cast<int>(std::floor(
                                         std::sqrt(double(points.size())))));
  std::vector<double> row_max(refine + 1, 0.0);
  parallel_for(refine + 1, [&](int j) {
    double worst = 0.0;
    for (int i = 0; i <= refine; ++i) {
      const Point2 p{double(i) / refine, double(j) / refine};
      worst = std::max(worst, buckets.nearest(p));
    }
    row_max[j] = worst;
  });
  metrics.fill = *std::max_element(row_max.begin(), row_max.end());
  return metrics;
}

void write_report(const ExperimentReport& report,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_table(dir / (report.id + ".csv"), report.header, report.rows);

  CsvTable summary;
  summary.header = {"key", "value"};
  for (const auto& [key, value] : report.summary)
    summary.rows.push_back({key, value});
  write_csv(dir / (report.id + "_summary.csv"), summary);

  const std::filesystem::path config_path = dir / (report.id + "_config.txt");
  std::ofstream config(config_path, std::ios::binary);
  if (!config)
    throw IoError("cannot open for writing: " + config_path.string());
  config << "experiment = " << report.id << "\n";
  for (const auto& [key, value] : report.config)
    config << key << " = " << value << "\n";
  if (!config.flush())
    throw IoError("write failed: " + config_path.string());

  if (!report.plot) return;
  const ReportPlot& plot = *report.plot;
  std::vector<SvgSeries> series;
  for (int column : plot.y_columns) {
    SvgSeries s;
    s.label = column < static_cast<int>(report.header.size())
                  ? report.header[column]
                  : "series";
    for (const auto& row : report.rows) {
      const double x = row[plot.x_column];
      const double y = row[column];
      if (plot.log_x && !(x > 0.0)) continue;
      if (plot.log_y && !(y > 0.0)) continue;
      s.points.push_back({x, y});
    }
    if (!s.points.empty()) series.push_back(std::move(s));
  }
  if (series.empty()) return;
  SvgChartOptions options;
  options.title = plot.title;
  options.x_label = plot.x_label;
  options.y_label = plot.y_label;
  options.log_x = plot.log_x;
  options.log_y = plot.log_y;
  try {
    write_svg_chart(dir / (report.id + ".svg"), series, options);
  } catch (const Error&) {
    // The chart is a best-effort companion; the CSV outputs are the contract.
  }
}

std::vector<double> default_lambda_grid() {
  std::vector<double> lambdas;
  for (int k = 0; k <= 10; ++k) lambdas.push_back(std::pow(10.0, -k));
  return lambdas;
}

ExperimentReport run_lambda_sweep(const SampleSet& samples,
                                  const std::vector<double>& lambdas,
                                  int max_mesh_divisions) {
  if (!samples.has_truth())
    throw InvalidArgument("lambda sweep: samples must carry truth values");
  if (lambdas.empty()) throw InvalidArgument("lambda sweep: empty weight list");
  Timer timer;

  std::vector<int> divisions;
  divisions.reserve(lambdas.size());
  for (double lambda : lambdas)
    divisions.push_back(capped_divisions(lambda, max_mesh_divisions));
  const auto problems = build_problems(divisions, samples);

  ExperimentReport report;
  report.id = "lambda_sweep";
  report.header = {"lambda", "mesh_div", "error_n", "residual_n", "seminorm_2h"};
  report.rows.resize(lambdas.size());
  parallel_for(static_cast<int>(lambdas.size()), [&](int i) {
    const FitProblem& problem = *problems.at(divisions[i]);
    const FitResult fit = solve_fit(problem, samples, lambdas[i]);
    const double error = truth_error(problem, samples.truth, fit.fit.coeffs);
    report.rows[i] = {lambdas[i], double(divisions[i]), error, fit.residual_n,
                      fit.seminorm_2h};
  });

  int best = 0;
  for (int i = 1; i < static_cast<int>(report.rows.size()); ++i)
    if (report.rows[i][2] < report.rows[best][2]) best = i;

  add_entry(report.config, "n", samples.size());
  add_entry(report.config, "weights", static_cast<int>(lambdas.size()));
  add_entry(report.config, "max_mesh_divisions", max_mesh_divisions);
  add_entry(report.summary, "best_lambda", report.rows[best][0]);
  add_entry(report.summary, "best_mesh_div", static_cast<int>(report.rows[best][1]));
  add_entry(report.summary, "best_error_n", report.rows[best][2]);
  report.plot = ReportPlot{0, {2, 3}, true, true, "misfit across the weight sweep",
                           "lambda", "distance"};
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport run_lambda_sweep(int n, const NoiseModel& noise,
                                  const std::vector<double>& lambdas,
                                  int max_mesh_divisions) {
  Timer timer;
  const SampleSet samples = generate_samples(n, SampleLayout::grid, noise, 0);
  ExperimentReport report = run_lambda_sweep(samples, lambdas, max_mesh_divisions);
  KeyValues config;
  echo_noise(config, noise);
  config.insert(config.end(), report.config.begin(), report.config.end());
  report.config = std::move(config);
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport run_rate_study(const std::vector<int>& ns,
                                const NoiseModel& noise, int replicates,
                                double rho, int max_mesh_divisions) {
  if (ns.empty()) throw InvalidArgument("rate study: empty n list");
  if (replicates < 1) throw InvalidArgument("rate study: needs a replicate");
  Timer timer;
  const double sigma = sub_gaussian_sigma(noise);

  ExperimentReport report;
  report.id = "rate_study";
  report.header = {"n", "lambda", "sqrt_lambda", "mesh_div", "mean_error",
                   "sd_error"};
  for (int n : ns) {
    const double lambda = optimal_lambda(sigma, static_cast<std::size_t>(n), rho);
    const int divisions = capped_divisions(lambda, max_mesh_divisions);
    const SampleSet base = generate_samples(n, SampleLayout::grid, noise, 0);
    const FitProblem problem = build_fit_problem(make_space(divisions), base);

    std::vector<double> errors(replicates, 0.0);
    parallel_for(replicates, [&](int r) {
      const SampleSet samples =
          r == 0 ? base
                 : generate_samples(n, SampleLayout::grid, noise,
                                    static_cast<std::uint64_t>(r));
      const FitResult fit = solve_fit(problem, samples, lambda);
      errors[r] = truth_error(problem, base.truth, fit.fit.coeffs);
    });

    double mean = 0.0;
    for (double e : errors) mean += e;
    mean /= replicates;
    double var = 0.0;
    for (double e : errors) var += (e - mean) * (e - mean);
    const double sd = replicates > 1 ? std::sqrt(var / (replicates - 1)) : 0.0;
    report.rows.push_back({double(n), lambda, std::sqrt(lambda),
                           double(divisions), mean, sd});
  }

  std::vector<double> x, y;
  for (const auto& row : report.rows) {
    x.push_back(row[2]);
    y.push_back(row[4]);
  }
  const LineFit line = fit_line(x, y);

  echo_noise(report.config, noise);
  add_entry(report.config, "replicates", replicates);
  add_entry(report.config, "rho", rho);
  add_entry(report.config, "sigma", sigma);
  add_entry(report.config, "max_mesh_divisions", max_mesh_divisions);
  add_entry(report.summary, "slope", line.ok ? line.slope : 0.0);
  add_entry(report.summary, "intercept", line.ok ? line.intercept : 0.0);
  add_entry(report.summary, "pearson_r", line.ok ? line.pearson : 0.0);
  add_entry(report.summary, "sufficient_spread", line.ok ? 1 : 0);
  report.plot = ReportPlot{2,           {4},          false,
                           false,       "mean misfit against the root weight",
                           "sqrt(lambda)", "mean distance"};
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport run_self_consistent(int n, const NoiseModel& noise,
                                     std::optional<double> lambda0,
                                     const SmootherConfig& config) {
  Timer timer;
  const SampleSet samples = generate_samples(n, SampleLayout::grid, noise, 0);
  const LambdaTrace trace = self_consistent_lambda(samples, lambda0, config);

  std::vector<int> divisions;
  for (const LambdaIterate& it : trace.iterates)
    divisions.push_back(it.mesh_divisions);
  const auto problems = build_problems(divisions, samples);

  ExperimentReport report;
  report.id = "self_consistent";
  report.header = {"k",           "lambda",      "mesh_div",
                   "residual_n",  "seminorm_2h", "error_n"};
  report.rows.resize(trace.iterates.size());
  parallel_for(static_cast<int>(trace.iterates.size()), [&](int i) {
    const LambdaIterate& it = trace.iterates[i];
    const FitProblem& problem = *problems.at(it.mesh_divisions);
    const FitResult fit = solve_fit(problem, samples, it.lambda, config.solver);
    const double error = truth_error(problem, samples.truth, fit.fit.coeffs);
    report.rows[i] = {double(it.k),     it.lambda,      double(it.mesh_divisions),
                      it.residual_n,    it.seminorm_2h, error};
  });

  echo_noise(report.config, noise);
  add_entry(report.config, "n", n);
  if (lambda0) add_entry(report.config, "lambda0", *lambda0);
  add_entry(report.config, "max_mesh_divisions", config.max_mesh_divisions);
  add_entry(report.summary, "converged", trace.converged ? 1 : 0);
  add_entry(report.summary, "iterations",
            static_cast<int>(trace.iterates.size()));
  add_entry(report.summary, "final_lambda", trace.final_lambda);
  add_entry(report.summary, "final_mesh_div",
            trace.iterates.empty() ? 0 : trace.iterates.back().mesh_divisions);
  add_entry(report.summary, "final_residual_n", trace.fit.residual_n);
  add_entry(report.summary, "final_error_n",
            report.rows.empty() ? 0.0 : report.rows.back()[5]);
  report.plot = ReportPlot{0,     {1, 5},      false,
                           true,  "weight iteration", "iteration",
                           "lambda, misfit"};
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport run_tail_study(int n, const NoiseModel& noise, double lambda,
                                int replicates, int max_mesh_divisions) {
  if (replicates < 1) throw InvalidArgument("tail study: needs a replicate");
  if (!(lambda > 0.0)) throw InvalidArgument("tail study: weight must be positive");
  Timer timer;

  const int divisions = capped_divisions(lambda, max_mesh_divisions);
  const SampleSet base = generate_samples(n, SampleLayout::grid, noise, 0);
  const FitProblem problem = build_fit_problem(make_space(divisions), base);

  std::vector<double> misfits(replicates, 0.0);
  parallel_for(replicates, [&](int r) {
    const SampleSet samples =
        r == 0 ? base
               : generate_samples(n, SampleLayout::grid, noise,
                                  static_cast<std::uint64_t>(r));
    const FitResult fit = solve_fit(problem, samples, lambda);
    misfits[r] = truth_error(problem, base.truth, fit.fit.coeffs);
  });

  std::vector<double> sorted = misfits;
  std::sort(sorted.begin(), sorted.end());

  ExperimentReport report;
  report.id = "tail_study";
  report.header = {"k", "x", "survival"};
  for (int k = 0; k < replicates; ++k) {
    const double x = sorted[k];
    const auto above = sorted.end() -
                       std::upper_bound(sorted.begin(), sorted.end(), x);
    report.rows.push_back({double(k + 1), x, double(above) / replicates});
  }

  // Tail fit: log survival against x^2 over the upper half of the observed
  // support, skipping exhausted survival levels.
  const double median = sorted[replicates / 2];
  std::vector<double> zsq, logs;
  for (const auto& row : report.rows) {
    if (row[1] < median || !(row[2] > 0.0)) continue;
    zsq.push_back(row[1] * row[1]);
    logs.push_back(std::log(row[2]));
  }
  const LineFit line = fit_line(zsq, logs);
  const double psi2 = psi2_norm(misfits);
  double mean = 0.0;
  for (double v : misfits) mean += v;
  mean /= replicates;

  echo_noise(report.config, noise);
  add_entry(report.config, "n", n);
  add_entry(report.config, "lambda", lambda);
  add_entry(report.config, "mesh_div", divisions);
  add_entry(report.config, "replicates", replicates);
  add_entry(report.summary, "slope", line.ok ? line.slope : 0.0);
  add_entry(report.summary, "intercept", line.ok ? line.intercept : 0.0);
  add_entry(report.summary, "r_squared", line.ok ? line.pearson * line.pearson : 0.0);
  add_entry(report.summary, "fit_ok", line.ok ? 1 : 0);
  add_entry(report.summary, "fit_points", static_cast<int>(zsq.size()));
  add_entry(report.summary, "psi2", psi2);
  add_entry(report.summary, "mean_x", mean);
  add_entry(report.summary, "min_x", sorted.front());
  add_entry(report.summary, "max_x", sorted.back());
  report.plot = ReportPlot{1,    {2},       false,
                           true, "misfit survival curve", "x", "survival"};
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport run_interpolation_rates(const std::vector<int>& divisions) {
  if (divisions.size() < 2)
    throw InvalidArgument("interpolation rates: needs at least two meshes");
  Timer timer;
  const std::vector<Point2> probes = probe_grid(100);

  ExperimentReport report;
  report.id = "interp_rates";
  report.header = {"m_div", "h", "err_l2", "err_h1", "err_n"};
  report.rows.resize(divisions.size());
  parallel_for(static_cast<int>(divisions.size()), [&](int i) {
    const auto space = make_space(divisions[i]);
    const MorleyFunction f =
        interpolate(space, benchmark_value_fn, benchmark_gradient_fn);
    report.rows[i] = {double(divisions[i]), 1.0 / divisions[i],
                      error_l2(f, benchmark_value_fn),
                      error_h1_broken(f, benchmark_gradient_fn),
                      error_empirical(f, benchmark_value_fn, probes)};
  });

  std::vector<double> logh, log_l2, log_h1, log_n;
  for (const auto& row : report.rows) {
    logh.push_back(std::log(row[1]));
    log_l2.push_back(std::log(row[2]));
    log_h1.push_back(std::log(row[3]));
    log_n.push_back(std::log(row[4]));
  }
  add_entry(report.config, "meshes", static_cast<int>(divisions.size()));
  add_entry(report.config, "probe_points", static_cast<int>(probes.size()));
  add_entry(report.summary, "order_l2", fit_line(logh, log_l2).slope);
  add_entry(report.summary, "order_h1", fit_line(logh, log_h1).slope);
  add_entry(report.summary, "order_n", fit_line(logh, log_n).slope);
  report.plot = ReportPlot{1,    {2, 3, 4},      true,
                           true, "interpolation accuracy", "h", "distance"};
  report.wall_seconds = timer.seconds();
  return report;
}

ExperimentReport run_enrichment_rates(const std::vector<int>& divisions,
                                      std::uint64_t seed) {
  if (divisions.size() < 2)
    throw InvalidArgument("enrichment rates: needs at least two meshes");
  Timer timer;
  const std::vector<Point2> probes = probe_grid(100);

  ExperimentReport report;
  report.id = "enrich_rates";
  report.header = {"m_div",   "h",        "dist_m0", "dist_m1",
                   "dist_m2", "hat_dist", "seminorm"};
  report.rows.resize(divisions.size());
  parallel_for(static_cast<int>(divisions.size()), [&](int i) {
    const auto space = make_space(divisions[i]);
    // Random coefficients probe the generic roughness the bounds cover;
    // smooth interpolants would show faster, non-representative decay.
    CounterRng rng(seed, static_cast<std::uint64_t>(divisions[i]));
    MorleyFunction v{space, {}};
    v.coeffs.resize(space->dof_count());
    for (double& c : v.coeffs) c = rng.normal();
    const ArgyrisFunction smoothed = enrich(v);
    report.rows[i] = {double(divisions[i]),
                      1.0 / divisions[i],
                      broken_distance(v, smoothed, 0),
                      broken_distance(v, smoothed, 1),
                      broken_distance(v, smoothed, 2),
                      hat_distance_n(v, smoothed, probes),
                      h2_seminorm(v)};
  });

  std::vector<double> logh, d0, d1, d2, hat;
  for (const auto& row : report.rows) {
    logh.push_back(std::log(row[1]));
    d0.push_back(std::log(row[2] / row[6]));
    d1.push_back(std::log(row[3] / row[6]));
    d2.push_back(std::log(row[4] / row[6]));
    hat.push_back(std::log(row[5] / row[6]));
  }
  add_entry(report.config, "seed", seed);
  add_entry(report.config, "meshes", static_cast<int>(divisions.size()));
  add_entry(report.config, "probe_points", static_cast<int>(probes.size()));
  add_entry(report.summary, "order_m0", fit_line(logh, d0).slope);
  add_entry(report.summary, "order_m1", fit_line(logh, d1).slope);
  add_entry(report.summary, "order_m2", fit_line(logh, d2).slope);
  add_entry(report.summary, "order_hat", fit_line(logh, hat).slope);
  report.plot = ReportPlot{1,    {2, 3, 4, 5},        true,
                           true, "smoothing distances", "h", "distance"};
  report.wall_seconds = timer.seconds();
  return report;
}

}  // namespace tpsfem
