#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "tpsfem/argyris.hpp"
#include "tpsfem/csv.hpp"
#include "tpsfem/dense_tps.hpp"
#include "tpsfem/experiments.hpp"
#include "tpsfem/fields.hpp"
#include "tpsfem/mesh.hpp"
#include "tpsfem/morley.hpp"
#include "tpsfem/noise.hpp"
#include "tpsfem/norms.hpp"
#include "tpsfem/smoother.hpp"
#include "tpsfem/system.hpp"

namespace {

using namespace tpsfem;
namespace fs = std::filesystem;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

double summary_value(const ExperimentReport& report, const std::string& key) {
  for (const auto& [k, v] : report.summary)
    if (k == key) return parse_double(v);
  ADD_FAILURE() << "summary key missing: " << key;
  return std::numeric_limits<double>::quiet_NaN();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<const MorleySpace> make_space(int divisions) {
  return std::make_shared<MorleySpace>(
      std::make_shared<Mesh2D>(build_uniform_mesh(divisions)));
}

// The studies below double as the determinism corpus: their first run is
// stored under scratch/first and the final criterion regenerates each one
// and compares bytes.
fs::path scratch_root() {
  const fs::path dir = fs::temp_directory_path() / "tpsfem_acceptance";
  fs::create_directories(dir);
  return dir;
}

void store_first_run(const ExperimentReport& report, const std::string& name) {
  const fs::path dir = scratch_root() / "first" / name;
  fs::remove_all(dir);
  write_report(report, dir);
}

ExperimentReport sweep_study(std::uint64_t seed) {
  return run_lambda_sweep(2500, gaussian_noise(1.0, seed),
                          default_lambda_grid());
}

ExperimentReport auto_weight_gaussian() {
  return run_self_consistent(2500, gaussian_noise(1.0, 42));
}

ExperimentReport auto_weight_combined() {
  return run_self_consistent(40000, combined_noise(1.0, 10.0, 42));
}

ExperimentReport linearity_study() {
  return run_rate_study({2500, 10000, 40000}, gaussian_noise(1.0, 42), 10,
                        200.0);
}

ExperimentReport tail_study_at(double sigma) {
  return run_tail_study(400, gaussian_noise(sigma, 42),
                        optimal_lambda(sigma, 400, 200.0), 200);
}

struct StudyRun {
  std::string name;
  std::function<ExperimentReport()> make;
};

std::vector<StudyRun> tracked_studies() {
  return {
      {"sweep_seed1", [] { return sweep_study(1); }},
      {"sweep_seed2", [] { return sweep_study(2); }},
      {"sweep_seed3", [] { return sweep_study(3); }},
      {"auto_weight_gaussian", auto_weight_gaussian},
      {"auto_weight_combined", auto_weight_combined},
      {"linearity", linearity_study},
      {"tail_sigma_half", [] { return tail_study_at(0.5); }},
      {"tail_sigma_one", [] { return tail_study_at(1.0); }},
      {"tail_sigma_two", [] { return tail_study_at(2.0); }},
  };
}

TEST(Acceptance, AffineDataIsReproducedOnAnyMeshAndWeight) {
  const Stopwatch watch;
  SampleSet samples =
      generate_samples(100, SampleLayout::jittered_grid, NoiseModel{}, 5);
  for (int i = 0; i < samples.size(); ++i) {
    const Point2 p = samples.points[i];
    samples.values[i] = 0.7 - 0.3 * p.x + 1.1 * p.y;
    samples.truth[i] = samples.values[i];
  }
  SolverOptions options;
  options.tolerance = 1e-13;
  for (const int divisions : {3, 8, 17}) {
    const auto space = make_space(divisions);
    for (const double lambda : {1e-8, 1e-3, 1.0}) {
      const FitResult result = solve_fit(space, samples, lambda, options);
      EXPECT_LE(result.residual_n, 1e-10)
          << "divisions " << divisions << " lambda " << lambda;
      EXPECT_LE(result.seminorm_2h, 1e-10)
          << "divisions " << divisions << " lambda " << lambda;
    }
  }
  EXPECT_LT(watch.seconds(), 1.0);
}

TEST(Acceptance, IterativeSolverMatchesADenseFactorization) {
  const Stopwatch watch;
  const double lambda = 1e-3;
  SampleSet samples;
  CounterRng rng(2026, 0);
  for (int i = 0; i < 12; ++i) {
    const Point2 p{rng.uniform01(), rng.uniform01()};
    samples.points.push_back(p);
    samples.values.push_back(benchmark_value(p));
  }
  const auto space = make_space(2);
  const FitProblem problem = build_fit_problem(space, samples);
  const int dofs = space->dof_count();
  const double scale = 1.0 / samples.size();

  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dofs, dofs);
  const SparseSymmetric& stiffness = problem.stiffness;
  for (int r = 0; r < dofs; ++r)
    for (long long k = stiffness.row_ptr()[r]; k < stiffness.row_ptr()[r + 1];
         ++k)
      dense(r, stiffness.cols()[k]) += lambda * stiffness.values()[k];
  const DataOperator& data = problem.data;
  for (int i = 0; i < data.rows(); ++i)
    for (long long k = data.row_begin(i); k < data.row_end(i); ++k)
      for (long long l = data.row_begin(i); l < data.row_end(i); ++l)
        dense(data.entry_col(k), data.entry_col(l)) +=
            scale * data.entry_value(k) * data.entry_value(l);

  const std::vector<double> rhs = data.apply_transpose(samples.values, scale);
  const Eigen::VectorXd b =
      Eigen::Map<const Eigen::VectorXd>(rhs.data(), dofs);
  const Eigen::VectorXd direct = dense.fullPivLu().solve(b);

  SolverOptions options;
  options.tolerance = 1e-14;
  const FitResult result = solve_fit(problem, samples, lambda, options);
  const Eigen::VectorXd iterative =
      Eigen::Map<const Eigen::VectorXd>(result.fit.coeffs.data(), dofs);
  EXPECT_LE((iterative - direct).norm(), 1e-8 * direct.norm());
  EXPECT_LT(watch.seconds(), 1.0);
}

TEST(Acceptance, InterpolationOrdersSitInSecondOrderWindows) {
  const Stopwatch watch;
  const ExperimentReport report = run_interpolation_rates({8, 16, 32, 64});
  // The ladder's measured value orders run a full order faster than these
  // windows; the assertions keep the windows and report the discrepancy.
  const double order_l2 = summary_value(report, "order_l2");
  const double order_h1 = summary_value(report, "order_h1");
  const double order_n = summary_value(report, "order_n");
  EXPECT_GE(order_l2, 1.8);
  EXPECT_LE(order_l2, 2.2);
  EXPECT_GE(order_h1, 0.8);
  EXPECT_LE(order_h1, 1.2);
  EXPECT_GE(order_n, 1.8);
  EXPECT_LE(order_n, 2.2);
  EXPECT_LT(watch.seconds(), 30.0);
}

TEST(Acceptance, EnrichmentConvergesAtTheProvenOrdersAndStaysC1) {
  const Stopwatch watch;
  const ExperimentReport report = run_enrichment_rates({8, 16, 32, 64}, 2026);
  EXPECT_NEAR(summary_value(report, "order_m0"), 2.0, 0.3);
  EXPECT_NEAR(summary_value(report, "order_m1"), 1.0, 0.3);
  EXPECT_NEAR(summary_value(report, "order_hat"), 2.0, 0.3);

  const auto mesh = std::make_shared<Mesh2D>(build_uniform_mesh(8));
  const auto space = std::make_shared<MorleySpace>(mesh);
  MorleyFunction rough{space, std::vector<double>(space->dof_count())};
  CounterRng rng(2026, 8);
  for (double& c : rough.coeffs) c = rng.normal();
  const ArgyrisFunction smooth = enrich(rough);

  std::map<int, std::vector<int>> edge_tris;
  for (int t = 0; t < mesh->triangle_count(); ++t)
    for (int le = 0; le < 3; ++le)
      edge_tris[mesh->tri_edges(t)[le].edge].push_back(t);
  for (const auto& [eid, tris] : edge_tris) {
    if (tris.size() != 2) continue;
    const Edge& edge = mesh->edges()[eid];
    const Point2 pa = mesh->vertices()[edge.a];
    const Point2 pb = mesh->vertices()[edge.b];
    for (const double s : {0.15, 0.35, 0.5, 0.65, 0.85}) {
      const Point2 p{pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y)};
      const double v0 = eval(smooth, tris[0], p);
      const double v1 = eval(smooth, tris[1], p);
      ASSERT_NEAR(v0, v1, 1e-8 * (1.0 + std::abs(v0)));
      const Vec2 g0 = eval_gradient(smooth, tris[0], p);
      const Vec2 g1 = eval_gradient(smooth, tris[1], p);
      ASSERT_NEAR(g0.x, g1.x, 1e-8 * (1.0 + std::abs(g0.x)));
      ASSERT_NEAR(g0.y, g1.y, 1e-8 * (1.0 + std::abs(g0.y)));
    }
  }
  EXPECT_LT(watch.seconds(), 120.0);
}

TEST(Acceptance, MeshSmootherTracksTheKernelSmoother) {
  const Stopwatch watch;
  const double lambda = 1e-4;
  const SampleSet samples = make_grid_samples(20, 10, NoiseModel{});
  ASSERT_EQ(samples.size(), 200);

  const DenseTpsModel reference = fit_dense(samples, lambda);
  const auto space = make_space(mesh_divisions_for_lambda(lambda));
  const FitResult result = solve_fit(space, samples, lambda);

  std::vector<double> gaps(samples.points.size());
  for (std::size_t i = 0; i < gaps.size(); ++i)
    gaps[i] = hat_eval(result.fit, samples.points[i]) - reference.fitted[i];
  const double gap = empirical_norm(gaps);
  const double bound =
      3.0 * std::sqrt(lambda) * std::sqrt(reference.bending_energy);
  EXPECT_LE(gap, bound);
  EXPECT_LT(watch.seconds(), 10.0);
}

TEST(Acceptance, NoisySweepSelectsTheExpectedWeightDecade) {
  const Stopwatch watch;
  for (const std::uint64_t seed : {1, 2, 3}) {
    const ExperimentReport report = sweep_study(seed);
    store_first_run(report, "sweep_seed" + std::to_string(seed));
    const double best = summary_value(report, "best_lambda");
    EXPECT_TRUE(best == 1e-7 || best == 1e-6 || best == 1e-5)
        << "seed " << seed << " picked " << best;
  }
  EXPECT_LT(watch.seconds(), 300.0);
}

TEST(Acceptance, AutomaticWeightMatchesTheReferenceRun) {
  const Stopwatch watch;
  // Reference outcomes recorded for these exact configurations; the factor-3
  // and 5% windows absorb seed-to-seed variation.
  {
    const ExperimentReport report = auto_weight_gaussian();
    store_first_run(report, "auto_weight_gaussian");
    EXPECT_EQ(summary_value(report, "converged"), 1.0);
    EXPECT_LE(summary_value(report, "iterations"), 30.0);
    const double lambda = summary_value(report, "final_lambda");
    EXPECT_GE(lambda, 4.12e-6 / 3.0);
    EXPECT_LE(lambda, 4.12e-6 * 3.0);
    EXPECT_NEAR(summary_value(report, "final_residual_n"), 0.99,
                0.05 * 0.99);
  }
  {
    const ExperimentReport report = auto_weight_combined();
    store_first_run(report, "auto_weight_combined");
    EXPECT_EQ(summary_value(report, "converged"), 1.0);
    EXPECT_LE(summary_value(report, "iterations"), 30.0);
    const double lambda = summary_value(report, "final_lambda");
    EXPECT_GE(lambda, 2.16e-5 / 3.0);
    EXPECT_LE(lambda, 2.16e-5 * 3.0);
    EXPECT_NEAR(summary_value(report, "final_residual_n"), 10.07,
                0.05 * 10.07);
  }
  EXPECT_LT(watch.seconds(), 600.0);
}

TEST(Acceptance, MeanErrorIsLinearInTheRootWeight) {
  const Stopwatch watch;
  const ExperimentReport report = linearity_study();
  store_first_run(report, "linearity");
  EXPECT_EQ(summary_value(report, "sufficient_spread"), 1.0);
  EXPECT_GE(summary_value(report, "pearson_r"), 0.98);
  EXPECT_LT(watch.seconds(), 900.0);
}

TEST(Acceptance, MisfitTailDecaysLikeAGaussian) {
  const Stopwatch watch;
  const std::vector<std::pair<double, std::string>> levels{
      {0.5, "tail_sigma_half"}, {1.0, "tail_sigma_one"},
      {2.0, "tail_sigma_two"}};
  std::vector<double> psi2;
  for (const auto& [sigma, name] : levels) {
    const ExperimentReport report = tail_study_at(sigma);
    store_first_run(report, name);
    EXPECT_EQ(summary_value(report, "fit_ok"), 1.0) << "sigma " << sigma;
    EXPECT_GE(summary_value(report, "r_squared"), 0.9) << "sigma " << sigma;
    psi2.push_back(summary_value(report, "psi2"));
  }
  EXPECT_LT(psi2[0], psi2[1]);
  EXPECT_LT(psi2[1], psi2[2]);
  EXPECT_LT(watch.seconds(), 600.0);
}

TEST(Acceptance, StudyRerunsProduceIdenticalBytes) {
  for (const StudyRun& study : tracked_studies()) {
    const fs::path first = scratch_root() / "first" / study.name;
    if (!fs::exists(first)) store_first_run(study.make(), study.name);
    const fs::path second = scratch_root() / "second" / study.name;
    fs::remove_all(second);
    write_report(study.make(), second);

    int compared = 0;
    for (const auto& entry : fs::directory_iterator(first)) {
      if (entry.path().extension() != ".csv") continue;
      const std::string name = entry.path().filename().string();
      const std::string a = slurp(entry.path());
      const std::string b = slurp(second / name);
      EXPECT_FALSE(a.empty()) << study.name << "/" << name;
      EXPECT_EQ(a, b) << study.name << "/" << name;
      ++compared;
    }
    EXPECT_GE(compared, 2) << study.name;
  }
}

}  // namespace
