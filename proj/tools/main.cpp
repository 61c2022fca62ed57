#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tpsfem/csv.hpp"
#include "tpsfem/errors.hpp"
#include "tpsfem/experiments.hpp"
#include "tpsfem/mesh.hpp"
#include "tpsfem/morley.hpp"
#include "tpsfem/noise.hpp"
#include "tpsfem/smoother.hpp"
#include "tpsfem/system.hpp"

namespace {

using namespace tpsfem;

constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;

struct FitArgs {
  std::string input;
  std::string out;
  std::string summary;
  std::string lambda;
  std::string mesh_div = "auto";
  bool auto_lambda = false;
  int max_mesh = 200;
  long long cg_max_iter = 0;
};

struct EvalArgs {
  std::string fit;
  std::string points;
  std::string out;
};

struct SelectArgs {
  std::string input;
  std::string out;
  double lambda0 = 0.0;
  bool has_lambda0 = false;
  int max_mesh = 200;
};

struct ExperimentArgs {
  std::string out;
  std::uint64_t seed = 42;
  double sigma = 1.0;
  double sigma2 = 0.0;
  double rho = 200.0;
  double lambda = 0.0;
  bool has_lambda = false;
  double lambda0 = 0.0;
  bool has_lambda0 = false;
  int n = 2500;
  std::vector<int> ns;
  std::vector<int> divisions;
  int replicates = 10;
  int max_mesh = 200;
  bool large = false;
};

NoiseModel make_noise(const ExperimentArgs& args) {
  if (args.sigma2 > 0.0)
    return combined_noise(args.sigma, args.sigma2, args.seed);
  if (args.sigma > 0.0) return gaussian_noise(args.sigma, args.seed);
  NoiseModel none;
  none.seed = args.seed;
  return none;
}

int parse_divisions(const std::string& text) {
  int value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end || value < 1)
    throw InvalidArgument("mesh divisions must be a positive integer or 'auto'");
  return value;
}

std::shared_ptr<const MorleySpace> make_space(int divisions) {
  auto mesh = std::make_shared<Mesh2D>(build_uniform_mesh(divisions));
  return std::make_shared<MorleySpace>(mesh);
}

void write_fit_summary(const std::string& path, const SampleSet& samples,
                       const FitResult& fit, int divisions,
                       const LambdaTrace* trace) {
  CsvTable table;
  table.header = {"key", "value"};
  table.rows.push_back({"n", std::to_string(samples.size())});
  table.rows.push_back({"lambda", format_double(fit.lambda)});
  table.rows.push_back({"mesh_div", std::to_string(divisions)});
  table.rows.push_back({"residual_n", format_double(fit.residual_n)});
  table.rows.push_back({"seminorm_2h", format_double(fit.seminorm_2h)});
  table.rows.push_back({"energy", format_double(fit.energy)});
  table.rows.push_back({"cg_iterations", std::to_string(fit.iterations)});
  if (trace) {
    table.rows.push_back(
        {"weight_iterations",
         std::to_string(static_cast<int>(trace->iterates.size()))});
    table.rows.push_back({"converged", trace->converged ? "1" : "0"});
  }
  write_csv(path, table);
}

int run_fit(const FitArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  if (args.auto_lambda == !args.lambda.empty())
    throw InvalidArgument("give exactly one of --lambda and --auto");

  const SampleSet samples = read_samples(args.input);
  FitResult fit;
  int divisions = 0;
  std::optional<LambdaTrace> trace;
  if (args.auto_lambda) {
    if (args.mesh_div != "auto")
      throw InvalidArgument("--mesh-div must stay auto when --auto is set");
    SmootherConfig config;
    config.max_mesh_divisions = args.max_mesh;
    trace = self_consistent_lambda(samples, {}, config);
    if (!trace->converged)
      throw NoConvergence("weight iteration hit its iteration cap");
    fit = trace->fit;
    divisions = trace->iterates.back().mesh_divisions;
  } else {
    const double lambda = parse_double(args.lambda);
    divisions = args.mesh_div == "auto"
                    ? std::min(mesh_divisions_for_lambda(lambda), args.max_mesh)
                    : parse_divisions(args.mesh_div);
    SolverOptions options;
    options.max_iterations = args.cg_max_iter;
    fit = solve_fit(make_space(divisions), samples, lambda, options);
  }

  write_morley(args.out, fit.fit);
  if (!args.summary.empty())
    write_fit_summary(args.summary, samples, fit, divisions,
                      trace ? &*trace : nullptr);

  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  std::cout << "fit: n=" << samples.size()
            << " lambda=" << format_double(fit.lambda)
            << " mesh_div=" << divisions
            << " residual_n=" << format_double(fit.residual_n)
            << " seminorm_2h=" << format_double(fit.seminorm_2h) << " ("
            << elapsed.count() << "s)\n";
  return 0;
}

int run_eval(const EvalArgs& args) {
  const MorleyFunction fit = read_morley(args.fit);

  const CsvTable table = read_csv(args.points);
  if (table.header.size() < 2 || table.header[0] != "x" ||
      table.header[1] != "y")
    throw IoError("points file must start with x,y columns: " + args.points);

  CsvTable out;
  out.header = {"x", "y", "value"};
  for (const auto& row : table.rows) {
    const Point2 p{parse_double(row[0]), parse_double(row[1])};
    out.rows.push_back(
        {format_double(p.x), format_double(p.y), format_double(hat_eval(fit, p))});
  }
  write_csv(args.out, out);
  std::cout << "eval: " << out.rows.size() << " points\n";
  return 0;
}

int run_select(const SelectArgs& args) {
  const auto start = std::chrono::steady_clock::now();
  const SampleSet samples = read_samples(args.input);
  SmootherConfig config;
  config.max_mesh_divisions = args.max_mesh;
  std::optional<double> lambda0;
  if (args.has_lambda0) lambda0 = args.lambda0;
  const LambdaTrace trace = self_consistent_lambda(samples, lambda0, config);
  write_trace(args.out, trace);
  if (!trace.converged)
    throw NoConvergence("weight iteration hit its iteration cap");

  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  std::cout << "select-lambda: lambda=" << format_double(trace.final_lambda)
            << " iterations=" << trace.iterates.size()
            << " residual_n=" << format_double(trace.fit.residual_n) << " ("
            << elapsed.count() << "s)\n";
  return 0;
}

void finish_experiment(const ExperimentReport& report,
                       const std::string& out_dir) {
  write_report(report, out_dir);
  std::cout << report.id << ": wrote " << out_dir << " (" << report.wall_seconds
            << "s)\n";
  for (const auto& [key, value] : report.summary)
    std::cout << "  " << key << " = " << value << "\n";
}

int run_experiment(const std::string& kind, const ExperimentArgs& args) {
  if (kind == "ex1") {
    finish_experiment(run_lambda_sweep(args.n, make_noise(args),
                                       default_lambda_grid(), args.max_mesh),
                      args.out);
  } else if (kind == "ex2") {
    std::vector<int> ns = args.ns.empty() ? std::vector<int>{2500, 10000, 40000}
                                          : args.ns;
    if (args.large) ns.push_back(90000);
    finish_experiment(run_rate_study(ns, make_noise(args), args.replicates,
                                     args.rho, args.max_mesh),
                      args.out);
  } else if (kind == "ex3") {
    std::optional<double> lambda0;
    if (args.has_lambda0) lambda0 = args.lambda0;
    SmootherConfig config;
    config.max_mesh_divisions = args.max_mesh;
    finish_experiment(
        run_self_consistent(args.n, make_noise(args), lambda0, config),
        args.out);
  } else if (kind == "tail") {
    const NoiseModel noise = make_noise(args);
    double lambda = args.lambda;
    if (!args.has_lambda)
      lambda = optimal_lambda(sub_gaussian_sigma(noise),
                              static_cast<std::size_t>(args.n), args.rho);
    if (!(lambda > 0.0))
      throw InvalidArgument("noiseless tail runs need an explicit --lambda");
    finish_experiment(
        run_tail_study(args.n, noise, lambda, args.replicates, args.max_mesh),
        args.out);
  } else if (kind == "rates") {
    finish_experiment(run_interpolation_rates(
                          args.divisions.empty() ? std::vector<int>{8, 16, 32, 64}
                                                 : args.divisions),
                      args.out);
  } else {
    finish_experiment(
        run_enrichment_rates(args.divisions.empty()
                                 ? std::vector<int>{8, 16, 32, 64}
                                 : args.divisions,
                             args.seed),
        args.out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thin smooth-surface reconstruction from scattered noisy data"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "Fit a surface to samples");
  fit->add_option("--input", fit_args.input, "Samples CSV (x,y,value[,truth])")
      ->required();
  fit->add_option("--lambda", fit_args.lambda, "Smoothing weight");
  fit->add_flag("--auto", fit_args.auto_lambda,
                "Choose the weight self-consistently");
  fit->add_option("--mesh-div", fit_args.mesh_div,
                  "Mesh divisions per side, or 'auto' to match the weight");
  fit->add_option("--out", fit_args.out, "Fitted coefficients CSV")->required();
  fit->add_option("--summary", fit_args.summary, "Optional summary CSV");
  fit->add_option("--max-mesh-div", fit_args.max_mesh,
                  "Cap for automatic mesh resolution");
  fit->add_option("--cg-max-iter", fit_args.cg_max_iter,
                  "Linear solver iteration budget (0: automatic)");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a fitted surface");
  eval->add_option("--fit", eval_args.fit, "Fitted coefficients CSV")
      ->required();
  eval->add_option("--points", eval_args.points, "Points CSV (x,y,...)")
      ->required();
  eval->add_option("--out", eval_args.out, "Values CSV")->required();

  SelectArgs select_args;
  CLI::App* select =
      app.add_subcommand("select-lambda", "Iterate the smoothing weight");
  select->add_option("--input", select_args.input, "Samples CSV")->required();
  select->add_option("--out", select_args.out, "Iteration trace CSV")
      ->required();
  CLI::Option* lambda0_opt =
      select->add_option("--lambda0", select_args.lambda0, "Starting weight");
  select->add_option("--max-mesh-div", select_args.max_mesh,
                     "Cap for automatic mesh resolution");

  ExperimentArgs exp_args;
  CLI::App* experiment =
      app.add_subcommand("experiment", "Run a canned study");
  experiment->require_subcommand(1);
  std::vector<std::pair<std::string, std::string>> kinds{
      {"ex1", "Misfit across the standard weight sweep"},
      {"ex2", "Mean misfit against the root weight over several n"},
      {"ex3", "Self-consistent weight iteration"},
      {"tail", "Survival curve of the misfit over replicates"},
      {"rates", "Interpolation accuracy ladder"},
      {"enrich-rates", "Smoothing-enrichment distance ladder"}};
  std::vector<CLI::App*> kind_apps;
  CLI::Option* lambda_opt = nullptr;
  CLI::Option* exp_lambda0_opt = nullptr;
  for (const auto& [name, description] : kinds) {
    CLI::App* sub = experiment->add_subcommand(name, description);
    sub->add_option("--out", exp_args.out, "Output directory")->required();
    sub->add_option("--seed", exp_args.seed, "Noise seed");
    sub->add_option("--sigma", exp_args.sigma, "Gaussian noise scale");
    sub->add_option("--sigma2", exp_args.sigma2,
                    "Second scale; makes the noise the combined kind");
    sub->add_option("--rho", exp_args.rho, "Roughness used by the balance rule");
    sub->add_option("--max-mesh-div", exp_args.max_mesh,
                    "Cap for automatic mesh resolution");
    if (name == "ex1" || name == "ex3" || name == "tail")
      sub->add_option("--n", exp_args.n, "Sample count (perfect square)");
    if (name == "ex2")
      sub->add_option("--n", exp_args.ns, "Sample counts (repeatable)");
    if (name == "ex2" || name == "tail")
      sub->add_option("--replicates", exp_args.replicates, "Fits per point");
    if (name == "ex2")
      sub->add_flag("--large", exp_args.large, "Append the 90000-sample point");
    if (name == "ex3")
      exp_lambda0_opt =
          sub->add_option("--lambda0", exp_args.lambda0, "Starting weight");
    if (name == "tail")
      lambda_opt = sub->add_option("--lambda", exp_args.lambda,
                                   "Weight for every replicate fit");
    if (name == "rates" || name == "enrich-rates")
      sub->add_option("--divisions", exp_args.divisions,
                      "Mesh divisions ladder (repeatable)");
    kind_apps.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInput;
  }

  // Defaults below depend on the chosen study.
  for (std::size_t i = 0; i < kind_apps.size(); ++i) {
    if (!kind_apps[i]->parsed()) continue;
    const std::string& kind = kinds[i].first;
    if (kind == "tail") {
      if (kind_apps[i]->count("--n") == 0) exp_args.n = 400;
      if (kind_apps[i]->count("--replicates") == 0) exp_args.replicates = 200;
      exp_args.has_lambda = lambda_opt && lambda_opt->count() > 0;
    }
    if (kind == "ex3")
      exp_args.has_lambda0 = exp_lambda0_opt && exp_lambda0_opt->count() > 0;
  }
  select_args.has_lambda0 = lambda0_opt->count() > 0;

  try {
    if (fit->parsed()) return run_fit(fit_args);
    if (eval->parsed()) return run_eval(eval_args);
    if (select->parsed()) return run_select(select_args);
    for (std::size_t i = 0; i < kind_apps.size(); ++i)
      if (kind_apps[i]->parsed())
        return run_experiment(kinds[i].first, exp_args);
    std::cerr << "no subcommand selected\n";
    return kExitInput;
  } catch (const NoConvergence& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const IllConditionedSystem& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const DegenerateElement& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
