#include "tpsfem/csv.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpsfem/errors.hpp"
#include "tpsfem/mesh.hpp"
#include "tpsfem/morley.hpp"
#include "tpsfem/parallel.hpp"
#include "tpsfem/smoother.hpp"
#include "tpsfem/svg.hpp"

namespace {

using namespace tpsfem;
namespace fs = std::filesystem;

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "tpsfem_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::shared_ptr<const MorleySpace> make_space(int divisions) {
  auto mesh = std::make_shared<Mesh2D>(build_uniform_mesh(divisions));
  return std::make_shared<MorleySpace>(mesh);
}

TEST(Csv, NumberFormattingRoundTripsBitExactly) {
  std::mt19937_64 rng(97u);
  int checked = 0;
  while (checked < 2000) {
    const std::uint64_t bits = rng();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) continue;
    const double back = parse_double(format_double(v));
    std::uint64_t back_bits;
    std::memcpy(&back_bits, &back, sizeof back);
    ASSERT_EQ(bits, back_bits) << format_double(v);
    ++checked;
  }
}

TEST(Csv, NumberFormattingIsPlainForSimpleValues) {
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-0.25), "-0.25");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(parse_double("1e-3"), 1e-3);
}

TEST(Csv, NumberParserRejectsJunk) {
  EXPECT_THROW(parse_double(""), IoError);
  EXPECT_THROW(parse_double("abc"), IoError);
  EXPECT_THROW(parse_double("1.5x"), IoError);
  EXPECT_THROW(parse_double("1.5 "), IoError);
}

TEST(Csv, TableRoundTripsWithUnixLineEndings) {
  const fs::path path = temp_file("table.csv");
  CsvTable table;
  table.header = {"a", "b"};
  table.rows = {{"1", "x"}, {"2", "y"}};
  write_csv(path, table);

  const std::string raw = slurp(path);
  EXPECT_EQ(raw, "a,b\n1,x\n2,y\n");
  EXPECT_EQ(raw.find('\r'), std::string::npos);

  const CsvTable back = read_csv(path);
  EXPECT_EQ(back.header, table.header);
  EXPECT_EQ(back.rows, table.rows);
}

TEST(Csv, TableErrorsAreReported) {
  CsvTable ragged;
  ragged.header = {"a", "b"};
  ragged.rows = {{"1"}};
  EXPECT_THROW(write_csv(temp_file("ragged.csv"), ragged), InvalidArgument);

  const fs::path bad = temp_file("bad.csv");
  std::ofstream(bad, std::ios::binary) << "a,b\n1,2\n3\n";
  EXPECT_THROW(read_csv(bad), IoError);

  const fs::path empty = temp_file("empty.csv");
  std::ofstream(empty, std::ios::binary);
  EXPECT_THROW(read_csv(empty), IoError);

  EXPECT_THROW(read_csv(temp_file("does_not_exist.csv")), IoError);
}

TEST(Csv, SamplesRoundTripWithAndWithoutTruth) {
  SampleSet s;
  s.points = {{0.125, 0.25}, {0.5, 0.75}, {0.9, 0.1}};
  s.values = {1.5, -2.25, 0.0625};

  const fs::path plain = temp_file("samples_plain.csv");
  write_samples(plain, s);
  const SampleSet back = read_samples(plain);
  ASSERT_EQ(back.points.size(), s.points.size());
  EXPECT_FALSE(back.has_truth());
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    EXPECT_EQ(back.points[i].x, s.points[i].x);
    EXPECT_EQ(back.points[i].y, s.points[i].y);
    EXPECT_EQ(back.values[i], s.values[i]);
  }

  s.truth = {1.0, -2.0, 0.0};
  const fs::path with_truth = temp_file("samples_truth.csv");
  write_samples(with_truth, s);
  const SampleSet back2 = read_samples(with_truth);
  ASSERT_TRUE(back2.has_truth());
  EXPECT_EQ(back2.truth, s.truth);
}

TEST(Csv, SamplesReaderRejectsWrongHeader) {
  const fs::path bad = temp_file("samples_bad.csv");
  std::ofstream(bad, std::ios::binary) << "x,value,y\n0,0,0\n";
  EXPECT_THROW(read_samples(bad), IoError);
}

TEST(Csv, FittedFunctionRoundTripsAgainstInferredMesh) {
  const auto space = make_space(3);
  const MorleyFunction f = interpolate(
      space, [](Point2 p) { return p.x * p.x - 2.0 * p.x * p.y + 3.0 * p.y; },
      [](Point2 p) { return Vec2{2.0 * p.x - 2.0 * p.y, -2.0 * p.x + 3.0}; });

  const fs::path path = temp_file("fit.csv");
  write_morley(path, f);

  const MorleyFunction inferred = read_morley(path);
  ASSERT_TRUE(inferred.space != nullptr);
  EXPECT_EQ(inferred.space->dof_count(), space->dof_count());
  EXPECT_EQ(inferred.coeffs, f.coeffs);
  const Point2 probe{0.41, 0.57};
  EXPECT_DOUBLE_EQ(hat_eval(inferred, probe), hat_eval(f, probe));

  const MorleyFunction attached = read_morley(path, space);
  EXPECT_EQ(attached.space.get(), space.get());
  EXPECT_EQ(attached.coeffs, f.coeffs);
}

TEST(Csv, FittedFunctionReaderValidatesShape) {
  const auto space = make_space(2);
  MorleyFunction f;
  f.space = space;
  f.coeffs.assign(space->dof_count(), 1.0);
  const fs::path path = temp_file("fit_valid.csv");
  write_morley(path, f);

  const CsvTable table = read_csv(path);

  {
    CsvTable missing = table;
    missing.rows.pop_back();
    const fs::path p = temp_file("fit_missing.csv");
    write_csv(p, missing);
    EXPECT_THROW(read_morley(p), IoError);
  }
  {
    CsvTable dup = table;
    dup.rows.back() = dup.rows.front();
    const fs::path p = temp_file("fit_dup.csv");
    write_csv(p, dup);
    EXPECT_THROW(read_morley(p), IoError);
  }
  {
    CsvTable kind = table;
    kind.rows.front()[1] = "corner";
    const fs::path p = temp_file("fit_kind.csv");
    write_csv(p, kind);
    EXPECT_THROW(read_morley(p), IoError);
  }
  {
    // 10 vertices is not (m+1)^2 for any m, so no uniform mesh fits.
    CsvTable odd = table;
    odd.rows.resize(10);
    for (int i = 0; i < 10; ++i)
      odd.rows[i] = {std::to_string(i), "vertex", std::to_string(i), "1"};
    const fs::path p = temp_file("fit_odd.csv");
    write_csv(p, odd);
    EXPECT_THROW(read_morley(p), IoError);
  }

  MorleyFunction detached;
  detached.coeffs = {1.0, 2.0};
  EXPECT_THROW(write_morley(temp_file("fit_detached.csv"), detached),
               InvalidArgument);
}

TEST(Csv, TraceWriterEmitsOneRowPerIterate) {
  LambdaTrace trace;
  for (int k = 0; k < 3; ++k) {
    LambdaIterate it;
    it.k = k;
    it.lambda = 1e-3 / (k + 1);
    it.mesh_divisions = 8 * (k + 1);
    it.residual_n = 0.5 / (k + 1);
    it.seminorm_2h = 2.0 * (k + 1);
    trace.iterates.push_back(it);
  }
  const fs::path path = temp_file("trace.csv");
  write_trace(path, trace);

  const CsvTable table = read_csv(path);
  const std::vector<std::string> expected_header{"k", "lambda", "mesh_div",
                                                 "residual_n", "seminorm_2h"};
  EXPECT_EQ(table.header, expected_header);
  ASSERT_EQ(table.rows.size(), 3u);
  EXPECT_EQ(table.rows[1][0], "1");
  EXPECT_EQ(parse_double(table.rows[1][1]), trace.iterates[1].lambda);
  EXPECT_EQ(table.rows[2][2], "24");
}

TEST(Svg, ChartContainsDeclaredShapes) {
  SvgSeries curve;
  curve.label = "rate";
  curve.points = {{1.0, 1.0}, {2.0, 4.0}, {3.0, 9.0}};
  SvgSeries dots;
  dots.label = "data";
  dots.points = {{1.5, 2.0}, {2.5, 6.5}};
  dots.line = false;

  SvgChartOptions options;
  options.title = "convergence";
  options.x_label = "h";
  options.y_label = "error";
  const fs::path path = temp_file("chart.svg");
  write_svg_chart(path, {curve, dots}, options);

  const std::string body = slurp(path);
  EXPECT_NE(body.find("<svg"), std::string::npos);
  EXPECT_NE(body.find("</svg>"), std::string::npos);
  EXPECT_NE(body.find("polyline"), std::string::npos);
  EXPECT_NE(body.find("circle"), std::string::npos);
  EXPECT_NE(body.find("convergence"), std::string::npos);
  EXPECT_NE(body.find("rate"), std::string::npos);
}

TEST(Svg, LogAxesRequirePositiveData) {
  SvgSeries s;
  s.label = "bad";
  s.points = {{0.5, 0.0}, {1.0, 1.0}};
  SvgChartOptions options;
  options.log_y = true;
  EXPECT_THROW(write_svg_chart(temp_file("log_bad.svg"), {s}, options),
               InvalidArgument);
  EXPECT_THROW(write_svg_chart(temp_file("log_empty.svg"), {}, options),
               InvalidArgument);
}

TEST(Parallel, WorkerCountHonorsEnvironment) {
  ::setenv("TPS_THREADS", "3", 1);
  EXPECT_EQ(worker_count(), 3);
  ::setenv("TPS_THREADS", "junk", 1);
  EXPECT_GE(worker_count(), 1);
  ::setenv("TPS_THREADS", "0", 1);
  EXPECT_GE(worker_count(), 1);
  ::unsetenv("TPS_THREADS");
  EXPECT_GE(worker_count(), 1);
}

TEST(Parallel, LoopVisitsEveryIndexExactlyOnce) {
  ::setenv("TPS_THREADS", "4", 1);
  const int count = 1000;
  std::vector<int> hits(count, 0);
  parallel_for(count, [&](int i) { hits[i] += i + 1; });
  ::unsetenv("TPS_THREADS");
  for (int i = 0; i < count; ++i) ASSERT_EQ(hits[i], i + 1);
  parallel_for(0, [](int) { FAIL() << "empty loop must not call back"; });
}

TEST(Parallel, LoopPropagatesFirstException) {
  ::setenv("TPS_THREADS", "4", 1);
  std::atomic<int> calls{0};
  const auto run = [&] {
    parallel_for(64, [&](int i) {
      calls.fetch_add(1);
      if (i == 17) throw std::runtime_error("boom");
    });
  };
  EXPECT_THROW(run(), std::runtime_error);
  ::unsetenv("TPS_THREADS");
  EXPECT_GE(calls.load(), 1);
}

}  // namespace
