#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tpsfem/geometry.hpp"

namespace tpsfem {

/// One plotted series: points in data coordinates, drawn as a polyline when
/// `line` is set and as circles otherwise.
struct SvgSeries {
  std::string label;
  std::vector<Point2> points;
  bool line = true;
};

struct SvgChartOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 440;
};

/// Self-contained single-file chart; best-effort companion to the CSV data.
/// Log axes require strictly positive coordinates on that axis.
void write_svg_chart(const std::filesystem::path& path,
                     const std::vector<SvgSeries>& series,
                     const SvgChartOptions& options);

}  // namespace tpsfem
