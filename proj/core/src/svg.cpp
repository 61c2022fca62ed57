#include "tpsfem/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tpsfem/errors.hpp"

namespace tpsfem {

namespace {

constexpr int kMarginLeft = 64;
constexpr int kMarginRight = 16;
constexpr int kMarginTop = 32;
constexpr int kMarginBottom = 48;

const char* kColors[] = {"#1f6feb", "#d1242f", "#1a7f37", "#9a6700",
                         "#8250df", "#bf3989"};

std::string trim_number(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

void write_svg_chart(const std::filesystem::path& path,
                     const std::vector<SvgSeries>& series,
                     const SvgChartOptions& options) {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  bool any = false;
  const auto tx = [&options](double x) {
    if (!options.log_x) return x;
    if (!(x > 0.0)) throw InvalidArgument("svg: log axis needs positive x");
    return std::log10(x);
  };
  const auto ty = [&options](double y) {
    if (!options.log_y) return y;
    if (!(y > 0.0)) throw InvalidArgument("svg: log axis needs positive y");
    return std::log10(y);
  };
  for (const SvgSeries& s : series) {
    for (const Point2& p : s.points) {
      const double x = tx(p.x), y = ty(p.y);
      if (!any) {
        x_lo = x_hi = x;
        y_lo = y_hi = y;
        any = true;
      } else {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
  }
  if (!any) throw InvalidArgument("svg: nothing to plot");
  if (x_hi - x_lo < 1e-300) x_hi = x_lo + 1.0;
  if (y_hi - y_lo < 1e-300) y_hi = y_lo + 1.0;

  const double plot_w = options.width - kMarginLeft - kMarginRight;
  const double plot_h = options.height - kMarginTop - kMarginBottom;
  const auto px = [&](double x) {
    return kMarginLeft + plot_w * (tx(x) - x_lo) / (x_hi - x_lo);
  };
  const auto py = [&](double y) {
    return kMarginTop + plot_h * (1.0 - (ty(y) - y_lo) / (y_hi - y_lo));
  };

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
      << "\" height=\"" << options.height << "\" viewBox=\"0 0 "
      << options.width << " " << options.height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << options.width / 2 << "\" y=\"20\" font-size=\"14\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\">" << options.title
      << "</text>\n";

  // Axes with end labels (log axes show the original values).
  const int x0 = kMarginLeft, y0 = options.height - kMarginBottom;
  const int x1 = options.width - kMarginRight, y1 = kMarginTop;
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
      << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
      << "\" y2=\"" << y1 << "\" stroke=\"black\"/>\n";
  const auto back_x = [&](double v) {
    return options.log_x ? std::pow(10.0, v) : v;
  };
  const auto back_y = [&](double v) {
    return options.log_y ? std::pow(10.0, v) : v;
  };
  out << "<text x=\"" << x0 << "\" y=\"" << y0 + 18
      << "\" font-size=\"11\" font-family=\"sans-serif\">"
      << trim_number(back_x(x_lo)) << "</text>\n";
  out << "<text x=\"" << x1 << "\" y=\"" << y0 + 18
      << "\" font-size=\"11\" text-anchor=\"end\" "
         "font-family=\"sans-serif\">"
      << trim_number(back_x(x_hi)) << "</text>\n";
  out << "<text x=\"" << x0 - 6 << "\" y=\"" << y0
      << "\" font-size=\"11\" text-anchor=\"end\" "
         "font-family=\"sans-serif\">"
      << trim_number(back_y(y_lo)) << "</text>\n";
  out << "<text x=\"" << x0 - 6 << "\" y=\"" << y1 + 4
      << "\" font-size=\"11\" text-anchor=\"end\" "
         "font-family=\"sans-serif\">"
      << trim_number(back_y(y_hi)) << "</text>\n";
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << options.height - 12
      << "\" font-size=\"12\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\">"
      << options.x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << (y0 + y1) / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" transform=\"rotate(-90 14 "
      << (y0 + y1) / 2 << ")\">" << options.y_label << "</text>\n";

  int color = 0;
  double legend_y = kMarginTop + 8;
  for (const SvgSeries& s : series) {
    const char* c = kColors[color % 6];
    ++color;
    if (s.line && s.points.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << c
          << "\" stroke-width=\"1.5\" points=\"";
      for (const Point2& p : s.points) {
        out << px(p.x) << ',' << py(p.y) << ' ';
      }
      out << "\"/>\n";
    }
    for (const Point2& p : s.points) {
      out << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y)
          << "\" r=\"2.5\" fill=\"" << c << "\"/>\n";
    }
    if (!s.label.empty()) {
      out << "<text x=\"" << x1 - 4 << "\" y=\"" << legend_y
          << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << c
          << "\" font-family=\"sans-serif\">" << s.label << "</text>\n";
      legend_y += 14;
    }
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace tpsfem
