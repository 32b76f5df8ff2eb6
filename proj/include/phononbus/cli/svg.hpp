#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "phononbus/cli/csv.hpp"
#include "phononbus/errors.hpp"

namespace phononbus::cli {

namespace detail_svg {

// Fixed two-decimal pixel coordinates keep the SVG byte-stable; finer
// placement than 1/100 px is invisible anyway.
inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline double cell_value(const std::string& cell) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str()) {
    throw InvalidArgument("svg plot: cell '" + cell + "' is not numeric");
  }
  return v;
}

}  // namespace detail_svg

// Minimal line plot of one table column against another. Self-contained so
// the output needs no renderer beyond a browser, and fully deterministic:
// same table in, same bytes out.
inline std::string render_svg(const Table& table, std::size_t x_col = 0,
                              std::size_t y_col = 1) {
  if (x_col >= table.columns.size() || y_col >= table.columns.size()) {
    throw InvalidArgument("svg plot: column index out of range for table '" +
                          table.name + "'");
  }
  if (table.rows.size() < 2) {
    throw InvalidArgument("svg plot: table '" + table.name +
                          "' needs at least two rows");
  }

  std::vector<double> xs(table.rows.size());
  std::vector<double> ys(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    xs[i] = detail_svg::cell_value(table.rows[i][x_col]);
    ys[i] = detail_svg::cell_value(table.rows[i][y_col]);
  }
  double x_min = *std::min_element(xs.begin(), xs.end());
  double x_max = *std::max_element(xs.begin(), xs.end());
  double y_min = *std::min_element(ys.begin(), ys.end());
  double y_max = *std::max_element(ys.begin(), ys.end());
  if (x_max == x_min) x_max = x_min + 1.0;
  if (y_max == y_min) y_max = y_min + 1.0;

  const double width = 720.0;
  const double height = 440.0;
  const double left = 80.0;
  const double right = width - 24.0;
  const double top = 40.0;
  const double bottom = height - 56.0;

  const auto to_x = [&](double v) {
    return left + (v - x_min) / (x_max - x_min) * (right - left);
  };
  const auto to_y = [&](double v) {
    return bottom - (v - y_min) / (y_max - y_min) * (bottom - top);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 720 440\" "
         "font-family=\"sans-serif\" font-size=\"13\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"440\" fill=\"white\"/>\n";
  svg += "<text x=\"" + detail_svg::px((left + right) / 2.0) +
         "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + table.name +
         ": " + table.columns[y_col] + " vs " + table.columns[x_col] +
         "</text>\n";

  // Axes with min and max tick labels; a full tick engine buys nothing for
  // a quick-look artifact.
  svg += "<line x1=\"" + detail_svg::px(left) + "\" y1=\"" +
         detail_svg::px(bottom) + "\" x2=\"" + detail_svg::px(right) +
         "\" y2=\"" + detail_svg::px(bottom) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + detail_svg::px(left) + "\" y1=\"" +
         detail_svg::px(top) + "\" x2=\"" + detail_svg::px(left) + "\" y2=\"" +
         detail_svg::px(bottom) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<text x=\"" + detail_svg::px(left) + "\" y=\"" +
         detail_svg::px(bottom + 18.0) + "\" text-anchor=\"middle\">" +
         detail_svg::tick_label(x_min) + "</text>\n";
  svg += "<text x=\"" + detail_svg::px(right) + "\" y=\"" +
         detail_svg::px(bottom + 18.0) + "\" text-anchor=\"middle\">" +
         detail_svg::tick_label(x_max) + "</text>\n";
  svg += "<text x=\"" + detail_svg::px(left - 8.0) + "\" y=\"" +
         detail_svg::px(bottom + 4.0) + "\" text-anchor=\"end\">" +
         detail_svg::tick_label(y_min) + "</text>\n";
  svg += "<text x=\"" + detail_svg::px(left - 8.0) + "\" y=\"" +
         detail_svg::px(top + 4.0) + "\" text-anchor=\"end\">" +
         detail_svg::tick_label(y_max) + "</text>\n";
  svg += "<text x=\"" + detail_svg::px((left + right) / 2.0) + "\" y=\"" +
         detail_svg::px(height - 16.0) + "\" text-anchor=\"middle\">" +
         table.columns[x_col] + "</text>\n";

  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" "
         "points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) svg += ' ';
    svg += detail_svg::px(to_x(xs[i])) + "," + detail_svg::px(to_y(ys[i]));
  }
  svg += "\"/>\n</svg>\n";
  return svg;
}

}  // namespace phononbus::cli
