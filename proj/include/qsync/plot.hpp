#pragma once

#include <string>
#include <vector>

namespace qsync {

/// A numeric CSV table; empty cells read as NaN.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t index_of(const std::string& name) const;  ///< throws ConfigError
  std::vector<double> column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv(const std::string& path);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotStyle {
  int width = 800;
  int height = 480;
  std::string title;
  std::string x_label = "t";
};

/// Static SVG line chart: fixed viewport, ticked axes, one polyline per
/// finite run of each series, and a legend. Output depends only on input.
std::string render_svg(const std::vector<Series>& series, const PlotStyle& style = {});

/// Plots `columns` of `table` against its first column. A positive `window`
/// adds the sliding time average of every column as an extra series.
std::string render_columns(const CsvTable& table, const std::vector<std::string>& columns,
                           double window = 0.0, const PlotStyle& style = {});

}  // namespace qsync
