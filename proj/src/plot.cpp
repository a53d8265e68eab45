#include "qsync/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "qsync/errors.hpp"
#include "qsync/harness.hpp"

namespace qsync {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span, int target) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
  void pad() {
    if (empty()) {
      lo = 0.0;
      hi = 1.0;
    } else if (lo == hi) {
      const double d = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
      lo -= d;
      hi += d;
    }
  }
};

std::string tick_label(double v, double step) {
  if (std::abs(v) < 1e-12 * step) v = 0.0;
  return fmt::format("{:g}", v);
}

}  // namespace

std::size_t CsvTable::index_of(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    std::string list;
    for (const auto& c : columns) list += (list.empty() ? "" : ",") + c;
    throw ConfigError(fmt::format("unknown column '{}'; available: {}", name, list));
  }
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto c = index_of(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.columns.empty()) {
      table.columns = split(line, ',');
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != table.columns.size()) {
      throw ConfigError(fmt::format("csv line {}: expected {} cells, got {}", lineno,
                                    table.columns.size(), cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& cell : cells) {
      if (cell.empty() || cell == "nan") {
        row.push_back(kNaN);
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size()) {
        throw ConfigError(fmt::format("csv line {}: cannot read '{}' as a number", lineno, cell));
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw ConfigError("csv has no header line");
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open csv '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

std::string render_svg(const std::vector<Series>& series, const PlotStyle& style) {
  const double left = 70.0;
  const double right = 20.0;
  const double top = style.title.empty() ? 20.0 : 40.0;
  const double bottom = 50.0;
  const double pw = style.width - left - right;
  const double ph = style.height - top - bottom;

  Range xr;
  Range yr;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) {
        xr.add(s.x[i]);
        yr.add(s.y[i]);
      }
    }
  }
  xr.pad();
  yr.pad();
  const double xstep = nice_step(xr.hi - xr.lo, 6);
  const double ystep = nice_step(yr.hi - yr.lo, 5);
  xr.lo = std::floor(xr.lo / xstep) * xstep;
  xr.hi = std::ceil(xr.hi / xstep) * xstep;
  yr.lo = std::floor(yr.lo / ystep) * ystep;
  yr.hi = std::ceil(yr.hi / ystep) * ystep;

  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
      style.width, style.height);
  if (!style.title.empty()) {
    out += fmt::format("<text x=\"{:.2f}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       left + pw / 2.0, escape(style.title));
  }

  out += "<g class=\"axes\" stroke=\"#444\" fill=\"none\">\n";
  out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", left,
                     top + ph, left + pw, top + ph);
  out += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\"/>\n", left, top,
                     left, top + ph);
  out += "</g>\n<g class=\"ticks\" fill=\"#222\">\n";
  const auto nx = static_cast<long>(std::llround((xr.hi - xr.lo) / xstep));
  for (long i = 0; i <= nx; ++i) {
    const double v = xr.lo + static_cast<double>(i) * xstep;
    const double x = px(v);
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#444\"/>"
        "<text x=\"{0:.2f}\" y=\"{3:.2f}\" text-anchor=\"middle\">{4}</text>\n",
        x, top + ph, top + ph + 5.0, top + ph + 18.0, tick_label(v, xstep));
  }
  const auto ny = static_cast<long>(std::llround((yr.hi - yr.lo) / ystep));
  for (long i = 0; i <= ny; ++i) {
    const double v = yr.lo + static_cast<double>(i) * ystep;
    const double y = py(v);
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#444\"/>"
        "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5}</text>\n",
        left - 5.0, y, left, left - 8.0, y + 4.0, tick_label(v, ystep));
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                     left + pw / 2.0, top + ph + 38.0, escape(style.x_label));
  out += "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    out += fmt::format("<g class=\"series\" data-label=\"{}\">\n", escape(s.label));
    std::string points;
    auto flush = [&]() {
      if (!points.empty()) {
        out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
                           color, points);
      }
      points.clear();
    };
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.2f},{:.2f}", px(s.x[i]), py(s.y[i]));
    }
    flush();
    out += "</g>\n";
    const double ly = top + 14.0 + 16.0 * static_cast<double>(k);
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"{3}\" "
        "stroke-width=\"2\"/><text x=\"{4:.2f}\" y=\"{5:.2f}\">{6}</text>\n",
        left + pw - 150.0, ly, left + pw - 130.0, color, left + pw - 125.0, ly + 4.0,
        escape(s.label));
  }
  out += "</svg>\n";
  return out;
}

std::string render_columns(const CsvTable& table, const std::vector<std::string>& columns,
                           double window, const PlotStyle& style) {
  if (table.rows.empty()) throw ConfigError("csv has no data rows");
  if (columns.empty()) throw ConfigError("no columns selected for plotting");
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(table.index_of(c));
  const auto x = table.column(table.columns.front());
  std::vector<Series> series;
  for (std::size_t k = 0; k < columns.size(); ++k) {
    series.push_back({columns[k], x, table.column(columns[k])});
  }
  if (window > 0.0) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      const auto avg = window_average(x, series[k].y, window);
      Series s{fmt::format("{} (avg {:g})", columns[k], window),
               std::vector<double>(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(avg.size())),
               avg};
      series.push_back(std::move(s));
    }
  }
  PlotStyle st = style;
  if (st.x_label.empty() || st.x_label == "t") st.x_label = table.columns.front();
  return render_svg(series, st);
}

}  // namespace qsync
