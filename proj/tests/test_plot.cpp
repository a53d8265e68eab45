#include <doctest.h>

#include <string>

#include "qsync/errors.hpp"
#include "qsync/plot.hpp"

using namespace qsync;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

std::string points_of_first_polyline(const std::string& svg) {
  const auto start = svg.find("points=\"", svg.find("<polyline"));
  const auto end = svg.find('"', start + 8);
  return svg.substr(start + 8, end - start - 8);
}

}  // namespace

TEST_CASE("two-point series") {
  const auto table = parse_csv("t,y\n0,0\n1,1\n");
  const auto svg = render_columns(table, {"y"}, 0.0, {});
  CHECK(count(svg, "<polyline") == 1);
  CHECK(count(points_of_first_polyline(svg), ",") == 2);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg == render_columns(table, {"y"}, 0.0, {}));
}

TEST_CASE("gaps split polylines") {
  const auto table = parse_csv("t,y\n0,0\n1,nan\n2,1\n3,2\n");
  const auto svg = render_columns(table, {"y"}, 0.0, {});
  CHECK(count(svg, "<polyline") == 2);
}

TEST_CASE("window overlay adds a series") {
  std::string csv = "t,y\n";
  for (int k = 0; k <= 10; ++k) csv += std::to_string(k) + "," + std::to_string(k % 3) + "\n";
  const auto svg = render_columns(parse_csv(csv), {"y"}, 4.0, {});
  CHECK(count(svg, "class=\"series\"") == 2);
  CHECK(svg.find("y (avg 4)") != std::string::npos);
}

TEST_CASE("csv and column errors") {
  CHECK_THROWS_AS(render_columns(parse_csv("t,y\n"), {"y"}, 0.0, {}), ConfigError);
  CHECK_THROWS_WITH_AS(render_columns(parse_csv("t,y\n0,1\n"), {"z"}, 0.0, {}),
                       doctest::Contains("available: t,y"), ConfigError);
  CHECK_THROWS_AS(parse_csv("t,y\n0\n"), ConfigError);
  CHECK_THROWS_AS(parse_csv("t,y\n0,abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_csv(""), ConfigError);
}

TEST_CASE("titles are escaped") {
  PlotStyle style;
  style.title = "a<b & c";
  const auto svg = render_columns(parse_csv("t,y\n0,0\n1,1\n"), {"y"}, 0.0, style);
  CHECK(svg.find("a&lt;b &amp; c") != std::string::npos);
}
