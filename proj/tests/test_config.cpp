#include <doctest.h>

#include "qsync/config.hpp"
#include "qsync/errors.hpp"

using namespace qsync;

TEST_CASE("required fields") {
  CHECK_THROWS_WITH_AS(parse_config_string(""), doctest::Contains("scenario, t_end"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_string("scenario = \"point_to_point\"\n"),
                       doctest::Contains("t_end"), ConfigError);
}

TEST_CASE("shipped reference config equals the built-in defaults") {
  const auto loaded = parse_config_file(QSYNC_SOURCE_DIR "/configs/fig2.cfg");
  const auto& c = loaded.scenario;
  const auto ref = point_to_point_config();
  CHECK(c.topology == Topology::PointToPoint);
  CHECK(c.t_end == ref.t_end);
  CHECK(c.dt == ref.dt);
  CHECK(c.sample_every == ref.sample_every);
  CHECK(c.k_weight == 2.0);
  CHECK(c.mu == 0.02);
  const NodeParams n;
  for (const auto* p : {&c.node, &ref.node}) {
    CHECK(p->omega_m == 1.0);
    CHECK(p->delta == 1.0);
    CHECK(p->g == 0.005);
    CHECK(p->kappa == 0.15);
    CHECK(p->gamma == 0.005);
    CHECK(p->drive == 10.0);
    CHECK(p->eta == 0.01);
    CHECK(p->n_bath == 0.0);
  }
  CHECK(c.circuit.epsilon == 0.18);
  CHECK(c.circuit.nu == 1.0);
  CHECK(c.circuit.drive == 26.7);
  CHECK(c.circuit.omega0 == 0.8);
  CHECK(c.initial.optical == InitialOptical::Vacuum);
  CHECK(loaded.plot.columns.size() == 4);
}

TEST_CASE("every shipped config parses") {
  for (const char* name : {"fig2", "fig3d_no_couplings", "thermal", "coherent", "small_world",
                           "small_world_switching", "scale_free"}) {
    CAPTURE(name);
    CHECK_NOTHROW(parse_config_file(std::string(QSYNC_SOURCE_DIR "/configs/") + name + ".cfg"));
  }
}

TEST_CASE("errors name key and line") {
  const std::string base = "scenario = \"point_to_point\"\nt_end = 10\n";
  CHECK_THROWS_WITH_AS(parse_config_string(base + "dt = -1\n"),
                       doctest::Contains("dt must be positive"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_string(base + "\n\nbogus = 1\n"),
                       doctest::Contains("line 5: bogus"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_string(base + "[node]\nkappa = \"x\"\n"),
                       doctest::Contains("kappa"), ConfigError);
  CHECK_THROWS_AS(parse_config_string(base + "dt = 0.01\ndt = 0.02\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string(base + "dt = \n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string(base + "[node\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("scenario = \"nowhere\"\nt_end = 1\n"), ConfigError);
}

TEST_CASE("sections and events") {
  const auto loaded = parse_config_string(R"(
scenario = "point_to_point"
t_end = 100
seed = 9

[node.1]
n_bath = 0.5

[coupling]
K = 0
mu = 0.04

[initial]
optical = "coherent"
alpha = [[1, 0], [10, 0.5]]

[[event]]
time = 50
kind = "disconnect_quantum"
a = 0
b = 1
)");
  const auto& c = loaded.scenario;
  CHECK(c.seed == 9);
  CHECK(c.k_weight == 0.0);
  CHECK(c.mu == 0.04);
  REQUIRE(c.node_overrides.count(1) == 1);
  CHECK(c.node_overrides.at(1).n_bath == 0.5);
  CHECK(c.node_overrides.at(1).kappa == 0.15);
  REQUIRE(c.initial.alpha.size() == 2);
  CHECK(c.initial.alpha[1] == Complex(10, 0.5));
  REQUIRE(c.events.size() == 1);
  CHECK(c.events[0].kind == EventKind::DisconnectQuantum);
  CHECK(c.events[0].time == 50.0);
}

TEST_CASE("overrides act like file entries") {
  auto table = parse_config_table("scenario = \"point_to_point\"\nt_end = 100\n");
  override_config(table, "coupling.mu", "0.01");
  override_config(table, "t_end", "20");
  const auto c = interpret_config(table).scenario;
  CHECK(c.mu == 0.01);
  CHECK(c.t_end == 20.0);
  CHECK(parse_config_value("[1, 2]").items.size() == 2);
  CHECK(parse_config_value("true").flag);
  CHECK(parse_config_value("\"x\"").text == "x");
}
