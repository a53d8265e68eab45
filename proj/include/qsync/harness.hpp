#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsync/dynamics.hpp"
#include "qsync/network.hpp"
#include "qsync/params.hpp"

namespace qsync {

enum class Topology { PointToPoint, SmallWorld, ScaleFree, File };

/// How thermal occupancies are spread over the nodes of a small-world run.
///   Uniform: every node uses node.n_bath
///   Separate: independent draws from [0, bath_max] per node
///   Common: each quantum-linked group shares one draw
///   Local: deterministic ladder j * bath_max / (N - 1)
enum class BathPattern { Uniform, Separate, Common, Local };

struct SmallWorldConfig {
  std::size_t n = 12;
  std::size_t m = 2;
  double p = 0.1;
  BathPattern bath = BathPattern::Uniform;
  double bath_max = 0.5;
  /// When set, every quantum link except the first is cut at `release` and
  /// restored at `reconnect`.
  bool hold_first_pair = false;
  double release = 2500.0;
  double reconnect = 4000.0;
};

struct ScaleFreeConfig {
  std::size_t m0 = 3;
  std::size_t m = 2;
  std::size_t steps = 15;
  double omega_s = 1.0;
  /// Bare frequencies are omega_s + mu0 * degree + uniform(-jitter, jitter).
  double mu0 = 0.02;
  double jitter = 0.005;
  std::vector<double> join_times;
  std::size_t join_links = 2;
};

struct MetricSelection {
  bool negativity = true;
  bool network_fidelity = true;
  bool trace_distance = false;
  bool physicality = true;
};

/// Everything a run needs. Defaults reproduce the two-node reference set.
struct ScenarioConfig {
  std::string name = "point_to_point";
  Topology topology = Topology::PointToPoint;

  NodeParams node;
  std::map<std::size_t, NodeParams> node_overrides;
  CircuitParams circuit;
  double k_weight = 2.0;
  double mu = 0.02;

  SmallWorldConfig small_world;
  ScaleFreeConfig scale_free;
  std::string graph_file;
  std::vector<TopologyEvent> events;

  InitialSpec initial;
  double dt = 0.01;
  double t_end = 5000.0;
  std::size_t sample_every = 100;
  double window = 100.0;
  double late_fraction = 0.2;
  std::uint64_t seed = 1;

  std::vector<Edge> pairs;  ///< pair metrics; empty selects them per topology
  MetricSelection metrics;

  void validate() const;
};

/// A built scenario: model at t = 0, its schedule and the pairs to report.
struct Scenario {
  Model model;
  TopologySchedule schedule;
  InitialSpec initial;
  std::vector<Edge> pairs;
  std::size_t final_nodes = 0;
};

/// Builds networks and node lists. Random graph draws come from `rng` before
/// the initial state is drawn.
Scenario build_scenario(const ScenarioConfig& cfg, Rng& rng);

struct PairMetric {
  double q_minus = 0.0;
  double p_minus = 0.0;
  double sync = 0.0;
  double fidelity = 0.0;
};

/// Observations at one sample time. Entries for nodes that have not joined
/// yet are NaN.
struct MetricRecord {
  double t = 0.0;
  std::size_t nodes = 0;
  Eigen::VectorXcd a;
  Eigen::VectorXcd b;
  std::vector<PairMetric> pairs;
  Eigen::VectorXd negativity;
  double fnet = 0.0;
  double fmin = 0.0;          ///< worst pairwise fidelity among present nodes
  double fmin_initial = 0.0;  ///< same, restricted to nodes present at t = 0
  double tracedist = 0.0;
  double nu_min = 0.0;
};

struct RunResult {
  std::vector<Edge> pairs;
  std::size_t nodes = 0;
  MetricSelection metrics;
  std::vector<MetricRecord> records;
  std::optional<std::string> failure;  ///< set when integration blew up
  SimState final_state;
};

using RecordSink = std::function<void(const MetricRecord&)>;

/// Integrates the scenario and samples metrics every `sample_every` steps and
/// at t_end. Events fire before the sample taken at their time. A blowup is
/// stored in `failure` with all records up to it.
RunResult simulate(const ScenarioConfig& cfg, const RecordSink& sink = {});

/// Observations for one state; metric selection never feeds back into the
/// dynamics.
MetricRecord observe(const SimState& state, const std::vector<Edge>& pairs,
                     const MetricSelection& metrics, std::size_t total_nodes,
                     std::size_t initial_nodes);

/// Sliding trapezoidal mean over [t_i, t_i + window] for every sample whose
/// window fits inside the series; result[i] is reported at t_i.
std::vector<double> window_average(const std::vector<double>& t, const std::vector<double>& x,
                                   double window);

/// Trapezoidal mean of x over [t0, t1] (clipped to the sampled range).
double time_average(const std::vector<double>& t, const std::vector<double>& x, double t0,
                    double t1);

// ---------------------------------------------------------------------------
// Tabular output

std::vector<std::string> csv_columns(const RunResult& run);
std::vector<double> csv_row(const RunResult& run, const MetricRecord& rec);

/// Column-wise view of a run.
std::map<std::string, std::vector<double>> columns_of(const RunResult& run);

/// Late-window means and extremes plus pass/fail flags, as JSON text.
std::string summary_json(const ScenarioConfig& cfg, const RunResult& run);

// ---------------------------------------------------------------------------
// Reference scenarios

ScenarioConfig point_to_point_config();
ScenarioConfig small_world_config();
ScenarioConfig scale_free_config();

/// simulate() with the topology forced to the named kind.
RunResult run_point_to_point(ScenarioConfig cfg);
RunResult run_small_world(ScenarioConfig cfg);
RunResult run_scale_free(ScenarioConfig cfg);

}  // namespace qsync
