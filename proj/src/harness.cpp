#include "qsync/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qsync/errors.hpp"
#include "qsync/gaussian.hpp"

namespace qsync {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

NodeList node_list(const ScenarioConfig& cfg, std::size_t n) {
  NodeList nodes(n, cfg.node);
  for (const auto& [j, p] : cfg.node_overrides) {
    if (j >= n) {
      throw ConfigError(fmt::format("node override {} is outside the {}-node network", j, n));
    }
    nodes[j] = p;
  }
  return nodes;
}

void assign_baths(const SmallWorldConfig& sw, const Network& net, NodeList& nodes, Rng& rng) {
  const std::size_t n = nodes.size();
  switch (sw.bath) {
    case BathPattern::Uniform:
      break;
    case BathPattern::Separate:
      for (auto& p : nodes) p.n_bath = uniform(rng, 0.0, sw.bath_max);
      break;
    case BathPattern::Common: {
      std::vector<std::size_t> parent(n);
      std::iota(parent.begin(), parent.end(), std::size_t{0});
      for (auto [j, k] : net.quantum.edges()) parent[find_root(parent, j)] = find_root(parent, k);
      std::vector<double> value(n, -1.0);
      for (std::size_t j = 0; j < n; ++j) {
        const auto r = find_root(parent, j);
        if (value[r] < 0.0) value[r] = uniform(rng, 0.0, sw.bath_max);
        nodes[j].n_bath = value[r];
      }
      break;
    }
    case BathPattern::Local:
      for (std::size_t j = 0; j < n; ++j) {
        nodes[j].n_bath = n > 1 ? sw.bath_max * static_cast<double>(j) / static_cast<double>(n - 1)
                                : 0.0;
      }
      break;
  }
}

Eigen::MatrixXcd padded_coupling(const Network& net, std::size_t nodes) {
  const Eigen::MatrixXcd g = coupling_matrix(net.classical, net.quantum);
  const auto dim = static_cast<Eigen::Index>(4 * nodes);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  out.topLeftCorner(g.rows(), g.cols()) = g;
  return out;
}

// Running integral of the piecewise-linear interpolant of x.
class Integral {
 public:
  Integral(const std::vector<double>& t, const std::vector<double>& x) : t_(t), x_(x) {
    if (t.size() != x.size()) throw ConfigError("time and value series differ in length");
    cum_.assign(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
      cum_[i] = cum_[i - 1] + 0.5 * (x[i] + x[i - 1]) * (t[i] - t[i - 1]);
    }
  }

  double at(double s) const {
    if (t_.empty()) return 0.0;
    if (s <= t_.front()) return 0.0;
    if (s >= t_.back()) return cum_.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), s) - t_.begin());
    const std::size_t lo = hi - 1;
    const double h = t_[hi] - t_[lo];
    const double frac = h > 0.0 ? (s - t_[lo]) / h : 0.0;
    const double xs = x_[lo] + frac * (x_[hi] - x_[lo]);
    return cum_[lo] + 0.5 * (x_[lo] + xs) * (s - t_[lo]);
  }

  double value(double s) const {
    if (s <= t_.front()) return x_.front();
    if (s >= t_.back()) return x_.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(t_.begin(), t_.end(), s) - t_.begin());
    const std::size_t lo = hi - 1;
    const double h = t_[hi] - t_[lo];
    return h > 0.0 ? x_[lo] + (s - t_[lo]) / h * (x_[hi] - x_[lo]) : x_[lo];
  }

 private:
  const std::vector<double>& t_;
  const std::vector<double>& x_;
  std::vector<double> cum_;
};

std::string pair_tag(const Edge& e) { return fmt::format("{}_{}", e.first, e.second); }

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void ScenarioConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end must be nonnegative");
  if (sample_every == 0) throw ConfigError("sample_every must be at least 1");
  if (!(window > 0.0)) throw ConfigError("window must be positive");
  if (!(late_fraction > 0.0 && late_fraction <= 1.0)) {
    throw ConfigError("late_fraction must lie in (0, 1]");
  }
  if (!(k_weight >= 0.0)) throw ConfigError("coupling K must be nonnegative");
  if (!(mu >= 0.0)) throw ConfigError("coupling mu must be nonnegative");
  node.validate();
  for (const auto& [j, p] : node_overrides) p.validate();
  circuit.validate();
  for (const auto& ev : events) {
    if (!(ev.time >= 0.0) || ev.time > t_end) {
      throw ConfigError(fmt::format("event time {} lies outside [0, t_end = {}]", ev.time, t_end));
    }
  }
  if (topology == Topology::SmallWorld) {
    if (small_world.n < 3) throw ConfigError("small_world.n must be at least 3");
    if (!(small_world.p >= 0.0 && small_world.p <= 1.0)) {
      throw ConfigError("small_world.p must lie in [0, 1]");
    }
    if (!(small_world.bath_max >= 0.0)) throw ConfigError("small_world.bath_max must be >= 0");
    if (small_world.hold_first_pair && !(small_world.release < small_world.reconnect)) {
      throw ConfigError("small_world.release must precede small_world.reconnect");
    }
  }
  if (topology == Topology::ScaleFree) {
    if (scale_free.m == 0 || scale_free.m > scale_free.m0) {
      throw ConfigError("scale_free.m must lie in 1..m0");
    }
    if (!(scale_free.omega_s > 0.0)) throw ConfigError("scale_free.omega_s must be positive");
    if (!(scale_free.mu0 > 0.0)) throw ConfigError("scale_free.mu0 must be positive");
    if (!(scale_free.jitter >= 0.0)) throw ConfigError("scale_free.jitter must be >= 0");
    for (double tj : scale_free.join_times) {
      if (!(tj >= 0.0) || tj > t_end) {
        throw ConfigError(fmt::format("scale_free join time {} lies outside [0, t_end]", tj));
      }
    }
  }
  if (topology == Topology::File && graph_file.empty()) {
    throw ConfigError("topology 'file' needs graph.file");
  }
}

Scenario build_scenario(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  Scenario sc;
  sc.model.circuit = cfg.circuit;
  std::vector<TopologyEvent> events = cfg.events;

  switch (cfg.topology) {
    case Topology::PointToPoint: {
      sc.model.nodes = node_list(cfg, 2);
      sc.model.net = Network{ClassicalGraph(2), QuantumGraph(2)};
      if (cfg.k_weight > 0.0) sc.model.net.classical.connect(0, 1, cfg.k_weight);
      if (cfg.mu > 0.0) sc.model.net.quantum.connect(0, 1, cfg.mu);
      sc.pairs = {{0, 1}};
      break;
    }
    case Topology::SmallWorld: {
      const auto& sw = cfg.small_world;
      sc.model.net = gen_small_world(sw.n, sw.m, sw.p, cfg.k_weight, cfg.mu, rng);
      sc.model.nodes = node_list(cfg, sw.n);
      assign_baths(sw, sc.model.net, sc.model.nodes, rng);
      sc.pairs = sc.model.net.quantum.edges();
      if (sw.hold_first_pair) {
        for (std::size_t e = 1; e < sc.pairs.size(); ++e) {
          const auto [j, k] = sc.pairs[e];
          events.push_back({sw.release, EventKind::DisconnectQuantum, j, k, 0.0, {}});
          events.push_back({sw.reconnect, EventKind::ConnectQuantum, j, k, cfg.mu, {}});
        }
      }
      break;
    }
    case Topology::ScaleFree: {
      const auto& sf = cfg.scale_free;
      Adjacency adj = gen_scale_free(sf.m0, sf.m, sf.steps, rng);
      const auto deg = adj.degrees();
      std::vector<double> freq(adj.nodes);
      for (std::size_t j = 0; j < adj.nodes; ++j) {
        freq[j] = sf.omega_s + sf.mu0 * static_cast<double>(deg[j]) +
                  uniform(rng, -sf.jitter, sf.jitter);
      }
      auto solved = solve_sync_conditions(freq, adj, sf.omega_s);
      if (auto* bad = std::get_if<SyncInfeasible>(&solved)) {
        throw InfeasibleError(fmt::format("scale-free couplings infeasible: {}", bad->reason));
      }
      auto& sol = std::get<SyncSolution>(solved);
      sc.model.nodes = node_list(cfg, adj.nodes);
      for (auto& p : sc.model.nodes) p.omega_m = sf.omega_s;
      sc.model.net.classical = ClassicalGraph(adj.nodes);
      for (auto [j, k] : adj.edges) sc.model.net.classical.connect(j, k, cfg.k_weight);
      sc.model.net.quantum = std::move(sol.quantum);

      std::vector<double> joins = sf.join_times;
      std::sort(joins.begin(), joins.end());
      for (double tj : joins) {
        const std::size_t fresh = adj.nodes;
        const auto targets = attach_preferential(adj, sf.join_links, rng);
        TopologyEvent ev;
        ev.time = tj;
        ev.kind = EventKind::AddNode;
        ev.join.params = cfg.node;
        ev.join.params.omega_m = sf.omega_s + sf.mu0 * static_cast<double>(targets.size()) +
                                 uniform(rng, -sf.jitter, sf.jitter);
        ev.join.omega_s = sf.omega_s;
        for (auto k : targets) {
          ev.join.classical.emplace_back(k, cfg.k_weight);
          ev.join.quantum.push_back(k);
          sc.pairs.emplace_back(k, fresh);
        }
        events.push_back(std::move(ev));
      }
      break;
    }
    case Topology::File: {
      std::ifstream in(cfg.graph_file);
      if (!in) throw ConfigError(fmt::format("cannot open graph file '{}'", cfg.graph_file));
      sc.model.net = parse_network(in);
      sc.model.nodes = node_list(cfg, sc.model.net.size());
      sc.pairs = sc.model.net.quantum.edges();
      break;
    }
  }

  if (!cfg.pairs.empty()) sc.pairs = cfg.pairs;
  sc.schedule = TopologySchedule(std::move(events));
  sc.initial = cfg.initial;
  std::size_t joins = 0;
  for (const auto& ev : sc.schedule.events()) joins += ev.kind == EventKind::AddNode ? 1 : 0;
  sc.final_nodes = sc.model.size() + joins;
  for (auto [j, k] : sc.pairs) {
    if (j >= sc.final_nodes || k >= sc.final_nodes || j == k) {
      throw ConfigError(fmt::format("metric pair ({}, {}) is not a pair of distinct nodes", j, k));
    }
  }
  sc.model.validate();
  return sc;
}

// ---------------------------------------------------------------------------
// Observation and integration

MetricRecord observe(const SimState& s, const std::vector<Edge>& pairs,
                     const MetricSelection& metrics, std::size_t total_nodes,
                     std::size_t initial_nodes) {
  const std::size_t n = s.nodes();
  const auto total = static_cast<Eigen::Index>(total_nodes);
  MetricRecord r;
  r.t = s.t;
  r.nodes = n;
  r.a = Eigen::VectorXcd::Constant(total, Complex(kNaN, kNaN));
  r.b = Eigen::VectorXcd::Constant(total, Complex(kNaN, kNaN));
  r.a.head(static_cast<Eigen::Index>(n)) = s.mean.a;
  r.b.head(static_cast<Eigen::Index>(n)) = s.mean.b;

  auto optical = [&](std::size_t j) {
    return std::pair{s.cov.mode_block(optical_mode(j, n)),
                     Eigen::Vector2d(s.mean.a(static_cast<Eigen::Index>(j)).real(),
                                     s.mean.a(static_cast<Eigen::Index>(j)).imag())};
  };
  auto fidelity = [&](std::size_t j, std::size_t k) {
    const auto [v1, a1] = optical(j);
    const auto [v2, a2] = optical(k);
    return gaussian_fidelity(v1, a1, v2, a2);
  };

  r.pairs.reserve(pairs.size());
  for (auto [j, k] : pairs) {
    PairMetric m{kNaN, kNaN, kNaN, kNaN};
    if (j < n && k < n) {
      const auto [dq, dp] = first_order_error(s.mean.b(static_cast<Eigen::Index>(j)),
                                              s.mean.b(static_cast<Eigen::Index>(k)));
      m.q_minus = dq;
      m.p_minus = dp;
      m.sync = second_order_sync(s.cov, {mechanical_mode(j, n), mechanical_mode(k, n)});
      m.fidelity = fidelity(j, k);
    }
    r.pairs.push_back(m);
  }

  r.negativity = Eigen::VectorXd::Constant(total, kNaN);
  if (metrics.negativity) {
    for (std::size_t j = 0; j < n; ++j) {
      r.negativity(static_cast<Eigen::Index>(j)) =
          log_negativity(s.cov, {optical_mode(j, n), mechanical_mode(j, n)});
    }
  }

  r.fnet = r.fmin = r.fmin_initial = kNaN;
  if (metrics.network_fidelity && n >= 2) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
    double lo = 1.0;
    double lo_initial = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double v = fidelity(j, k);
        f(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = v;
        f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = v;
        lo = std::min(lo, v);
        if (k < initial_nodes) lo_initial = std::min(lo_initial, v);
      }
    }
    r.fnet = network_avg_fidelity(f);
    r.fmin = lo;
    r.fmin_initial = lo_initial;
  }

  r.tracedist = kNaN;
  r.nu_min = metrics.physicality ? symplectic_eigenvalues(s.cov.matrix()).front() : kNaN;
  return r;
}

RunResult simulate(const ScenarioConfig& cfg, const RecordSink& sink) {
  Rng rng(cfg.seed);
  Scenario sc = build_scenario(cfg, rng);
  SimState state = initial_state(sc.model.nodes, sc.initial, rng);

  RunResult out;
  out.pairs = sc.pairs;
  out.nodes = sc.final_nodes;
  out.metrics = cfg.metrics;

  Model model = sc.model;
  Integrator integ(model);
  const std::size_t initial_nodes = model.size();

  Eigen::MatrixXcd reference;
  double distance = 0.0;
  if (cfg.metrics.trace_distance) reference = padded_coupling(model.net, sc.final_nodes);

  const auto steps = static_cast<long long>(std::llround(cfg.t_end / cfg.dt));
  const auto& events = sc.schedule.events();
  auto next = events.begin();
  for (long long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    state.t = t;
    bool changed = false;
    while (next != events.end() && next->time <= t + 0.5 * cfg.dt) {
      apply_event(*next, model.net, model.nodes);
      if (next->kind == EventKind::AddNode) grow_state(state, rng);
      changed = true;
      ++next;
    }
    if (changed) {
      integ.reset(model);
      if (cfg.metrics.trace_distance) {
        distance = trace_distance(reference, padded_coupling(model.net, sc.final_nodes));
      }
    }
    try {
      if (k % static_cast<long long>(cfg.sample_every) == 0 || k == steps) {
        MetricRecord rec = observe(state, sc.pairs, cfg.metrics, sc.final_nodes, initial_nodes);
        if (cfg.metrics.trace_distance) rec.tracedist = distance;
        if (sink) sink(rec);
        out.records.push_back(std::move(rec));
      }
      if (k < steps) integ.step(state, cfg.dt);
    } catch (const IntegrationBlowup& e) {
      out.failure = e.what();
      break;
    } catch (const NonPhysicalError& e) {
      out.failure = fmt::format("{} at t={}", e.what(), state.t);
      break;
    }
  }
  out.final_state = std::move(state);
  return out;
}

RunResult run_point_to_point(ScenarioConfig cfg) {
  cfg.topology = Topology::PointToPoint;
  return simulate(cfg);
}

RunResult run_small_world(ScenarioConfig cfg) {
  cfg.topology = Topology::SmallWorld;
  return simulate(cfg);
}

RunResult run_scale_free(ScenarioConfig cfg) {
  cfg.topology = Topology::ScaleFree;
  return simulate(cfg);
}

// ---------------------------------------------------------------------------
// Averages

std::vector<double> window_average(const std::vector<double>& t, const std::vector<double>& x,
                                   double window) {
  if (!(window > 0.0)) throw ConfigError("window must be positive");
  Integral integral(t, x);
  std::vector<double> out;
  if (t.empty()) return out;
  const double last = t.back();
  const double slack = 1e-9 * std::max(1.0, std::abs(last));
  for (std::size_t i = 0; i < t.size() && t[i] + window <= last + slack; ++i) {
    out.push_back((integral.at(t[i] + window) - integral.at(t[i])) / window);
  }
  return out;
}

double time_average(const std::vector<double>& t, const std::vector<double>& x, double t0,
                    double t1) {
  if (t.empty()) throw ConfigError("cannot average an empty series");
  if (t.size() != x.size()) throw ConfigError("time and value series differ in length");
  t0 = std::clamp(t0, t.front(), t.back());
  t1 = std::clamp(t1, t.front(), t.back());
  if (t1 < t0) std::swap(t0, t1);
  // Only the samples bracketing [t0, t1] take part, so values outside the
  // window (for example NaN before a node joins) do not leak in.
  auto lo = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), t0) - t.begin());
  lo = lo == 0 ? 0 : lo - 1;
  auto hi = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), t1) - t.begin());
  hi = std::min(hi, t.size() - 1);
  const std::vector<double> ts(t.begin() + static_cast<std::ptrdiff_t>(lo),
                               t.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  const std::vector<double> xs(x.begin() + static_cast<std::ptrdiff_t>(lo),
                               x.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
  Integral integral(ts, xs);
  if (t1 == t0) return integral.value(t0);
  return (integral.at(t1) - integral.at(t0)) / (t1 - t0);
}

// ---------------------------------------------------------------------------
// Tabular output

std::vector<std::string> csv_columns(const RunResult& run) {
  std::vector<std::string> cols{"t"};
  for (std::size_t j = 0; j < run.nodes; ++j) {
    for (const char* base : {"reA", "imA", "reB", "imB"}) cols.push_back(fmt::format("{}_{}", base, j));
  }
  for (const auto& e : run.pairs) {
    for (const char* base : {"qminus", "pminus", "sc", "fid"}) {
      cols.push_back(fmt::format("{}_{}", base, pair_tag(e)));
    }
  }
  if (run.metrics.negativity) {
    for (std::size_t j = 0; j < run.nodes; ++j) cols.push_back(fmt::format("en_O{}M{}", j, j));
  }
  if (run.metrics.network_fidelity) {
    for (const char* c : {"fnet", "fmin", "fmin0"}) cols.emplace_back(c);
  }
  if (run.metrics.trace_distance) cols.emplace_back("tracedist");
  if (run.metrics.physicality) cols.emplace_back("numin");
  return cols;
}

std::vector<double> csv_row(const RunResult& run, const MetricRecord& rec) {
  std::vector<double> row{rec.t};
  for (std::size_t j = 0; j < run.nodes; ++j) {
    const auto i = static_cast<Eigen::Index>(j);
    row.insert(row.end(), {rec.a(i).real(), rec.a(i).imag(), rec.b(i).real(), rec.b(i).imag()});
  }
  for (const auto& p : rec.pairs) row.insert(row.end(), {p.q_minus, p.p_minus, p.sync, p.fidelity});
  if (run.metrics.negativity) {
    for (std::size_t j = 0; j < run.nodes; ++j) row.push_back(rec.negativity(static_cast<Eigen::Index>(j)));
  }
  if (run.metrics.network_fidelity) row.insert(row.end(), {rec.fnet, rec.fmin, rec.fmin_initial});
  if (run.metrics.trace_distance) row.push_back(rec.tracedist);
  if (run.metrics.physicality) row.push_back(rec.nu_min);
  return row;
}

std::map<std::string, std::vector<double>> columns_of(const RunResult& run) {
  const auto names = csv_columns(run);
  std::map<std::string, std::vector<double>> out;
  for (const auto& name : names) out[name].reserve(run.records.size());
  for (const auto& rec : run.records) {
    const auto row = csv_row(run, rec);
    for (std::size_t c = 0; c < names.size(); ++c) out[names[c]].push_back(row[c]);
  }
  return out;
}

std::string summary_json(const ScenarioConfig& cfg, const RunResult& run) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["scenario"] = cfg.name;
  j["seed"] = cfg.seed;
  j["nodes"] = run.nodes;
  j["completed"] = !run.failure.has_value();
  if (run.failure) j["failure"] = *run.failure;
  if (run.records.empty()) return j.dump(2) + "\n";

  const double t_last = run.records.back().t;
  const double t0 = (1.0 - cfg.late_fraction) * t_last;
  j["late_window"] = {t0, t_last};

  const auto names = csv_columns(run);
  const auto cols = columns_of(run);
  const auto& t = cols.at("t");
  std::size_t first = 0;
  while (first < t.size() && t[first] < t0) ++first;

  ordered_json means = ordered_json::object();
  ordered_json minima = ordered_json::object();
  for (const auto& name : names) {
    if (name == "t") continue;
    const auto& x = cols.at(name);
    means[name] = time_average(t, x, t0, t_last);
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = first; i < x.size(); ++i) lo = std::min(lo, x[i]);
    minima[name] = lo;
  }

  double fid_min = 1.0;
  double fid_max = 0.0;
  bool synced = true;
  bool shared = true;
  for (const auto& e : run.pairs) {
    const auto tag = pair_tag(e);
    const double f = means["fid_" + tag].get<double>();
    fid_min = std::min(fid_min, f);
    fid_max = std::max(fid_max, f);
    const double q = std::abs(means["qminus_" + tag].get<double>());
    const double p = std::abs(means["pminus_" + tag].get<double>());
    synced = synced && q < 0.1 && p < 0.1;
    shared = shared && f >= 0.99;
  }
  ordered_json fid;
  fid["pair_late_mean_min"] = run.pairs.empty() ? ordered_json() : ordered_json(fid_min);
  fid["pair_late_mean_max"] = run.pairs.empty() ? ordered_json() : ordered_json(fid_max);
  if (run.metrics.network_fidelity) {
    fid["network_late_mean"] = means["fnet"];
    fid["worst_pair_late_min"] = minima["fmin"];
  }
  j["fidelity"] = fid;

  ordered_json pass;
  pass["completed"] = !run.failure.has_value();
  pass["pairs_synchronized"] = synced;
  pass["pairs_fidelity_0.99"] = shared;
  if (run.metrics.network_fidelity) pass["network_fidelity_0.99"] = means["fnet"].get<double>() >= 0.99;
  if (run.metrics.physicality) {
    double nu = std::numeric_limits<double>::infinity();
    for (double v : cols.at("numin")) nu = std::min(nu, v);
    pass["physical"] = nu >= 0.5 - 1e-6;
  }
  j["pass"] = pass;
  j["late_mean"] = means;
  j["late_min"] = minima;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Reference scenarios

ScenarioConfig point_to_point_config() { return ScenarioConfig{}; }

ScenarioConfig small_world_config() {
  ScenarioConfig cfg;
  cfg.name = "small_world";
  cfg.topology = Topology::SmallWorld;
  cfg.t_end = 7500.0;
  // Unsynchronized ring circuits drive the covariance hard enough that 1e-2
  // steps lose physicality.
  cfg.dt = 0.005;
  cfg.sample_every = 200;
  return cfg;
}

ScenarioConfig scale_free_config() {
  ScenarioConfig cfg;
  cfg.name = "scale_free";
  cfg.topology = Topology::ScaleFree;
  cfg.t_end = 10000.0;
  return cfg;
}

}  // namespace qsync
