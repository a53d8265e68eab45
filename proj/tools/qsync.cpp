#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "qsync/config.hpp"
#include "qsync/errors.hpp"
#include "qsync/harness.hpp"
#include "qsync/network.hpp"
#include "qsync/plot.hpp"

namespace fs = std::filesystem;
using namespace qsync;

namespace {

struct Failure {
  int code;
  std::string kind;
  std::string message;
};

[[noreturn]] void raise(int code, const std::string& kind, const std::string& message) {
  throw Failure{code, kind, message};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << content;
  if (!out) throw ConfigError(fmt::format("write to '{}' failed", path.string()));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_cell(double v) { return std::isfinite(v) ? fmt::format("{:.12g}", v) : ""; }

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("QSYNC_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') throw ConfigError(fmt::format("QSYNC_SEED='{}' is not an integer", s));
  return v;
}

/// --seed wins, then an explicit seed in the config, then QSYNC_SEED.
void resolve_seed(ScenarioConfig& cfg, const ConfigTable& table, std::optional<std::uint64_t> cli) {
  if (cli) {
    cfg.seed = *cli;
  } else if (!table.entries.count("seed")) {
    if (auto env = env_seed()) cfg.seed = *env;
  }
}

LoadedConfig load(const ConfigTable& table, const std::string& path) {
  LoadedConfig cfg = interpret_config(table, path);
  auto& file = cfg.scenario.graph_file;
  if (!file.empty() && fs::path(file).is_relative()) {
    file = (fs::path(path).parent_path() / file).string();
  }
  return cfg;
}

std::vector<std::string> default_plot_columns(const RunResult& run) {
  std::vector<std::string> cols;
  for (const auto& [j, k] : run.pairs) {
    for (const char* base : {"qminus", "sc", "fid"}) cols.push_back(fmt::format("{}_{}_{}", base, j, k));
  }
  if (run.metrics.network_fidelity && run.nodes > 2) cols.emplace_back("fnet");
  return cols;
}

/// Runs one scenario into `outdir`. Returns the exit status.
int run_into(const LoadedConfig& cfg, const fs::path& outdir, bool plot) {
  fs::create_directories(outdir);
  const fs::path csv_path = outdir / "timeseries.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw ConfigError(fmt::format("cannot write '{}'", csv_path.string()));

  RunResult shape;
  bool header = false;
  auto sink = [&](const MetricRecord& rec) {
    if (!header) {
      // The first record fixes the schema; node count and pairs never change.
      shape.nodes = static_cast<std::size_t>(rec.a.size());
      shape.metrics = cfg.scenario.metrics;
      const auto cols = csv_columns(shape);
      for (std::size_t c = 0; c < cols.size(); ++c) csv << (c ? "," : "") << cols[c];
      csv << '\n';
      header = true;
    }
    const auto row = csv_row(shape, rec);
    for (std::size_t c = 0; c < row.size(); ++c) csv << (c ? "," : "") << format_cell(row[c]);
    csv << '\n';
    csv.flush();
  };

  // Pairs are known only after the scenario is built; rebuild it once with a
  // throwaway generator to learn them.
  {
    Rng rng(cfg.scenario.seed);
    shape.pairs = build_scenario(cfg.scenario, rng).pairs;
  }
  const RunResult run = simulate(cfg.scenario, sink);
  csv.close();
  write_file(outdir / "summary.json", summary_json(cfg.scenario, run));
  if (run.failure) raise(kExitNumerical, "numerical", *run.failure);

  if (plot) {
    const CsvTable table = read_csv(csv_path.string());
    auto cols = cfg.plot.columns.empty() ? default_plot_columns(run) : cfg.plot.columns;
    for (const auto& c : cols) {
      PlotStyle style;
      style.title = c;
      write_file(outdir / (c + ".svg"), render_columns(table, {c}, cfg.scenario.window, style));
    }
  }
  return kExitOk;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const InfeasibleError*>(&e)) return kExitInfeasible;
  if (dynamic_cast<const NonPhysicalError*>(&e)) return kExitNumerical;
  if (dynamic_cast<const IntegrationBlowup*>(&e)) return kExitNumerical;
  return kExitConfig;
}

const char* kind_of(int code) {
  switch (code) {
    case kExitInfeasible: return "infeasible";
    case kExitNumerical: return "numerical";
    default: return "config";
  }
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  bool quoted = false;
  for (char c : text) {
    if (c == '"') quoted = !quoted;
    if (!quoted && c == '[') ++depth;
    if (!quoted && c == ']') --depth;
    if (c == ',' && depth == 0 && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_' || c == '=' ? c : '_');
  return out;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const std::string& config, const std::string& outdir,
                 std::optional<std::uint64_t> seed, bool plot) {
  const ConfigTable table = read_config_table(config);
  LoadedConfig cfg = load(table, config);
  resolve_seed(cfg.scenario, table, seed);
  return run_into(cfg, outdir, plot);
}

int cmd_sweep(const std::string& config, const std::vector<std::string>& vary,
              const std::string& outdir, unsigned jobs, std::optional<std::uint64_t> seed,
              bool plot) {
  const ConfigTable base = read_config_table(config);
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& v : vary) {
    const auto eq = v.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(fmt::format("--vary expects key=v1,v2,..., got '{}'", v));
    }
    axes.emplace_back(v.substr(0, eq), split_values(v.substr(eq + 1)));
  }

  struct Task {
    std::string dir;
    std::vector<std::pair<std::string, std::string>> overrides;
    LoadedConfig cfg;
    int status = kExitOk;
    std::string error;
  };
  std::vector<Task> tasks;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    Task t;
    ConfigTable table = base;
    std::string name = fmt::format("{:03d}", tasks.size());
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& value = axes[a].second[idx[a]];
      override_config(table, axes[a].first, value);
      t.overrides.emplace_back(axes[a].first, value);
      name += "_" + sanitize(axes[a].first + "=" + value);
    }
    t.cfg = load(table, config);
    resolve_seed(t.cfg.scenario, table, seed);
    t.dir = name;
    tasks.push_back(std::move(t));
    std::size_t a = 0;
    while (a < axes.size() && ++idx[a] == axes[a].second.size()) idx[a++] = 0;
    if (a == axes.size()) break;
  }

  fs::create_directories(outdir);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      auto& t = tasks[i];
      try {
        t.status = run_into(t.cfg, fs::path(outdir) / t.dir, plot);
      } catch (const Failure& f) {
        t.status = f.code;
        t.error = f.message;
      } catch (const std::exception& e) {
        t.status = classify(e);
        t.error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  nlohmann::ordered_json index = nlohmann::ordered_json::array();
  int status = kExitOk;
  for (const auto& t : tasks) {
    nlohmann::ordered_json entry;
    entry["dir"] = t.dir;
    for (const auto& [k, v] : t.overrides) entry["overrides"][k] = v;
    entry["seed"] = t.cfg.scenario.seed;
    entry["status"] = t.status;
    if (!t.error.empty()) entry["error"] = t.error;
    index.push_back(entry);
    if (status == kExitOk) status = t.status;
  }
  write_file(fs::path(outdir) / "sweep.json", index.dump(2) + "\n");
  if (status != kExitOk) {
    const auto bad = std::find_if(tasks.begin(), tasks.end(), [](const Task& t) { return t.status != kExitOk; });
    raise(status, kind_of(status), fmt::format("sweep task {} failed: {}", bad->dir, bad->error));
  }
  return kExitOk;
}

struct GenOptions {
  std::string kind;
  std::size_t n = 12;
  std::size_t m = 2;
  double p = 0.1;
  std::size_t m0 = 3;
  std::size_t steps = 15;
  double k_weight = 2.0;
  double mu = 0.02;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string freqs_out;
  double omega_s = 1.0;
  double mu0 = 0.02;
  double jitter = 0.005;
};

int cmd_gen_network(const GenOptions& o) {
  std::uint64_t seed = 1;
  if (o.seed) {
    seed = *o.seed;
  } else if (auto env = env_seed()) {
    seed = *env;
  }
  Rng rng(seed);
  Network net;
  if (o.kind == "sw") {
    net = gen_small_world(o.n, o.m, o.p, o.k_weight, o.mu, rng);
  } else {
    const Adjacency adj = gen_scale_free(o.m0, o.m, o.steps, rng);
    net = Network{ClassicalGraph(adj.nodes), QuantumGraph(adj.nodes)};
    for (auto [j, k] : adj.edges) {
      if (o.k_weight > 0.0) net.classical.connect(j, k, o.k_weight);
      if (o.mu > 0.0) net.quantum.connect(j, k, o.mu);
    }
    if (!o.freqs_out.empty()) {
      const auto deg = adj.degrees();
      std::string text;
      for (std::size_t j = 0; j < adj.nodes; ++j) {
        text += fmt::format("{}\n", o.omega_s + o.mu0 * static_cast<double>(deg[j]) +
                                        uniform(rng, -o.jitter, o.jitter));
      }
      write_file(o.freqs_out, text);
    }
  }
  const std::string text = serialize_network(net);
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
  return kExitOk;
}

std::vector<double> read_frequencies(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = line.substr(0, line.find('#'));
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size() || !(v > 0.0)) {
        throw ConfigError(fmt::format("{} line {}: '{}' is not a positive frequency", path, lineno, tok));
      }
      out.push_back(v);
    }
  }
  return out;
}

int cmd_solve(const std::string& graph, const std::string& freqs, std::optional<double> omega_s,
              bool json) {
  std::ifstream gin(graph);
  if (!gin) throw ConfigError(fmt::format("cannot open graph file '{}'", graph));
  const Network net = parse_network(gin);
  const auto freq = read_frequencies(freqs);
  if (freq.size() != net.size()) {
    throw ConfigError(fmt::format("{} frequencies for a {}-node graph", freq.size(), net.size()));
  }
  Adjacency adj{net.size(), net.quantum.edges()};
  if (adj.edges.empty()) adj.edges = net.classical.edges();

  const SyncResult result = solve_sync_conditions(freq, adj, omega_s);
  nlohmann::ordered_json j;
  if (const auto* sol = std::get_if<SyncSolution>(&result)) {
    j["status"] = "feasible";
    j["omega_s"] = sol->omega_s;
    j["residual"] = sol->residual;
    j["couplings"] = nlohmann::ordered_json::array();
    for (auto [a, b] : adj.edges) {
      j["couplings"].push_back({{"j", a}, {"k", b}, {"mu", sol->quantum.coupling(a, b)}});
    }
    j["shifts"] = std::vector<double>(sol->quantum.shifts().data(),
                                      sol->quantum.shifts().data() + sol->quantum.shifts().size());
    j["q_ratio"] = sol->q_ratio;
    if (json) {
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << fmt::format("feasible: omega_s = {:.10g}, residual = {:.3e}\n", sol->omega_s,
                               sol->residual);
      std::cout << "   j    k  mu\n";
      for (auto [a, b] : adj.edges) {
        std::cout << fmt::format("{:4d} {:4d}  {:.10g}\n", a, b, sol->quantum.coupling(a, b));
      }
    }
    return kExitOk;
  }

  const auto& bad = std::get<SyncInfeasible>(result);
  j["status"] = "infeasible";
  j["omega_s"] = bad.omega_s;
  j["residual_norm"] = bad.residual_norm;
  j["most_negative_weight"] = bad.most_negative_weight;
  j["reason"] = bad.reason;
  std::optional<AuxiliarySuggestion> aux;
  const bool triangle = net.size() == 3 && adj.has_edge(0, 1) && adj.has_edge(0, 2) && adj.has_edge(1, 2);
  std::string aux_error;
  if (triangle) {
    try {
      aux = suggest_auxiliary(freq);
    } catch (const InfeasibleError& e) {
      aux_error = e.what();
    }
  }
  if (aux) {
    const auto& o = aux->order;
    nlohmann::ordered_json a;
    a["attach_to"] = o[2];
    a["labels"] = {o[0], o[1], o[2]};
    a["omega_s"] = aux->node.omega_s;
    a["omega_aux"] = aux->node.omega_a;
    a["mu_aux"] = aux->node.mu_a;
    a["couplings"] = {{{"j", o[0]}, {"k", o[1]}, {"mu", aux->mu12}},
                      {{"j", o[0]}, {"k", o[2]}, {"mu", aux->mu13}},
                      {{"j", o[1]}, {"k", o[2]}, {"mu", aux->node.mu23}}};
    j["auxiliary"] = a;
  }
  if (json) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "infeasible: " << bad.reason << '\n';
    if (aux) {
      const auto& o = aux->order;
      std::cout << fmt::format(
          "auxiliary node: attach to node {} with mu_aux = {:.10g}, omega_aux = {:.10g}, "
          "omega_s = {:.10g}\n",
          o[2], aux->node.mu_a, aux->node.omega_a, aux->node.omega_s);
      std::cout << fmt::format("  mu({},{}) = {:.10g}\n  mu({},{}) = {:.10g}\n  mu({},{}) = {:.10g}\n",
                               o[0], o[1], aux->mu12, o[0], o[2], aux->mu13, o[1], o[2],
                               aux->node.mu23);
    }
  }
  if (aux) return kExitOk;
  raise(kExitInfeasible, "infeasible",
        aux_error.empty() ? bad.reason : fmt::format("{}; {}", bad.reason, aux_error));
}

int cmd_plot(const std::string& input, const std::string& cols, const std::string& out,
             double window, const std::string& title) {
  const CsvTable table = read_csv(input);
  std::vector<std::string> names;
  for (auto& c : split_values(cols)) {
    if (!c.empty()) names.push_back(c);
  }
  PlotStyle style;
  style.title = title;
  const std::string svg = render_columns(table, names, window, style);
  write_file(out, svg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum synchronization of electro-optomechanical networks"};
  app.require_subcommand(1);

  std::string config;
  std::string outdir;
  std::optional<std::uint64_t> seed;
  bool plot = false;
  auto* sim = app.add_subcommand("simulate", "Run one scenario and write timeseries.csv and summary.json");
  sim->add_option("-c,--config", config, "Scenario file")->required();
  sim->add_option("-o,--out", outdir, "Output directory")->required();
  sim->add_option("--seed", seed, "Random seed (falls back to QSYNC_SEED)");
  sim->add_flag("--plot", plot, "Also write one SVG per plotted metric");

  std::vector<std::string> vary;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario over a grid of overrides");
  sweep->add_option("-c,--config", config, "Scenario file")->required();
  sweep->add_option("--vary", vary, "key=v1,v2,... (repeatable; the grid is the product)")->required();
  sweep->add_option("-o,--out", outdir, "Output directory")->required();
  sweep->add_option("--jobs", jobs, "Parallel tasks")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed, "Random seed for every task");
  sweep->add_flag("--plot", plot, "Also write SVGs");

  GenOptions gen;
  auto* gn = app.add_subcommand("gen-network", "Generate a small-world or scale-free graph");
  gn->add_option("--kind", gen.kind, "sw or sf")->required()->check(CLI::IsMember({"sw", "sf"}));
  gn->add_option("--n", gen.n, "Nodes (sw)");
  gn->add_option("--m", gen.m, "Ring neighbours (sw) or links per new node (sf)");
  gn->add_option("--p", gen.p, "Extra-edge probability (sw)");
  gn->add_option("--m0", gen.m0, "Initial clique size (sf)");
  gn->add_option("--steps", gen.steps, "Growth steps (sf)");
  gn->add_option("--K", gen.k_weight, "Classical weight");
  gn->add_option("--mu", gen.mu, "Phonon weight");
  gn->add_option("--seed", gen.seed, "Random seed (falls back to QSYNC_SEED)");
  gn->add_option("-o,--out", gen.out, "Output graph file ('-' for stdout)");
  gn->add_option("--freqs-out", gen.freqs_out, "Also write omega_s + mu0 * degree (+ jitter) per node (sf)");
  gn->add_option("--omega-s", gen.omega_s, "Reference frequency for --freqs-out");
  gn->add_option("--mu0", gen.mu0, "Per-link shift for --freqs-out");
  gn->add_option("--jitter", gen.jitter, "Uniform frequency jitter for --freqs-out");

  std::string graph;
  std::string freqs;
  std::optional<double> omega_s;
  bool json = false;
  auto* solve = app.add_subcommand("solve-couplings", "Solve phonon weights for whole-network synchronization");
  solve->add_option("-g,--graph", graph, "Edge-list graph file")->required();
  solve->add_option("-f,--freqs", freqs, "Node frequencies, one per node")->required();
  solve->add_option("--omega-s", omega_s, "Fixed reference frequency");
  solve->add_flag("--json", json, "Machine-readable output");

  std::string input;
  std::string cols;
  std::string out;
  double window = 0.0;
  std::string title;
  auto* pl = app.add_subcommand("plot", "Render CSV columns as an SVG line chart");
  pl->add_option("-i,--input", input, "CSV file")->required();
  pl->add_option("--cols", cols, "Comma-separated column names")->required();
  pl->add_option("-o,--out", out, "Output SVG")->required();
  pl->add_option("--window", window, "Overlay a sliding average of this width");
  pl->add_option("--title", title, "Chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    nlohmann::json err{{"error", "config"}, {"code", kExitConfig}, {"message", e.what()}};
    std::cerr << err.dump() << '\n';
    return kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(config, outdir, seed, plot);
    if (*sweep) return cmd_sweep(config, vary, outdir, jobs, seed, plot);
    if (*gn) return cmd_gen_network(gen);
    if (*solve) return cmd_solve(graph, freqs, omega_s, json);
    if (*pl) return cmd_plot(input, cols, out, window, title);
  } catch (const Failure& f) {
    nlohmann::json err{{"error", f.kind}, {"code", f.code}, {"message", f.message}};
    std::cerr << err.dump() << '\n';
    return f.code;
  } catch (const std::exception& e) {
    const int code = classify(e);
    nlohmann::json err{{"error", kind_of(code)}, {"code", code}, {"message", e.what()}};
    std::cerr << err.dump() << '\n';
    return code;
  }
  return kExitConfig;
}
