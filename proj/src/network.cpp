#include "qsync/network.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "qsync/errors.hpp"
#include "qsync/random.hpp"

namespace qsync {

// ---------------------------------------------------------------------------
// Graphs

ClassicalGraph::ClassicalGraph(std::size_t nodes)
    : weights_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes),
                                     static_cast<Eigen::Index>(nodes))) {}

void ClassicalGraph::check(std::size_t j, std::size_t k) const {
  if (j >= size() || k >= size()) {
    throw ConfigError(fmt::format("classical edge ({}, {}) references a node outside 0..{}", j,
                                  k, size() == 0 ? 0 : size() - 1));
  }
  if (j == k) throw ConfigError(fmt::format("classical self-loop on node {}", j));
}

double ClassicalGraph::weight(std::size_t j, std::size_t k) const {
  return weights_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
}

void ClassicalGraph::connect(std::size_t j, std::size_t k, double weight) {
  check(j, k);
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw ConfigError(fmt::format("classical weight must be nonnegative, got {}", weight));
  }
  const auto a = static_cast<Eigen::Index>(j);
  const auto b = static_cast<Eigen::Index>(k);
  weights_(a, b) = weight;
  weights_(b, a) = weight;
}

void ClassicalGraph::disconnect(std::size_t j, std::size_t k) { connect(j, k, 0.0); }

std::size_t ClassicalGraph::degree(std::size_t j) const {
  std::size_t d = 0;
  for (std::size_t k = 0; k < size(); ++k) d += weight(j, k) > 0.0 ? 1 : 0;
  return d;
}

std::vector<Edge> ClassicalGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t j = 0; j < size(); ++j) {
    for (std::size_t k = j + 1; k < size(); ++k) {
      if (weight(j, k) > 0.0) out.emplace_back(j, k);
    }
  }
  return out;
}

void ClassicalGraph::grow(std::size_t extra) {
  const auto n = weights_.rows();
  const auto m = n + static_cast<Eigen::Index>(extra);
  weights_.conservativeResize(m, m);
  weights_.bottomRows(m - n).setZero();
  weights_.rightCols(m - n).setZero();
}

QuantumGraph::QuantumGraph(std::size_t nodes)
    : coupling_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes),
                                      static_cast<Eigen::Index>(nodes))),
      shifts_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes))) {}

void QuantumGraph::check(std::size_t j, std::size_t k) const {
  if (j >= size() || k >= size()) {
    throw ConfigError(fmt::format("quantum edge ({}, {}) references a node outside 0..{}", j, k,
                                  size() == 0 ? 0 : size() - 1));
  }
  if (j == k) throw ConfigError(fmt::format("quantum self-loop on node {}", j));
}

double QuantumGraph::coupling(std::size_t j, std::size_t k) const {
  return coupling_(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
}

double QuantumGraph::shift(std::size_t j) const {
  return shifts_(static_cast<Eigen::Index>(j));
}

void QuantumGraph::connect(std::size_t j, std::size_t k, double mu) {
  check(j, k);
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ConfigError(fmt::format("phonon coupling must be nonnegative, got {}", mu));
  }
  const auto a = static_cast<Eigen::Index>(j);
  const auto b = static_cast<Eigen::Index>(k);
  coupling_(a, b) = mu;
  coupling_(b, a) = mu;
}

void QuantumGraph::disconnect(std::size_t j, std::size_t k) { connect(j, k, 0.0); }

void QuantumGraph::set_shift(std::size_t j, double delta_omega) {
  if (j >= size()) throw ConfigError(fmt::format("shift on unknown node {}", j));
  shifts_(static_cast<Eigen::Index>(j)) = delta_omega;
}

std::vector<Edge> QuantumGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t j = 0; j < size(); ++j) {
    for (std::size_t k = j + 1; k < size(); ++k) {
      if (coupling(j, k) > 0.0) out.emplace_back(j, k);
    }
  }
  return out;
}

void QuantumGraph::grow(std::size_t extra) {
  const auto n = coupling_.rows();
  const auto m = n + static_cast<Eigen::Index>(extra);
  coupling_.conservativeResize(m, m);
  coupling_.bottomRows(m - n).setZero();
  coupling_.rightCols(m - n).setZero();
  shifts_.conservativeResize(m);
  shifts_.tail(m - n).setZero();
}

// ---------------------------------------------------------------------------
// Text format

std::string serialize_network(const Network& net) {
  std::string out = fmt::format("N {}\n", net.size());
  for (auto [j, k] : net.classical.edges()) {
    out += fmt::format("C {} {} {}\n", j, k, net.classical.weight(j, k));
  }
  for (auto [j, k] : net.quantum.edges()) {
    out += fmt::format("Q {} {} {}\n", j, k, net.quantum.coupling(j, k));
  }
  for (std::size_t j = 0; j < net.quantum.size(); ++j) {
    if (net.quantum.shift(j) != 0.0) out += fmt::format("D {} {}\n", j, net.quantum.shift(j));
  }
  return out;
}

Network parse_network(std::istream& in) {
  Network net;
  bool have_header = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    auto fail = [&](const std::string& what) {
      return ConfigError(fmt::format("graph line {}: {}", lineno, what));
    };
    if (tag == "N") {
      long long n = -1;
      if (have_header || !(ls >> n) || n < 0) throw fail("bad or repeated 'N <count>' header");
      net.classical = ClassicalGraph(static_cast<std::size_t>(n));
      net.quantum = QuantumGraph(static_cast<std::size_t>(n));
      have_header = true;
      continue;
    }
    if (!have_header) throw fail("expected 'N <count>' header first");
    try {
      if (tag == "C" || tag == "Q") {
        long long j = -1, k = -1;
        double w = 0.0;
        if (!(ls >> j >> k >> w) || j < 0 || k < 0) throw fail("expected '<tag> j k weight'");
        if (tag == "C") {
          net.classical.connect(static_cast<std::size_t>(j), static_cast<std::size_t>(k), w);
        } else {
          net.quantum.connect(static_cast<std::size_t>(j), static_cast<std::size_t>(k), w);
        }
      } else if (tag == "D") {
        long long j = -1;
        double d = 0.0;
        if (!(ls >> j >> d) || j < 0) throw fail("expected 'D j dOmega'");
        net.quantum.set_shift(static_cast<std::size_t>(j), d);
      } else {
        throw fail(fmt::format("unknown record '{}'", tag));
      }
    } catch (const ConfigError& e) {
      if (std::string(e.what()).rfind("graph line", 0) == 0) throw;
      throw fail(e.what());
    }
    std::string rest;
    if (ls >> rest && rest[0] != '#') throw fail("trailing tokens");
  }
  if (!have_header) throw ConfigError("graph file has no 'N <count>' header");
  return net;
}

Network parse_network_string(const std::string& text) {
  std::istringstream in(text);
  return parse_network(in);
}

// ---------------------------------------------------------------------------
// Adjacency

std::vector<std::size_t> Adjacency::degrees() const {
  std::vector<std::size_t> deg(nodes, 0);
  for (auto [j, k] : edges) {
    ++deg[j];
    ++deg[k];
  }
  return deg;
}

bool Adjacency::has_edge(std::size_t j, std::size_t k) const {
  return std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
    return (e.first == j && e.second == k) || (e.first == k && e.second == j);
  });
}

bool Adjacency::connected() const {
  if (nodes == 0) return true;
  std::vector<std::size_t> parent(nodes);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [j, k] : edges) parent[find(j)] = find(k);
  const auto root = find(0);
  for (std::size_t j = 1; j < nodes; ++j) {
    if (find(j) != root) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Generators

Network gen_small_world(std::size_t n, std::size_t m, double p, double k_weight, double mu,
                        Rng& rng) {
  if (m < 2 || m % 2 != 0 || n <= m) {
    throw ConfigError(fmt::format("small-world needs N > M >= 2 with M even, got N={} M={}", n, m));
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(fmt::format("small-world probability must lie in [0, 1], got {}", p));
  }
  Network net{ClassicalGraph(n), QuantumGraph(n)};
  const std::size_t half = m / 2;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t s = 1; s <= half; ++s) net.classical.connect(j, (j + s) % n, k_weight);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const std::size_t ring = std::min(k - j, n - (k - j));
      if (ring <= half) continue;
      if (uniform01(rng) < p) net.quantum.connect(j, k, mu);
    }
  }
  return net;
}

std::vector<std::size_t> attach_preferential(Adjacency& adj, std::size_t m, Rng& rng) {
  if (m == 0 || m > adj.nodes) {
    throw ConfigError(fmt::format("cannot attach to {} of {} nodes", m, adj.nodes));
  }
  auto deg = adj.degrees();
  std::vector<bool> taken(adj.nodes, false);
  std::vector<std::size_t> targets;
  for (std::size_t pick = 0; pick < m; ++pick) {
    double total = 0.0;
    for (std::size_t j = 0; j < adj.nodes; ++j) {
      if (!taken[j]) total += static_cast<double>(std::max<std::size_t>(deg[j], 1));
    }
    double u = uniform01(rng) * total;
    std::size_t chosen = adj.nodes;
    for (std::size_t j = 0; j < adj.nodes; ++j) {
      if (taken[j]) continue;
      chosen = j;
      u -= static_cast<double>(std::max<std::size_t>(deg[j], 1));
      if (u < 0.0) break;
    }
    taken[chosen] = true;
    targets.push_back(chosen);
  }
  const std::size_t fresh = adj.nodes++;
  for (auto t : targets) adj.edges.emplace_back(t, fresh);
  return targets;
}

Adjacency gen_scale_free(std::size_t m0, std::size_t m, std::size_t steps, Rng& rng) {
  if (m == 0 || m >= m0) {
    throw ConfigError(fmt::format("scale-free needs 0 < m < m0, got m={} m0={}", m, m0));
  }
  Adjacency adj;
  adj.nodes = m0;
  for (std::size_t j = 0; j < m0; ++j) {
    for (std::size_t k = j + 1; k < m0; ++k) adj.edges.emplace_back(j, k);
  }
  for (std::size_t s = 0; s < steps; ++s) attach_preferential(adj, m, rng);
  return adj;
}

// ---------------------------------------------------------------------------
// Coupling matrix analytics

Eigen::MatrixXcd coupling_matrix(const ClassicalGraph& gc, const QuantumGraph& gq) {
  if (gc.size() != gq.size()) {
    throw ConfigError(fmt::format("graph sizes differ: classical {} vs quantum {}", gc.size(),
                                  gq.size()));
  }
  const auto n = static_cast<Eigen::Index>(gc.size());
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(4 * n, 4 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      g(4 * j + 1, 4 * k + 1) = gc.weights()(j, k);
      if (j != k) g(4 * j + 3, 4 * k + 3) = Complex(0.0, gq.coupling()(j, k));
    }
    g(4 * j + 3, 4 * j + 3) = Complex(0.0, -gq.shifts()(j));
  }
  return g;
}

namespace {

Eigen::MatrixXcd normalized(const Eigen::MatrixXcd& g, Normalization norm) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  if (!(smax > 0.0)) throw ConfigError("trace distance undefined for a zero coupling matrix");
  if (norm == Normalization::TraceNorm) return g / s.sum();
  const double cut = smax * 1e-12 * static_cast<double>(g.rows());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(g.rows(), g.cols());
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (s(k) > cut) out += svd.matrixU().col(k) * svd.matrixV().col(k).adjoint();
  }
  return out;
}

}  // namespace

double trace_distance(const Eigen::MatrixXcd& g1, const Eigen::MatrixXcd& g2,
                      Normalization norm) {
  if (g1.rows() != g2.rows() || g1.cols() != g2.cols()) {
    throw ConfigError(fmt::format("trace distance of {}x{} and {}x{} matrices", g1.rows(),
                                  g1.cols(), g2.rows(), g2.cols()));
  }
  const Eigen::MatrixXcd diff = normalized(g1, norm) - normalized(g2, norm);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(diff);
  return 0.5 * svd.singularValues().sum();
}

double average_distance(const std::vector<Eigen::MatrixXcd>& samples, double t0, double t1,
                        Normalization norm) {
  if (samples.size() < 2) throw ConfigError("average distance needs at least two samples");
  if (!(t1 > t0)) throw ConfigError("average distance needs t > t0");
  const double h = (t1 - t0) / static_cast<double>(samples.size() - 1);
  double integral = 0.0;
  double prev = 0.0;  // D(t0, t0)
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double d = trace_distance(samples.front(), samples[k], norm);
    integral += 0.5 * h * (prev + d);
    prev = d;
  }
  return integral / (t1 - t0);
}

// ---------------------------------------------------------------------------
// Dissipative conditions

Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-14 * std::max(1.0, a.cwiseAbs().maxCoeff()) *
                     std::max(1.0, b.cwiseAbs().maxCoeff()) * static_cast<double>(n + 1);

  auto solve_passive = [&]() {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = a.col(idx[c]);
    Eigen::VectorXd z = sub.completeOrthogonalDecomposition().solve(b);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (std::size_t c = 0; c < idx.size(); ++c) s(idx[c]) = z(static_cast<Eigen::Index>(c));
    return s;
  };

  for (Eigen::Index outer = 0; outer < 3 * n + 10; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double wmax = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > wmax) {
        wmax = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (Eigen::Index inner = 0; inner < 3 * n + 10; ++inner) {
      Eigen::VectorXd s = solve_passive();
      double alpha = 1.0;
      bool clipped = false;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          const double step = x(j) / (x(j) - s(j));
          if (!clipped || step < alpha) alpha = step;
          clipped = true;
        }
      }
      if (!clipped) {
        x = s;
        break;
      }
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return x;
}

namespace {

struct EdgeSolve {
  Eigen::VectorXd mu;
  double residual = 0.0;
  double most_negative = 0.0;
  bool feasible = false;
};

constexpr double kResidualTol = 1e-10;

EdgeSolve solve_edges(const Eigen::MatrixXd& incidence, const Eigen::VectorXd& rhs) {
  EdgeSolve out;
  if (rhs.minCoeff() <= 0.0) {
    out.residual = (rhs.array().min(0.0)).matrix().norm();
    out.most_negative = rhs.minCoeff();
    out.mu = Eigen::VectorXd::Zero(incidence.cols());
    return out;
  }
  // Minimum-norm solution first: it spreads weight evenly over the edges.
  Eigen::VectorXd mu = incidence.completeOrthogonalDecomposition().solve(rhs);
  double residual = (incidence * mu - rhs).cwiseAbs().maxCoeff();
  out.most_negative = std::min(0.0, mu.minCoeff());
  if (residual < kResidualTol && mu.minCoeff() >= 0.0) {
    out.mu = mu;
    out.residual = residual;
    out.feasible = true;
    return out;
  }
  Eigen::VectorXd nn = nnls(incidence, rhs);
  const double nn_residual = (incidence * nn - rhs).cwiseAbs().maxCoeff();
  out.mu = nn;
  out.residual = nn_residual;
  out.feasible = nn_residual < kResidualTol;
  if (!out.feasible) out.residual = (incidence * nn - rhs).norm();
  return out;
}

SyncSolution make_solution(const std::vector<double>& freq, const Adjacency& adj, double omega_s,
                           const EdgeSolve& es) {
  SyncSolution sol;
  sol.omega_s = omega_s;
  sol.quantum = QuantumGraph(adj.nodes);
  for (std::size_t e = 0; e < adj.edges.size(); ++e) {
    const double mu = std::max(0.0, es.mu(static_cast<Eigen::Index>(e)));
    sol.quantum.connect(adj.edges[e].first, adj.edges[e].second, mu);
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < adj.nodes; ++j) {
    sol.quantum.set_shift(j, freq[j] - omega_s);
    double sum = 0.0;
    for (std::size_t k = 0; k < adj.nodes; ++k) sum += sol.quantum.coupling(j, k);
    worst = std::max(worst, std::abs(sum - (freq[j] - omega_s)));
  }
  sol.residual = worst;
  const double ref = omega_s - sol.quantum.shift(0);
  for (std::size_t j = 0; j < adj.nodes; ++j) {
    sol.q_ratio.push_back((omega_s - sol.quantum.shift(j)) / ref);
  }
  return sol;
}

}  // namespace

SyncResult solve_sync_conditions(const std::vector<double>& frequencies, const Adjacency& adj,
                                 std::optional<double> omega_s) {
  if (frequencies.size() != adj.nodes) {
    throw ConfigError(fmt::format("{} frequencies given for {} nodes", frequencies.size(),
                                  adj.nodes));
  }
  for (double w : frequencies) {
    if (!(w > 0.0)) throw ConfigError(fmt::format("frequencies must be positive, got {}", w));
  }
  for (auto [j, k] : adj.edges) {
    if (j >= adj.nodes || k >= adj.nodes || j == k) {
      throw ConfigError(fmt::format("invalid edge ({}, {})", j, k));
    }
  }
  if (adj.nodes == 0 || !adj.connected()) {
    throw ConfigError("synchronization conditions need a connected graph");
  }
  const auto n = static_cast<Eigen::Index>(adj.nodes);
  const auto m = static_cast<Eigen::Index>(adj.edges.size());
  Eigen::MatrixXd incidence = Eigen::MatrixXd::Zero(n, m);
  for (Eigen::Index e = 0; e < m; ++e) {
    incidence(static_cast<Eigen::Index>(adj.edges[static_cast<std::size_t>(e)].first), e) = 1.0;
    incidence(static_cast<Eigen::Index>(adj.edges[static_cast<std::size_t>(e)].second), e) = 1.0;
  }
  const Eigen::VectorXd freq = Eigen::Map<const Eigen::VectorXd>(frequencies.data(), n);
  const double wmin = freq.minCoeff();

  if (omega_s) {
    const EdgeSolve es = solve_edges(incidence, freq.array() - *omega_s);
    if (!es.feasible || !(*omega_s < wmin)) {
      SyncInfeasible bad;
      bad.omega_s = *omega_s;
      bad.residual_norm = es.residual;
      bad.most_negative_weight = es.most_negative;
      bad.reason = !(*omega_s < wmin)
                       ? fmt::format("omega_s = {} must lie below min frequency {}", *omega_s, wmin)
                       : fmt::format("no nonnegative couplings: residual {:.3e}, most negative "
                                     "weight {:.6g}",
                                     es.residual, es.most_negative);
      return bad;
    }
    return make_solution(frequencies, adj, *omega_s, es);
  }

  constexpr int kGrid = 1000;
  SyncInfeasible bad;
  bad.residual_norm = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kGrid; ++k) {
    const double ws = wmin * (1.0 - static_cast<double>(k) / (kGrid + 1));
    const EdgeSolve es = solve_edges(incidence, freq.array() - ws);
    if (es.feasible) return make_solution(frequencies, adj, ws, es);
    if (es.residual < bad.residual_norm) {
      bad.omega_s = ws;
      bad.residual_norm = es.residual;
      bad.most_negative_weight = es.most_negative;
    }
  }
  bad.reason = fmt::format(
      "no omega_s in (0, {}) admits nonnegative couplings; best residual {:.3e} at omega_s={:.6g}",
      wmin, bad.residual_norm, bad.omega_s);
  return bad;
}

AuxiliaryNode add_auxiliary_node(const std::vector<double>& frequencies, double mu12,
                                 double mu13) {
  if (frequencies.size() != 3) {
    throw ConfigError(fmt::format("auxiliary-node construction needs a triangle, got {} nodes",
                                  frequencies.size()));
  }
  if (!(mu12 > 0.0) || !(mu13 > 0.0)) {
    throw ConfigError("free weights mu12 and mu13 must be positive");
  }
  const double w1 = frequencies[0];
  const double w2 = frequencies[1];
  const double w3 = frequencies[2];
  AuxiliaryNode aux;
  aux.omega_s = w1 - mu12 - mu13;
  aux.mu23 = mu13 + w2 - w1;
  aux.mu_a = mu12 - mu13 + w3 - w2;
  aux.omega_a = -2.0 * mu13 + w1 - w2 + w3;
  aux.needed = aux.mu_a != 0.0;

  if (!(aux.mu23 > 0.0)) {
    throw InfeasibleError(fmt::format(
        "mu23 = mu13 + omega2 - omega1 = {:.6g} must be > 0: increase mu13 above {:.6g}",
        aux.mu23, w1 - w2));
  }
  if (aux.mu_a < 0.0) {
    throw InfeasibleError(fmt::format(
        "muA = mu12 - mu13 + omega3 - omega2 = {:.6g} must be >= 0: increase mu12 above {:.6g}",
        aux.mu_a, mu13 + w2 - w3));
  }
  const double wmin = std::min({w1, w2, w3});
  if (!(aux.omega_s < wmin)) {
    throw InfeasibleError(fmt::format("omega_s = {:.6g} must be < min frequency {:.6g}",
                                      aux.omega_s, wmin));
  }
  if (!(aux.omega_s > 0.0)) {
    throw InfeasibleError(fmt::format(
        "omega_s = omega1 - mu12 - mu13 = {:.6g} must be > 0: decrease mu12 + mu13 below {:.6g}",
        aux.omega_s, w1));
  }
  aux.frequencies = {w1, w2, w3, aux.omega_a};
  aux.adjacency.nodes = 4;
  aux.adjacency.edges = {{0, 1}, {0, 2}, {1, 2}, {2, 3}};
  return aux;
}

AuxiliarySuggestion suggest_auxiliary(const std::vector<double>& frequencies) {
  if (frequencies.size() != 3) {
    throw ConfigError(fmt::format("auxiliary-node construction needs a triangle, got {} nodes",
                                  frequencies.size()));
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::string last;
  do {
    const double w1 = frequencies[order[0]];
    const double w2 = frequencies[order[1]];
    const double w3 = frequencies[order[2]];
    const double margin = 0.05 * std::min({w1, w2, w3});
    const double mu13 = std::max(margin, w1 - w2 + margin);
    const double mu12 = std::max(margin, mu13 + w2 - w3 + margin);
    try {
      AuxiliarySuggestion out;
      out.order = order;
      out.mu12 = mu12;
      out.mu13 = mu13;
      out.node = add_auxiliary_node({w1, w2, w3}, mu12, mu13);
      return out;
    } catch (const InfeasibleError& e) {
      last = e.what();
    }
  } while (std::next_permutation(order.begin(), order.end()));
  throw InfeasibleError(fmt::format("no auxiliary-node labelling is feasible ({})", last));
}

std::vector<double> auxiliary_residuals(const std::vector<double>& frequencies, double mu12,
                                        double mu13, const AuxiliaryNode& aux) {
  const double ws = aux.omega_s;
  return {
      frequencies[0] - ws - (mu12 + mu13),
      frequencies[1] - ws - (mu12 + aux.mu23),
      frequencies[2] - ws - (aux.mu23 + mu13 + aux.mu_a),
      aux.omega_a - ws - aux.mu_a,
  };
}

double network_avg_fidelity(const Eigen::MatrixXd& pairwise) {
  const Eigen::Index n = pairwise.rows();
  if (n < 2 || pairwise.cols() != n) {
    throw ConfigError("network-averaged fidelity needs a square matrix over at least 2 nodes");
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) sum += pairwise(j, k);
  }
  return sum / (0.5 * static_cast<double>(n) * static_cast<double>(n - 1));
}

// ---------------------------------------------------------------------------
// Schedules

TopologySchedule::TopologySchedule(std::vector<TopologyEvent> events) {
  for (auto& ev : events) add(std::move(ev));
}

void TopologySchedule::add(TopologyEvent ev) {
  if (!std::isfinite(ev.time) || ev.time < 0.0) {
    throw ConfigError(fmt::format("event time must be finite and >= 0, got {}", ev.time));
  }
  auto pos = std::upper_bound(events_.begin(), events_.end(), ev.time,
                              [](double t, const TopologyEvent& e) { return t < e.time; });
  events_.insert(pos, std::move(ev));
}

double TopologySchedule::last_time() const {
  return events_.empty() ? 0.0 : events_.back().time;
}

void apply_event(const TopologyEvent& ev, Network& net, NodeList& nodes) {
  switch (ev.kind) {
    case EventKind::ConnectClassical:
      net.classical.connect(ev.a, ev.b, ev.weight);
      break;
    case EventKind::DisconnectClassical:
      net.classical.disconnect(ev.a, ev.b);
      break;
    case EventKind::ConnectQuantum:
      net.quantum.connect(ev.a, ev.b, ev.weight);
      break;
    case EventKind::DisconnectQuantum:
      net.quantum.disconnect(ev.a, ev.b);
      break;
    case EventKind::AddNode: {
      const auto& join = ev.join;
      join.params.validate();
      const std::size_t fresh = net.size();
      net.classical.grow(1);
      net.quantum.grow(1);
      nodes.push_back(join.params);
      for (auto [k, w] : join.classical) net.classical.connect(fresh, k, w);
      if (join.omega_s) {
        if (join.quantum.empty()) throw ConfigError("re-solving a join needs phonon neighbours");
        const double excess = join.params.omega_m - *join.omega_s;
        if (!(excess > 0.0)) {
          throw InfeasibleError(fmt::format(
              "joining node frequency {} must exceed omega_s {}", join.params.omega_m,
              *join.omega_s));
        }
        const double mu = excess / static_cast<double>(join.quantum.size());
        for (auto k : join.quantum) {
          net.quantum.connect(fresh, k, mu);
          net.quantum.set_shift(k, net.quantum.shift(k) + mu);
        }
        nodes.back().omega_m = *join.omega_s;
        net.quantum.set_shift(fresh, excess);
      } else {
        for (auto k : join.quantum) net.quantum.connect(fresh, k, join.mu);
      }
      break;
    }
  }
}

std::vector<Eigen::MatrixXcd> sample_topology(const Network& initial, const NodeList& nodes,
                                              const TopologySchedule& schedule, double t0,
                                              double t1, std::size_t samples) {
  if (samples < 2) throw ConfigError("topology sampling needs at least two samples");
  if (!(t1 > t0)) throw ConfigError("topology sampling needs t > t0");
  Network net = initial;
  NodeList ns = nodes;
  std::vector<Eigen::MatrixXcd> out;
  auto it = schedule.events().begin();
  const double h = (t1 - t0) / static_cast<double>(samples - 1);
  for (std::size_t k = 0; k < samples; ++k) {
    const double t = t0 + h * static_cast<double>(k);
    while (it != schedule.events().end() && it->time <= t + 1e-12) apply_event(*it++, net, ns);
    out.push_back(coupling_matrix(net.classical, net.quantum));
  }
  const Eigen::Index dim = out.back().rows();
  for (auto& g : out) {
    if (g.rows() < dim) {
      Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(dim, dim);
      padded.topLeftCorner(g.rows(), g.cols()) = g;
      g = std::move(padded);
    }
  }
  return out;
}

double average_distance(const Network& initial, const NodeList& nodes,
                        const TopologySchedule& schedule, double t0, double t1,
                        std::size_t samples, Normalization norm) {
  return average_distance(sample_topology(initial, nodes, schedule, t0, t1, samples), t0, t1,
                          norm);
}

}  // namespace qsync
