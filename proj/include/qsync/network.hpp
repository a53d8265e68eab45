#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qsync/params.hpp"
#include "qsync/random.hpp"
#include "qsync/types.hpp"

namespace qsync {

using Edge = std::pair<std::size_t, std::size_t>;

/// Resistor links between Duffing circuits: symmetric, nonnegative, zero diagonal.
class ClassicalGraph {
 public:
  ClassicalGraph() = default;
  explicit ClassicalGraph(std::size_t nodes);

  std::size_t size() const { return static_cast<std::size_t>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  double weight(std::size_t j, std::size_t k) const;

  void connect(std::size_t j, std::size_t k, double weight);
  void disconnect(std::size_t j, std::size_t k);
  std::size_t degree(std::size_t j) const;
  std::vector<Edge> edges() const;

  /// Appends `extra` isolated nodes.
  void grow(std::size_t extra);

 private:
  void check(std::size_t j, std::size_t k) const;
  Eigen::MatrixXd weights_;
};

/// Phonon tunnelling links (symmetric, nonnegative off-diagonal) plus the
/// per-node frequency shifts carried on the diagonal.
class QuantumGraph {
 public:
  QuantumGraph() = default;
  explicit QuantumGraph(std::size_t nodes);

  std::size_t size() const { return static_cast<std::size_t>(coupling_.rows()); }
  const Eigen::MatrixXd& coupling() const { return coupling_; }
  const Eigen::VectorXd& shifts() const { return shifts_; }
  double coupling(std::size_t j, std::size_t k) const;
  double shift(std::size_t j) const;

  void connect(std::size_t j, std::size_t k, double mu);
  void disconnect(std::size_t j, std::size_t k);
  void set_shift(std::size_t j, double delta_omega);
  std::vector<Edge> edges() const;
  void grow(std::size_t extra);

 private:
  void check(std::size_t j, std::size_t k) const;
  Eigen::MatrixXd coupling_;
  Eigen::VectorXd shifts_;
};

struct Network {
  ClassicalGraph classical;
  QuantumGraph quantum;

  std::size_t size() const { return classical.size(); }
};

/// Edge-list text format:
///   N <count>
///   C j k K
///   Q j k mu
///   D j dOmega
/// Blank lines and lines starting with '#' are ignored.
std::string serialize_network(const Network& net);
Network parse_network(std::istream& in);
Network parse_network_string(const std::string& text);

/// Undirected simple graph without weights.
struct Adjacency {
  std::size_t nodes = 0;
  std::vector<Edge> edges;

  std::vector<std::size_t> degrees() const;
  bool connected() const;
  bool has_edge(std::size_t j, std::size_t k) const;
};

/// Ring of M nearest-neighbour resistor links (weight K) plus phonon links of
/// weight mu added independently with probability P between every pair that
/// is not a ring neighbour.
Network gen_small_world(std::size_t n, std::size_t m, double p, double k_weight, double mu,
                        Rng& rng);

/// Preferential-attachment growth from an m0-clique; every step adds one node
/// linked to m distinct existing nodes chosen with probability proportional
/// to degree.
Adjacency gen_scale_free(std::size_t m0, std::size_t m, std::size_t steps, Rng& rng);

/// One preferential-attachment step on an existing graph; returns the targets.
std::vector<std::size_t> attach_preferential(Adjacency& adj, std::size_t m, Rng& rng);

/// G = G^c (x) diag(0,1,0,0) + i G^q (x) diag(0,0,0,1) in node-major order
/// (phi, U_NL, A, B). The quantum diagonal holds -shift so that row sums
/// vanish under the dissipative condition.
Eigen::MatrixXcd coupling_matrix(const ClassicalGraph& gc, const QuantumGraph& gq);

enum class Normalization {
  Polar,      ///< G -> G |G|^+ (partial isometry on the support)
  TraceNorm,  ///< G -> G / Tr|G|
};

/// Half the trace norm of the difference of the normalized matrices.
double trace_distance(const Eigen::MatrixXcd& g1, const Eigen::MatrixXcd& g2,
                      Normalization norm = Normalization::Polar);

/// Trapezoidal time average of D(t0, tau) from matrices sampled on a uniform
/// grid over [t0, t1]; samples.front() is the reference G(t0).
double average_distance(const std::vector<Eigen::MatrixXcd>& samples, double t0, double t1,
                        Normalization norm = Normalization::Polar);

// ---------------------------------------------------------------------------
// Dissipative synchronization conditions

struct SyncSolution {
  double omega_s = 0.0;
  QuantumGraph quantum;   ///< mu on the given edges, shift_j = omega_j - omega_s
  double residual = 0.0;  ///< max_j |sum_k mu_jk - (omega_j - omega_s)|
  /// Q_MR,j / Q_MR,0 implied by Q_MR,j / (omega_s - shift_j) = const.
  std::vector<double> q_ratio;
};

struct SyncInfeasible {
  double omega_s = 0.0;
  double residual_norm = 0.0;
  double most_negative_weight = 0.0;
  std::string reason;
};

using SyncResult = std::variant<SyncSolution, SyncInfeasible>;

/// Solves sum_{k in adj(j)} mu_jk = omega_j - omega_s for mu >= 0. Without
/// omega_s, scans 1000 grid points downward from min(omega) and returns the
/// first feasible one. Throws ConfigError on a disconnected graph.
SyncResult solve_sync_conditions(const std::vector<double>& frequencies, const Adjacency& adj,
                                 std::optional<double> omega_s = std::nullopt);

/// Lawson-Hanson nonnegative least squares: argmin |A x - b| s.t. x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Closed-form auxiliary node for a triangle with free weights mu12, mu13.
/// The auxiliary node links to the third triangle node with weight mu_a.
struct AuxiliaryNode {
  double omega_s = 0.0;
  double mu23 = 0.0;
  double mu_a = 0.0;
  double omega_a = 0.0;
  bool needed = true;  ///< false when mu_a == 0 (the triangle is already solvable)
  std::vector<double> frequencies;  ///< augmented: omega_1..3, omega_a
  Adjacency adjacency;              ///< triangle plus the (2, 3) auxiliary edge
};

/// Throws InfeasibleError naming the violated inequality.
AuxiliaryNode add_auxiliary_node(const std::vector<double>& frequencies, double mu12,
                                 double mu13);

/// Auxiliary construction for an arbitrary triangle: tries every labelling of
/// the three nodes (the auxiliary node attaches to the third) with small free
/// weights and returns the first that satisfies all inequalities.
struct AuxiliarySuggestion {
  std::array<std::size_t, 3> order{};  ///< order[i] = original index of triangle node i
  double mu12 = 0.0;
  double mu13 = 0.0;
  AuxiliaryNode node;  ///< in the permuted labelling
};

/// Throws InfeasibleError if no labelling works.
AuxiliarySuggestion suggest_auxiliary(const std::vector<double>& frequencies);

/// Residuals of the four augmented-triangle conditions.
std::vector<double> auxiliary_residuals(const std::vector<double>& frequencies, double mu12,
                                        double mu13, const AuxiliaryNode& aux);

/// Mean of the strict upper triangle of a pairwise fidelity matrix.
double network_avg_fidelity(const Eigen::MatrixXd& pairwise);

// ---------------------------------------------------------------------------
// Time-varying topology

struct NodeJoin {
  NodeParams params;
  std::vector<std::pair<std::size_t, double>> classical;  ///< (neighbour, K)
  std::vector<std::size_t> quantum;                       ///< phonon neighbours
  /// When set, params.omega_m is read as the bare frequency of the new node:
  /// phonon weights become (omega_new - omega_s) / degree, the new node runs
  /// at omega_s with shift omega_new - omega_s, and each neighbour's shift
  /// grows by its new weight so the dissipative condition keeps holding.
  /// Otherwise `mu` is used directly.
  std::optional<double> omega_s;
  double mu = 0.0;
};

enum class EventKind {
  ConnectClassical,
  DisconnectClassical,
  ConnectQuantum,
  DisconnectQuantum,
  AddNode,
};

struct TopologyEvent {
  double time = 0.0;
  EventKind kind = EventKind::ConnectQuantum;
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
  NodeJoin join;  ///< used by AddNode only
};

/// Events sorted by time (stable for equal times).
class TopologySchedule {
 public:
  TopologySchedule() = default;
  explicit TopologySchedule(std::vector<TopologyEvent> events);

  void add(TopologyEvent ev);
  const std::vector<TopologyEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  double last_time() const;

 private:
  std::vector<TopologyEvent> events_;
};

/// Applies one event to the graphs and node list. Node additions append the
/// node at index size().
void apply_event(const TopologyEvent& ev, Network& net, NodeList& nodes);

/// Coupling matrices of the network replayed through `schedule` at `samples`
/// uniform times over [t0, t1].
std::vector<Eigen::MatrixXcd> sample_topology(const Network& initial, const NodeList& nodes,
                                              const TopologySchedule& schedule, double t0,
                                              double t1, std::size_t samples);

double average_distance(const Network& initial, const NodeList& nodes,
                        const TopologySchedule& schedule, double t0, double t1,
                        std::size_t samples, Normalization norm = Normalization::Polar);

}  // namespace qsync
