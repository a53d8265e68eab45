#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qsync/gaussian.hpp"
#include "qsync/network.hpp"
#include "qsync/params.hpp"
#include "qsync/random.hpp"
#include "qsync/types.hpp"

namespace qsync {

/// Duffing circuit variables per node.
struct CircuitState {
  Eigen::VectorXd phi;   ///< flux
  Eigen::VectorXd u_nl;  ///< nonlinear-inductor voltage
};

/// Mean optical (A) and mechanical (B) amplitudes per node.
struct MeanField {
  Eigen::VectorXcd a;
  Eigen::VectorXcd b;
};

struct SimState {
  double t = 0.0;
  CircuitState circuit;
  MeanField mean;
  CovarianceMatrix cov;

  std::size_t nodes() const { return static_cast<std::size_t>(circuit.phi.size()); }
};

/// Everything the vector field depends on besides the state itself.
struct Model {
  NodeList nodes;
  CircuitParams circuit;
  Network net;

  std::size_t size() const { return nodes.size(); }
  void validate() const;
};

/// C_j(t) = eta_j U_NL,j.
Eigen::VectorXd modulation(const CircuitState& circuit, const NodeList& nodes);

CircuitState duffing_derivative(const CircuitState& state, const CircuitParams& cp,
                                const ClassicalGraph& gc, double t);

/// Mean-field Langevin equations. The node's omega_m is the frequency the
/// circuit modulates; the quantum-graph shift adds an unmodulated
/// -i shift_j B_j, so the bare frequency of node j is omega_m + shift_j.
MeanField mean_derivative(const MeanField& mean, const Eigen::VectorXd& c_of_t,
                          const NodeList& nodes, const QuantumGraph& gq);

/// i sum_k mu_jk B_k - i shift_j B_j: the part of dB_j/dt that the
/// dissipative condition cancels when all B_j agree.
Eigen::VectorXcd quantum_coupling_term(const MeanField& mean, const QuantumGraph& gq);

/// One nonzero of the drift matrix.
struct DriftEntry {
  Eigen::Index row;
  Eigen::Index col;
  double value;
};

/// Nonzeros of the 4N x 4N fluctuation drift matrix in covariance ordering
/// (all optical (x, y) pairs, then all mechanical (q, p) pairs).
void drift_entries(const MeanField& mean, const Eigen::VectorXd& c_of_t, const NodeList& nodes,
                   const QuantumGraph& gq, std::vector<DriftEntry>& out);

Eigen::MatrixXd build_drift_matrix(const MeanField& mean, const Eigen::VectorXd& c_of_t,
                                   const NodeList& nodes, const QuantumGraph& gq);

/// Diagonal of the noise correlation matrix: kappa on both optical
/// quadratures, gamma (2 n_bath + 1) on both mechanical quadratures.
Eigen::VectorXd build_noise_matrix(const NodeList& nodes);

/// S V + V S^T + N, exactly symmetric.
Eigen::MatrixXd lyapunov_rhs(const Eigen::MatrixXd& v, const Eigen::MatrixXd& drift,
                             const Eigen::VectorXd& noise);

/// Advances circuit, mean field and covariance together by one classical RK4
/// step. Throws IntegrationBlowup if any component turns non-finite.
SimState step(const SimState& state, double dt, const Model& model);

/// Reusable integrator that avoids per-step allocations.
class Integrator {
 public:
  explicit Integrator(const Model& model);

  /// Rebinds to a model whose node count may have changed.
  void reset(const Model& model);
  void step(SimState& state, double dt);

 private:
  void pack(const SimState& s, Eigen::VectorXd& y) const;
  void unpack(const Eigen::VectorXd& y, SimState& s) const;
  void rhs(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy);

  const Model* model_ = nullptr;
  std::size_t n_ = 0;
  Eigen::VectorXd y_, k1_, k2_, k3_, k4_, tmp_, noise_;
  Eigen::MatrixXd w_;
  std::vector<DriftEntry> entries_;
};

enum class InitialOptical { Vacuum, Coherent };

/// Initial-state recipe. Circuit variables and mechanical means are drawn
/// uniformly from [-1, 1]; the optical means start at `alpha` (zero for
/// vacuum); the covariance starts at vacuum, optionally with thermal
/// mechanical occupancy n_bath.
struct InitialSpec {
  InitialOptical optical = InitialOptical::Vacuum;
  std::vector<Complex> alpha;  ///< per node, used when Coherent
  bool thermal_mechanics = false;
};

SimState initial_state(const NodeList& nodes, const InitialSpec& spec, Rng& rng);

/// Appends node `node` (index = state.nodes()) with random circuit and
/// mechanical means, vacuum optics and a vacuum covariance block.
void grow_state(SimState& state, Rng& rng);

/// eta = C0 Q_MR phi0 sqrt(chi1 / C) / (pi eps0 m omega_m^2 d^3).
double eta_from_physical(double c0, double q_mr, double phi0, double eps0, double m,
                         double omega_m, double d, double chi1, double cap);

}  // namespace qsync
