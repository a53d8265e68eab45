#include "qsync/dynamics.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qsync/errors.hpp"

namespace qsync {

void NodeParams::validate() const {
  if (!(kappa > 0.0)) throw ConfigError(fmt::format("kappa must be positive, got {}", kappa));
  if (!(gamma > 0.0)) throw ConfigError(fmt::format("gamma must be positive, got {}", gamma));
  if (!(n_bath >= 0.0)) throw ConfigError(fmt::format("n_bath must be >= 0, got {}", n_bath));
  if (!(omega_m > 0.0)) throw ConfigError(fmt::format("omega_m must be positive, got {}", omega_m));
  for (double v : {delta, g, drive, eta}) {
    if (!std::isfinite(v)) throw ConfigError("node parameters must be finite");
  }
}

void CircuitParams::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError(fmt::format("epsilon must be positive, got {}", epsilon));
  for (double v : {nu, drive, omega0}) {
    if (!std::isfinite(v)) throw ConfigError("circuit parameters must be finite");
  }
}

void Model::validate() const {
  circuit.validate();
  for (const auto& n : nodes) n.validate();
  if (net.classical.size() != nodes.size() || net.quantum.size() != nodes.size()) {
    throw ConfigError(fmt::format("graphs have {} / {} nodes but {} node parameter sets",
                                  net.classical.size(), net.quantum.size(), nodes.size()));
  }
}

Eigen::VectorXd modulation(const CircuitState& circuit, const NodeList& nodes) {
  Eigen::VectorXd c(circuit.u_nl.size());
  for (Eigen::Index j = 0; j < c.size(); ++j) {
    c(j) = nodes[static_cast<std::size_t>(j)].eta * circuit.u_nl(j);
  }
  return c;
}

CircuitState duffing_derivative(const CircuitState& state, const CircuitParams& cp,
                                const ClassicalGraph& gc, double t) {
  const Eigen::Index n = state.phi.size();
  if (static_cast<Eigen::Index>(gc.size()) != n) {
    throw ConfigError(fmt::format("classical graph has {} nodes, state has {}", gc.size(), n));
  }
  const double forcing = cp.drive * std::cos(cp.omega0 * t);
  CircuitState d{state.u_nl, Eigen::VectorXd(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const double phi = state.phi(j);
    const double u = state.u_nl(j);
    double coupling = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double w = gc.weights()(j, k);
      if (w != 0.0) coupling += w * (state.u_nl(k) - u);
    }
    d.u_nl(j) = -cp.epsilon * u - phi - cp.nu * phi * phi * phi + forcing + cp.epsilon * coupling;
  }
  return d;
}

MeanField mean_derivative(const MeanField& mean, const Eigen::VectorXd& c_of_t,
                          const NodeList& nodes, const QuantumGraph& gq) {
  const Eigen::Index n = mean.a.size();
  const Complex i(0.0, 1.0);
  MeanField d{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& p = nodes[static_cast<std::size_t>(j)];
    const Complex a = mean.a(j);
    const Complex b = mean.b(j);
    const double c = c_of_t(j);
    d.a(j) = (-p.kappa + i * (p.delta + 2.0 * p.g * b.real())) * a + p.drive;
    Complex db = (-p.gamma - i * p.omega_m * (1.0 + 0.5 * c)) * b + i * p.g * std::norm(a) -
                 i * (0.5 * p.omega_m * c) * std::conj(b);
    db -= i * gq.shifts()(j) * b;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double mu = gq.coupling()(j, k);
      if (mu != 0.0) db += i * mu * mean.b(k);
    }
    d.b(j) = db;
  }
  return d;
}

Eigen::VectorXcd quantum_coupling_term(const MeanField& mean, const QuantumGraph& gq) {
  const Eigen::Index n = mean.b.size();
  const Complex i(0.0, 1.0);
  Eigen::VectorXcd out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex sum = -i * gq.shifts()(j) * mean.b(j);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != j) sum += i * gq.coupling()(j, k) * mean.b(k);
    }
    out(j) = sum;
  }
  return out;
}

void drift_entries(const MeanField& mean, const Eigen::VectorXd& c_of_t, const NodeList& nodes,
                   const QuantumGraph& gq, std::vector<DriftEntry>& out) {
  out.clear();
  const auto n = static_cast<Eigen::Index>(nodes.size());
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& p = nodes[static_cast<std::size_t>(j)];
    const Eigen::Index x = 2 * j;
    const Eigen::Index y = x + 1;
    const Eigen::Index q = 2 * n + 2 * j;
    const Eigen::Index pm = q + 1;
    const double gamma_eff = p.delta + 2.0 * p.g * mean.b(j).real();
    const double ga_re = 2.0 * p.g * mean.a(j).real();
    const double ga_im = 2.0 * p.g * mean.a(j).imag();

    out.push_back({x, x, -p.kappa});
    out.push_back({x, y, -gamma_eff});
    out.push_back({x, q, -ga_im});
    out.push_back({y, x, gamma_eff});
    out.push_back({y, y, -p.kappa});
    out.push_back({y, q, ga_re});

    out.push_back({q, q, -p.gamma});
    out.push_back({q, pm, p.omega_m});
    out.push_back({pm, x, ga_re});
    out.push_back({pm, y, ga_im});
    out.push_back({pm, q, -p.omega_m * (1.0 + c_of_t(j))});
    out.push_back({pm, pm, -p.gamma});
    if (const double shift = gq.shifts()(j); shift != 0.0) {
      out.push_back({q, pm, shift});
      out.push_back({pm, q, -shift});
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double mu = gq.coupling()(j, k);
      if (mu == 0.0) continue;
      const Eigen::Index qk = 2 * n + 2 * k;
      out.push_back({q, qk + 1, -mu});
      out.push_back({pm, qk, mu});
    }
  }
}

Eigen::MatrixXd build_drift_matrix(const MeanField& mean, const Eigen::VectorXd& c_of_t,
                                   const NodeList& nodes, const QuantumGraph& gq) {
  std::vector<DriftEntry> entries;
  drift_entries(mean, c_of_t, nodes, gq, entries);
  const auto dim = static_cast<Eigen::Index>(4 * nodes.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& e : entries) s(e.row, e.col) += e.value;
  return s;
}

Eigen::VectorXd build_noise_matrix(const NodeList& nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::VectorXd d(4 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& p = nodes[static_cast<std::size_t>(j)];
    d(2 * j) = p.kappa;
    d(2 * j + 1) = p.kappa;
    d(2 * n + 2 * j) = p.gamma * (2.0 * p.n_bath + 1.0);
    d(2 * n + 2 * j + 1) = p.gamma * (2.0 * p.n_bath + 1.0);
  }
  return d;
}

Eigen::MatrixXd lyapunov_rhs(const Eigen::MatrixXd& v, const Eigen::MatrixXd& drift,
                             const Eigen::VectorXd& noise) {
  if (v.rows() != drift.rows() || v.cols() != drift.cols() || noise.size() != v.rows()) {
    throw ConfigError("lyapunov_rhs dimension mismatch");
  }
  const Eigen::MatrixXd sv = drift * v;
  Eigen::MatrixXd out = sv + sv.transpose();
  out.diagonal() += noise;
  return symmetrize(out);
}

// ---------------------------------------------------------------------------
// Integration

Integrator::Integrator(const Model& model) { reset(model); }

void Integrator::reset(const Model& model) {
  model.validate();
  model_ = &model;
  n_ = model.size();
  const auto n = static_cast<Eigen::Index>(n_);
  const Eigen::Index len = 6 * n + 16 * n * n;
  for (auto* v : {&y_, &k1_, &k2_, &k3_, &k4_, &tmp_}) v->resize(len);
  noise_ = build_noise_matrix(model.nodes);
  w_.resize(4 * n, 4 * n);
}

void Integrator::pack(const SimState& s, Eigen::VectorXd& y) const {
  const auto n = static_cast<Eigen::Index>(n_);
  y.segment(0, n) = s.circuit.phi;
  y.segment(n, n) = s.circuit.u_nl;
  y.segment(2 * n, n) = s.mean.a.real();
  y.segment(3 * n, n) = s.mean.a.imag();
  y.segment(4 * n, n) = s.mean.b.real();
  y.segment(5 * n, n) = s.mean.b.imag();
  y.segment(6 * n, 16 * n * n) = Eigen::Map<const Eigen::VectorXd>(s.cov.matrix().data(), 16 * n * n);
}

void Integrator::unpack(const Eigen::VectorXd& y, SimState& s) const {
  const auto n = static_cast<Eigen::Index>(n_);
  s.circuit.phi = y.segment(0, n);
  s.circuit.u_nl = y.segment(n, n);
  s.mean.a.resize(n);
  s.mean.b.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    s.mean.a(j) = Complex(y(2 * n + j), y(3 * n + j));
    s.mean.b(j) = Complex(y(4 * n + j), y(5 * n + j));
  }
  s.cov = CovarianceMatrix(Eigen::Map<const Eigen::MatrixXd>(y.data() + 6 * n, 4 * n, 4 * n));
}

void Integrator::rhs(double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
  const auto& m = *model_;
  const auto n = static_cast<Eigen::Index>(n_);
  const Complex i(0.0, 1.0);
  const auto phi = y.segment(0, n);
  const auto u = y.segment(n, n);
  const double forcing = m.circuit.drive * std::cos(m.circuit.omega0 * t);
  const auto& kw = m.net.classical.weights();
  const auto& mu = m.net.quantum.coupling();
  const auto& shifts = m.net.quantum.shifts();

  MeanField mean{Eigen::VectorXcd(n), Eigen::VectorXcd(n)};
  Eigen::VectorXd c(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    mean.a(j) = Complex(y(2 * n + j), y(3 * n + j));
    mean.b(j) = Complex(y(4 * n + j), y(5 * n + j));
    c(j) = m.nodes[static_cast<std::size_t>(j)].eta * u(j);
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    const auto& p = m.nodes[static_cast<std::size_t>(j)];
    double coupling = 0.0;
    Complex phonon = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (kw(j, k) != 0.0) coupling += kw(j, k) * (u(k) - u(j));
      if (k != j && mu(j, k) != 0.0) phonon += mu(j, k) * mean.b(k);
    }
    dy(j) = u(j);
    dy(n + j) = -m.circuit.epsilon * u(j) - phi(j) - m.circuit.nu * phi(j) * phi(j) * phi(j) +
                forcing + m.circuit.epsilon * coupling;
    const Complex a = mean.a(j);
    const Complex b = mean.b(j);
    const Complex da = (-p.kappa + i * (p.delta + 2.0 * p.g * b.real())) * a + p.drive;
    const Complex db = (-p.gamma - i * p.omega_m * (1.0 + 0.5 * c(j))) * b +
                       i * p.g * std::norm(a) - i * (0.5 * p.omega_m * c(j)) * std::conj(b) +
                       i * (phonon - shifts(j) * b);
    dy(2 * n + j) = da.real();
    dy(3 * n + j) = da.imag();
    dy(4 * n + j) = db.real();
    dy(5 * n + j) = db.imag();
  }

  // dV = W + W^T + N with W = V S^T, accumulated column by column.
  drift_entries(mean, c, m.nodes, m.net.quantum, entries_);
  const Eigen::Index dim = 4 * n;
  Eigen::Map<const Eigen::MatrixXd> v(y.data() + 6 * n, dim, dim);
  Eigen::Map<Eigen::MatrixXd> dv(dy.data() + 6 * n, dim, dim);
  w_.setZero();
  for (const auto& e : entries_) w_.col(e.row).noalias() += e.value * v.col(e.col);
  for (Eigen::Index col = 0; col < dim; ++col) {
    for (Eigen::Index row = col; row < dim; ++row) {
      const double val = w_(row, col) + w_(col, row);
      dv(row, col) = val;
      dv(col, row) = val;
    }
    dv(col, col) += noise_(col);
  }
}

void Integrator::step(SimState& state, double dt) {
  if (!(dt > 0.0)) throw ConfigError(fmt::format("dt must be positive, got {}", dt));
  if (state.nodes() != n_) {
    throw ConfigError(fmt::format("state has {} nodes, model has {}", state.nodes(), n_));
  }
  const double t = state.t;
  pack(state, y_);
  rhs(t, y_, k1_);
  tmp_ = y_ + 0.5 * dt * k1_;
  rhs(t + 0.5 * dt, tmp_, k2_);
  tmp_ = y_ + 0.5 * dt * k2_;
  rhs(t + 0.5 * dt, tmp_, k3_);
  tmp_ = y_ + dt * k3_;
  rhs(t + dt, tmp_, k4_);
  y_ += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);

  const auto n = static_cast<Eigen::Index>(n_);
  const double t_new = t + dt;
  if (!y_.segment(0, 2 * n).allFinite()) throw IntegrationBlowup("circuit", t_new);
  if (!y_.segment(2 * n, 4 * n).allFinite()) throw IntegrationBlowup("mean field", t_new);
  if (!y_.segment(6 * n, 16 * n * n).allFinite()) throw IntegrationBlowup("covariance", t_new);
  unpack(y_, state);
  state.t = t_new;
}

SimState step(const SimState& state, double dt, const Model& model) {
  Integrator integ(model);
  SimState out = state;
  integ.step(out, dt);
  return out;
}

// ---------------------------------------------------------------------------
// Initial conditions

namespace {

void draw_node(Rng& rng, double& phi, double& u, Complex& b) {
  phi = uniform(rng, -1.0, 1.0);
  u = uniform(rng, -1.0, 1.0);
  const double re = uniform(rng, -1.0, 1.0);
  const double im = uniform(rng, -1.0, 1.0);
  b = Complex(re, im);
}

}  // namespace

SimState initial_state(const NodeList& nodes, const InitialSpec& spec, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  SimState s;
  s.circuit.phi.resize(n);
  s.circuit.u_nl.resize(n);
  s.mean.a = Eigen::VectorXcd::Zero(n);
  s.mean.b.resize(n);
  if (spec.optical == InitialOptical::Coherent &&
      spec.alpha.size() != static_cast<std::size_t>(n)) {
    throw ConfigError(fmt::format("coherent initial state needs {} amplitudes, got {}", n,
                                  spec.alpha.size()));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    draw_node(rng, s.circuit.phi(j), s.circuit.u_nl(j), s.mean.b(j));
    if (spec.optical == InitialOptical::Coherent) s.mean.a(j) = spec.alpha[static_cast<std::size_t>(j)];
  }
  Eigen::MatrixXd v = 0.5 * Eigen::MatrixXd::Identity(4 * n, 4 * n);
  if (spec.thermal_mechanics) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double var = nodes[static_cast<std::size_t>(j)].n_bath + 0.5;
      v(2 * n + 2 * j, 2 * n + 2 * j) = var;
      v(2 * n + 2 * j + 1, 2 * n + 2 * j + 1) = var;
    }
  }
  s.cov = CovarianceMatrix(v);
  return s;
}

void grow_state(SimState& state, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(state.nodes());
  state.circuit.phi.conservativeResize(n + 1);
  state.circuit.u_nl.conservativeResize(n + 1);
  state.mean.a.conservativeResize(n + 1);
  state.mean.b.conservativeResize(n + 1);
  draw_node(rng, state.circuit.phi(n), state.circuit.u_nl(n), state.mean.b(n));
  state.mean.a(n) = 0.0;
  // New optical mode lands at index n, new mechanical mode at the end.
  state.cov = state.cov.with_inserted_vacuum(
      {static_cast<std::size_t>(n), static_cast<std::size_t>(2 * n + 1)});
}

double eta_from_physical(double c0, double q_mr, double phi0, double eps0, double m,
                         double omega_m, double d, double chi1, double cap) {
  for (double v : {c0, q_mr, phi0, eps0, m, omega_m, d, chi1, cap}) {
    if (!(v > 0.0)) throw ConfigError(fmt::format("eta inputs must be positive, got {}", v));
  }
  return c0 * q_mr * phi0 * std::sqrt(chi1 / cap) /
         (std::numbers::pi * eps0 * m * omega_m * omega_m * d * d * d);
}

}  // namespace qsync
