#include <optional>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsync/config.hpp"
#include "qsync/errors.hpp"
#include "qsync/gaussian.hpp"
#include "qsync/harness.hpp"
#include "qsync/network.hpp"

namespace py = pybind11;
using namespace qsync;

namespace {

Normalization normalization(const std::string& name) {
  if (name == "polar") return Normalization::Polar;
  if (name == "trace") return Normalization::TraceNorm;
  throw ConfigError("normalization must be 'polar' or 'trace', got '" + name + "'");
}

Adjacency adjacency(std::size_t nodes, const std::vector<Edge>& edges) {
  Adjacency adj;
  adj.nodes = nodes;
  adj.edges = edges;
  return adj;
}

py::dict solution_dict(const SyncResult& res) {
  py::dict out;
  if (const auto* sol = std::get_if<SyncSolution>(&res)) {
    out["feasible"] = true;
    out["omega_s"] = sol->omega_s;
    out["residual"] = sol->residual;
    out["coupling"] = sol->quantum.coupling();
    out["shifts"] = sol->quantum.shifts();
    out["q_ratio"] = sol->q_ratio;
  } else {
    const auto& bad = std::get<SyncInfeasible>(res);
    out["feasible"] = false;
    out["omega_s"] = bad.omega_s;
    out["residual_norm"] = bad.residual_norm;
    out["most_negative_weight"] = bad.most_negative_weight;
    out["reason"] = bad.reason;
  }
  return out;
}

py::dict run_dict(const ScenarioConfig& cfg, const RunResult& run) {
  py::dict columns;
  for (const auto& [name, values] : columns_of(run)) {
    columns[py::str(name)] = py::array_t<double>(static_cast<py::ssize_t>(values.size()), values.data());
  }
  py::dict out;
  out["columns"] = columns;
  out["pairs"] = run.pairs;
  out["nodes"] = run.nodes;
  out["failure"] = run.failure ? py::object(py::str(*run.failure)) : py::object(py::none());
  out["summary"] = summary_json(cfg, run);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coupled electro-optomechanical network simulator";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<NonPhysicalError>(m, "NonPhysicalError", base.ptr());
  py::register_exception<IntegrationBlowup>(m, "IntegrationBlowup", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());

  m.def("gaussian_fidelity", &gaussian_fidelity, py::arg("v1"), py::arg("mean1"), py::arg("v2"),
        py::arg("mean2"),
        "Fidelity of two single-mode Gaussian states (vacuum variance 1/2).");
  m.def("log_negativity", py::overload_cast<const Eigen::Matrix4d&>(&log_negativity),
        py::arg("two_mode"));
  m.def("symplectic_eigenvalues", &symplectic_eigenvalues, py::arg("v"));
  m.def("partial_transpose", &partial_transpose, py::arg("v"), py::arg("which") = 1);
  m.def(
      "second_order_sync",
      [](const Eigen::MatrixXd& v, std::size_t first, std::size_t second) {
        return second_order_sync(CovarianceMatrix(v), {first, second});
      },
      py::arg("v"), py::arg("first"), py::arg("second"));

  m.def(
      "gen_small_world",
      [](std::size_t n, std::size_t mm, double p, double k_weight, double mu, std::uint64_t seed) {
        Rng rng(seed);
        const auto net = gen_small_world(n, mm, p, k_weight, mu, rng);
        return py::make_tuple(net.classical.weights(), net.quantum.coupling());
      },
      py::arg("n") = 12, py::arg("m") = 2, py::arg("p") = 0.1, py::arg("k_weight") = 2.0,
      py::arg("mu") = 0.02, py::arg("seed") = 1,
      "Returns (classical weights, phonon couplings) as dense matrices.");
  m.def(
      "gen_scale_free",
      [](std::size_t m0, std::size_t mm, std::size_t steps, std::uint64_t seed) {
        Rng rng(seed);
        const auto adj = gen_scale_free(m0, mm, steps, rng);
        return py::make_tuple(adj.nodes, adj.edges);
      },
      py::arg("m0") = 3, py::arg("m") = 2, py::arg("steps") = 15, py::arg("seed") = 1,
      "Returns (node count, edge list).");
  m.def(
      "solve_sync_conditions",
      [](const std::vector<double>& freqs, const std::vector<Edge>& edges,
         std::optional<double> omega_s) {
        return solution_dict(solve_sync_conditions(freqs, adjacency(freqs.size(), edges), omega_s));
      },
      py::arg("frequencies"), py::arg("edges"), py::arg("omega_s") = py::none());
  m.def(
      "add_auxiliary_node",
      [](const std::vector<double>& freqs, double mu12, double mu13) {
        const auto aux = add_auxiliary_node(freqs, mu12, mu13);
        py::dict out;
        out["omega_s"] = aux.omega_s;
        out["mu23"] = aux.mu23;
        out["mu_a"] = aux.mu_a;
        out["omega_a"] = aux.omega_a;
        out["needed"] = aux.needed;
        return out;
      },
      py::arg("frequencies"), py::arg("mu12"), py::arg("mu13"));
  m.def(
      "trace_distance",
      [](const Eigen::MatrixXcd& g1, const Eigen::MatrixXcd& g2, const std::string& norm) {
        return trace_distance(g1, g2, normalization(norm));
      },
      py::arg("g1"), py::arg("g2"), py::arg("normalization") = "polar");
  m.def(
      "coupling_matrix",
      [](const Eigen::MatrixXd& classical, const Eigen::MatrixXd& phonon) {
        const auto n = static_cast<std::size_t>(classical.rows());
        Network net{ClassicalGraph(n), QuantumGraph(n)};
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t k = j + 1; k < n; ++k) {
            const auto r = static_cast<Eigen::Index>(j);
            const auto c = static_cast<Eigen::Index>(k);
            if (classical(r, c) != 0.0) net.classical.connect(j, k, classical(r, c));
            if (phonon(r, c) != 0.0) net.quantum.connect(j, k, phonon(r, c));
          }
        }
        return coupling_matrix(net.classical, net.quantum);
      },
      py::arg("classical"), py::arg("phonon"));

  m.def("window_average", &window_average, py::arg("t"), py::arg("x"), py::arg("window"));
  m.def(
      "simulate",
      [](const std::string& text, std::optional<std::uint64_t> seed, std::optional<double> t_end) {
        auto cfg = parse_config_string(text, "config").scenario;
        if (seed) cfg.seed = *seed;
        if (t_end) cfg.t_end = *t_end;
        cfg.validate();
        RunResult run;
        {
          py::gil_scoped_release release;
          run = simulate(cfg);
        }
        return run_dict(cfg, run);
      },
      py::arg("config"), py::arg("seed") = py::none(), py::arg("t_end") = py::none(),
      "Runs a scenario given as configuration text; returns columns, pairs and summary JSON.");
}
