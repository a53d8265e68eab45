#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "qsync/errors.hpp"
#include "qsync/gaussian.hpp"
#include "qsync/harness.hpp"
#include "qsync/network.hpp"

#include "oracles.hpp"

using namespace qsync;

namespace {

constexpr std::array<std::uint64_t, 5> kSeeds{1, 2, 3, 4, 5};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

class Report {
 public:
  void verdict(int id, bool pass, const std::string& what) {
    fmt::print("criterion {} {}  {}\n", id, pass ? "PASS" : "FAIL", what);
    std::fflush(stdout);
    if (!pass) ++failures_;
  }
  template <typename... Args>
  void info(fmt::format_string<Args...> f, Args&&... args) {
    fmt::print("    {}\n", fmt::format(f, std::forward<Args>(args)...));
    std::fflush(stdout);
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

Report report;

// Lowest symplectic eigenvalue seen in any sampled state of the dynamical
// criteria, plus runs that could not complete.
struct Hygiene {
  double nu_floor = std::numeric_limits<double>::infinity();
  std::string nu_floor_run;
  double nu_floor_t = 0.0;
  std::size_t runs = 0;
  std::vector<std::string> failed;
} hygiene;

class Trace {
 public:
  Trace(std::string label, const ScenarioConfig& cfg) : label_(std::move(label)) {
    const auto start = Clock::now();
    run_ = simulate(cfg);
    seconds_ = seconds_since(start);
    cols_ = columns_of(run_);
    ++hygiene.runs;
    if (run_.failure) {
      hygiene.failed.push_back(fmt::format("{}: {}", label_, *run_.failure));
      report.info("{} did not complete: {}", label_, *run_.failure);
    }
    if (const auto it = cols_.find("numin"); it != cols_.end()) {
      const auto& tt = cols_.at("t");
      for (std::size_t i = 0; i < it->second.size(); ++i) {
        const double v = it->second[i];
        if (std::isfinite(v) && v < hygiene.nu_floor) {
          hygiene.nu_floor = v;
          hygiene.nu_floor_run = label_;
          hygiene.nu_floor_t = tt[i];
        }
      }
    }
  }

  const RunResult& run() const { return run_; }
  bool completed() const { return !run_.failure.has_value(); }
  double seconds() const { return seconds_; }
  double t_last() const { return run_.records.empty() ? 0.0 : run_.records.back().t; }

  const std::vector<double>& col(const std::string& name) const {
    const auto it = cols_.find(name);
    if (it == cols_.end()) throw ConfigError(fmt::format("{} has no column {}", label_, name));
    return it->second;
  }
  const std::vector<double>& t() const { return col("t"); }

  double mean(const std::string& name, double t0, double t1, bool absolute = false) const {
    auto x = col(name);
    if (absolute) {
      for (auto& v : x) v = std::abs(v);
    }
    return time_average(t(), x, t0, t1);
  }
  /// Mean over the last 20 % of the run (the acceptance late window).
  double late_mean(const std::string& name, bool absolute = false) const {
    if (!completed()) return kNaN;
    return mean(name, 0.8 * t_last(), t_last(), absolute);
  }
  double extreme(const std::string& name, double t0, bool want_max, bool absolute = false) const {
    const auto& x = col(name);
    const auto& tt = t();
    double out = want_max ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (tt[i] < t0 - 1e-9 || !std::isfinite(x[i])) continue;
      const double v = absolute ? std::abs(x[i]) : x[i];
      out = want_max ? std::max(out, v) : std::min(out, v);
    }
    return out;
  }
  double late_max_abs(const std::string& name) const {
    if (!completed()) return kNaN;
    return extreme(name, 0.8 * t_last(), true, true);
  }
  double late_min(const std::string& name) const {
    if (!completed()) return kNaN;
    return extreme(name, 0.8 * t_last(), false);
  }

 private:
  std::string label_;
  RunResult run_;
  std::map<std::string, std::vector<double>> cols_;
  double seconds_ = 0.0;
};

std::string pair_name(const char* base, const Edge& e) {
  return fmt::format("{}_{}_{}", base, e.first, e.second);
}

std::string list(const std::vector<double>& v, const char* spec = "{:.4f}") {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + fmt::format(fmt::runtime(spec), x);
  return out;
}

double average(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? kNaN : s / static_cast<double>(v.size());
}

bool all_of(const std::vector<double>& v, const std::function<bool(double)>& pred) {
  return std::all_of(v.begin(), v.end(), pred);
}

// ---------------------------------------------------------------------------
// Two-node variants

using Tweak = std::function<void(ScenarioConfig&)>;

struct Variant {
  std::string label;
  std::vector<Trace> traces;

  std::vector<double> late_means(const std::string& col, bool absolute = false) const {
    std::vector<double> out;
    for (const auto& tr : traces) out.push_back(tr.late_mean(col, absolute));
    return out;
  }
  std::vector<double> late_max_abs(const std::string& col) const {
    std::vector<double> out;
    for (const auto& tr : traces) out.push_back(tr.late_max_abs(col));
    return out;
  }
};

Variant two_node(const std::string& label, const Tweak& tweak) {
  Variant v{label, {}};
  const auto start = Clock::now();
  for (auto seed : kSeeds) {
    auto cfg = point_to_point_config();
    cfg.seed = seed;
    tweak(cfg);
    v.traces.emplace_back(fmt::format("{} seed {}", label, seed), cfg);
  }
  report.info("ran '{}' for {} seeds in {:.1f} s", label, kSeeds.size(), seconds_since(start));
  return v;
}

void criteria_point_to_point() {
  const auto base = two_node("K=2 mu=0.02", [](ScenarioConfig&) {});
  const auto no_k = two_node("K=0 mu=0.02", [](ScenarioConfig& c) { c.k_weight = 0.0; });
  const auto no_mu = two_node("K=2 mu=0", [](ScenarioConfig& c) { c.mu = 0.0; });
  const auto none = two_node("K=0 mu=0", [](ScenarioConfig& c) {
    c.k_weight = 0.0;
    c.mu = 0.0;
  });

  // 1: first-order synchronization
  {
    const auto q = base.late_means("qminus_0_1", true);
    const auto p = base.late_means("pminus_0_1", true);
    const auto ctrl_k = no_k.late_max_abs("qminus_0_1");
    const auto ctrl_mu = no_mu.late_max_abs("qminus_0_1");
    const bool synced = all_of(q, [](double v) { return v < 0.1; }) &&
                        all_of(p, [](double v) { return v < 0.1; });
    const bool controls = all_of(ctrl_k, [](double v) { return v > 0.5; }) &&
                          all_of(ctrl_mu, [](double v) { return v > 0.5; });
    report.verdict(1, synced && controls,
                   fmt::format("late mean |q-| [{}] |p-| [{}] (< 0.1); controls late max |q-| "
                               "K=0 [{}] mu=0 [{}] (> 0.5)",
                               list(q, "{:.2e}"), list(p, "{:.2e}"), list(ctrl_k, "{:.3f}"),
                               list(ctrl_mu, "{:.3f}")));
  }

  // 2: second-order measure
  const auto sc_base = base.late_means("sc_0_1");
  {
    const auto sc_k = no_k.late_means("sc_0_1");
    const auto sc_none = none.late_means("sc_0_1");
    const double mean_k = average(sc_k);
    const double mean_none = average(sc_none);
    const bool pass = all_of(sc_base, [](double v) { return v >= 0.2; }) && mean_k >= 0.05 &&
                      mean_k <= 0.15 && mean_none < 0.01;
    report.verdict(2, pass,
                   fmt::format("late S'c K=2,mu=0.02 [{}] (>= 0.2); K=0,mu=0.02 seed mean {:.4f} "
                               "[{}] (in [0.05, 0.15]); K=0,mu=0 seed mean {:.2e} (< 0.01)",
                               list(sc_base), mean_k, list(sc_k), mean_none));
  }

  // 3: thermal robustness
  {
    const auto hot = two_node("n_bath=2.5", [](ScenarioConfig& c) { c.node.n_bath = 2.5; });
    const auto warm = two_node("n_bath=0.25", [](ScenarioConfig& c) { c.node.n_bath = 0.25; });
    const double s0 = average(sc_base);
    const double s_warm = average(warm.late_means("sc_0_1"));
    const auto hot_sc = hot.late_means("sc_0_1");
    const double s_hot = average(hot_sc);
    const bool pass = s_hot > 0.1 && s_warm < s0 && s_warm > s_hot;
    report.verdict(3, pass,
                   fmt::format("seed-mean late S'c: n=2.5 {:.4f} [{}] (> 0.1); n=0.25 {:.4f} "
                               "between n=0 {:.4f} and n=2.5",
                               s_hot, list(hot_sc), s_warm, s0));
  }

  // 4: fidelity
  {
    const auto same_mod = two_node("coherent 1, i", [](ScenarioConfig& c) {
      c.initial.optical = InitialOptical::Coherent;
      c.initial.alpha = {Complex(1, 0), Complex(0, 1)};
    });
    const auto far = two_node("coherent 1, 10", [](ScenarioConfig& c) {
      c.initial.optical = InitialOptical::Coherent;
      c.initial.alpha = {Complex(1, 0), Complex(10, 0)};
    });
    std::vector<std::pair<std::string, std::vector<double>>> good{
        {"vacuum", base.late_means("fid_0_1")},
        {"|a|=1 both", same_mod.late_means("fid_0_1")},
        {"a=1/10", far.late_means("fid_0_1")}};
    for (double dn : {0.25, 0.5}) {
      const auto v = two_node(fmt::format("dn_bath={}", dn), [dn](ScenarioConfig& c) {
        NodeParams p = c.node;
        p.n_bath = dn;
        c.node_overrides[1] = p;
      });
      good.emplace_back(fmt::format("dn={}", dn), v.late_means("fid_0_1"));
    }
    good.emplace_back("dn=0", good.front().second);
    const std::vector<std::pair<std::string, std::vector<double>>> bad{
        {"K=0", no_k.late_means("fid_0_1")},
        {"mu=0", no_mu.late_means("fid_0_1")},
        {"none", none.late_means("fid_0_1")}};
    bool pass = true;
    std::string detail;
    for (const auto& [name, f] : good) {
      pass = pass && all_of(f, [](double v) { return v >= 0.99; });
      detail += fmt::format("{} [{}] ", name, list(f));
    }
    detail += "(>= 0.99); ";
    for (const auto& [name, f] : bad) {
      pass = pass && all_of(f, [](double v) { return v < 0.95; });
      detail += fmt::format("{} [{}] ", name, list(f));
    }
    detail += "(< 0.95)";
    report.verdict(4, pass, "late mean F: " + detail);
  }
}

// ---------------------------------------------------------------------------
// Small-world topology distance

double small_world_distance(std::uint64_t seed, double p, double mu, Normalization norm) {
  // every sample re-draws which far nodes share phonon links; the ring stays
  Rng rng(seed);
  std::vector<Eigen::MatrixXcd> samples;
  for (int k = 0; k < 51; ++k) {
    const auto net = gen_small_world(12, 2, p, 2.0, mu, rng);
    samples.push_back(coupling_matrix(net.classical, net.quantum));
  }
  return average_distance(samples, 0.0, 7500.0, norm);
}

void criterion_trace_distance() {
  auto ensemble = [](double p, double mu, Normalization norm) {
    std::vector<double> d;
    for (std::uint64_t s = 1; s <= 50; ++s) d.push_back(small_world_distance(s, p, mu, norm));
    return d;
  };
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
  };
  const auto d01 = ensemble(0.1, 0.02, Normalization::Polar);
  const auto d03 = ensemble(0.3, 0.02, Normalization::Polar);
  std::vector<double> by_mu;
  for (double mu : {0.01, 0.02, 0.04}) by_mu.push_back(average(ensemble(0.1, mu, Normalization::Polar)));
  const double m01 = average(d01);
  const double m03 = average(d03);
  const double med03 = median(d03);
  const bool monotone = by_mu[1] <= by_mu[0] && by_mu[2] <= by_mu[1];
  const bool pass = m01 >= 0.005 && m01 <= 0.02 && m03 < 0.02 && med03 < 0.015 && monotone;
  report.verdict(5, pass,
                 fmt::format("50-seed D: P=0.1 mean {:.4f} (in [0.005, 0.02]); P=0.3 mean {:.4f} "
                             "(< 0.02) median {:.4f} (< 0.015); mu=0.01/0.02/0.04 means {} "
                             "(nonincreasing)",
                             m01, m03, med03, list(by_mu)));
  std::vector<double> tn;
  for (double mu : {0.01, 0.02, 0.04}) tn.push_back(average(ensemble(0.1, mu, Normalization::TraceNorm)));
  report.info("trace-normalized variant for comparison: P=0.1 mu=0.01/0.02/0.04 means {}, "
              "P=0.3 mu=0.02 mean {:.4f}",
              list(tn), average(ensemble(0.3, 0.02, Normalization::TraceNorm)));
}

// ---------------------------------------------------------------------------
// Small-world state sharing

void criterion_small_world() {
  bool pass = true;
  std::string detail;
  const std::pair<const char*, BathPattern> baths[] = {
      {"SB", BathPattern::Separate}, {"CB", BathPattern::Common}, {"LB", BathPattern::Local}};
  for (const auto& [name, bath] : baths) {
    auto cfg = small_world_config();
    cfg.small_world.bath = bath;
    const Trace tr(fmt::format("small world {}", name), cfg);
    std::vector<double> f;
    for (const auto& e : tr.run().pairs) f.push_back(tr.late_mean(pair_name("fid", e)));
    const bool ok = tr.completed() && !f.empty() && all_of(f, [](double v) { return v >= 0.99; });
    pass = pass && ok;
    detail += fmt::format("{} pairs [{}]; ", name, list(f));
    report.info("small world {}: {} links, {:.0f} s{}", name, tr.run().pairs.size(), tr.seconds(),
                tr.completed() ? "" : " (incomplete)");
  }

  auto cfg = small_world_config();
  cfg.small_world.hold_first_pair = true;
  const Trace tr("small world hold/reconnect", cfg);
  const auto& pairs = tr.run().pairs;
  const double t2 = cfg.small_world.reconnect;
  double held_floor = kNaN;
  double held_reached = kNaN;
  std::vector<double> rejoined;
  if (!pairs.empty() && tr.completed()) {
    const auto& f = tr.col(pair_name("fid", pairs.front()));
    const auto& t = tr.t();
    const auto first = std::find_if(f.begin(), f.end(), [](double v) { return v >= 0.99; });
    if (first != f.end()) {
      held_reached = t[static_cast<std::size_t>(first - f.begin())];
      held_floor = *std::min_element(first, f.end());
    }
    for (std::size_t k = 1; k < pairs.size(); ++k) {
      rejoined.push_back(tr.mean(pair_name("fid", pairs[k]), t2 + 0.5 * (tr.t_last() - t2),
                                 tr.t_last()));
    }
  }
  const bool held_ok = std::isfinite(held_floor) && held_floor >= 0.99;
  const bool rejoin_ok = !rejoined.empty() && all_of(rejoined, [](double v) { return v >= 0.99; });
  pass = pass && held_ok && rejoin_ok;
  detail += fmt::format("held pair reaches 0.99 at t={} then min {:.4f} (>= 0.99); reconnected "
                        "pairs mean F after t2 [{}] (>= 0.99)",
                        held_reached, held_floor, list(rejoined));
  report.verdict(6, pass, "late mean F per linked pair (>= 0.99): " + detail);
  report.info("hold/reconnect run: {} links, {:.0f} s", pairs.size(), tr.seconds());
}

// ---------------------------------------------------------------------------
// Scale-free network

void criterion_scale_free() {
  const Trace fixed("scale free", scale_free_config());
  const double late = fixed.late_mean("fnet");
  const double overall = fixed.completed() ? fixed.mean("fnet", 0.0, fixed.t_last()) : kNaN;
  const double worst = fixed.late_min("fmin");
  report.info("18-node run {:.0f} s; late-window mean F(N) {:.5f}", fixed.seconds(), late);

  auto cfg = scale_free_config();
  const double t_join = 5000.0;
  cfg.scale_free.join_times = {t_join};
  const Trace joined("scale free with join", cfg);
  std::vector<double> new_sc;
  for (const auto& e : joined.run().pairs) {
    if (e.second >= 18) new_sc.push_back(joined.late_mean(pair_name("sc", e)));
  }
  const double kept = joined.late_min("fmin0");
  const double dip = joined.completed() ? joined.extreme("fmin0", t_join, false) : kNaN;

  const bool pass = late >= 0.99 && overall >= 0.99 && overall <= 0.999 && worst >= 0.985 &&
                    !new_sc.empty() &&
                    all_of(new_sc, [](double v) { return v >= 0.15 && v <= 0.35; }) &&
                    kept >= 0.99;
  report.verdict(7, pass,
                 fmt::format("late F(N) {:.5f} (>= 0.99); run-averaged F(N) {:.5f} (in [0.99, "
                             "0.999]); late worst pair {:.5f} (>= 0.985); joined-node late S'c "
                             "[{}] (in [0.15, 0.35]); original pairs late min F {:.5f} (>= 0.99)",
                             late, overall, worst, list(new_sc), kept));
  report.info("join run {:.0f} s; lowest original-pair F after the join {:.4f} (transient)",
              joined.seconds(), dip);
}

// ---------------------------------------------------------------------------
// Oracles

void criterion_oracles() {
  const auto start = Clock::now();
  Rng rng(8);

  double coherent = 0.0;
  const Eigen::Matrix2d vac = 0.5 * Eigen::Matrix2d::Identity();
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Vector2d a1(uniform(rng, -3, 3), uniform(rng, -3, 3));
    const Eigen::Vector2d a2(uniform(rng, -3, 3), uniform(rng, -3, 3));
    coherent = std::max(coherent, std::abs(gaussian_fidelity(vac, a1, vac, a2) -
                                           std::exp(-(a1 - a2).squaredNorm())));
  }

  double squeezed = 0.0;
  for (double r : {0.1, 0.5, 1.0}) {
    squeezed = std::max(squeezed, std::abs(log_negativity(oracle::two_mode_squeezed(r)) - 2.0 * r));
  }

  NodeList nodes(2);
  for (auto& p : nodes) {
    p.gamma = 0.05;
    p.n_bath = 0.3;
  }
  QuantumGraph gq(2);
  gq.connect(0, 1, 0.02);
  MeanField mf{Eigen::Vector2cd(Complex(0.3, -0.2), Complex(-0.5, 0.4)),
               Eigen::Vector2cd(Complex(1.1, 0.7), Complex(-0.6, 1.4))};
  const Eigen::Vector2d c(0.01, -0.02);
  const auto drift = build_drift_matrix(mf, c, nodes, gq);
  const auto noise = build_noise_matrix(nodes);
  const double lyapunov = (oracle::lyapunov_relax(drift, noise, 0.05, 20000) -
                           oracle::lyapunov_direct(drift, noise))
                              .cwiseAbs()
                              .maxCoeff();

  double aux = 0.0;
  for (int accepted = 0; accepted < 1000;) {
    const std::vector<double> w{uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0)};
    const double mu12 = uniform(rng, 0.001, 0.5);
    const double mu13 = uniform(rng, 0.001, 0.5);
    try {
      const auto node = add_auxiliary_node(w, mu12, mu13);
      for (double r : auxiliary_residuals(w, mu12, mu13, node)) aux = std::max(aux, std::abs(r));
      ++accepted;
    } catch (const InfeasibleError&) {
    }
  }

  double jacobian = 0.0;
  for (int k = 0; k < 20; ++k) {
    NodeList nl(3);
    for (auto& p : nl) {
      p.omega_m = uniform(rng, 0.8, 1.2);
      p.g = uniform(rng, 0.001, 0.05);
    }
    QuantumGraph q(3);
    q.connect(0, 1, uniform(rng, 0.0, 0.1));
    q.connect(1, 2, uniform(rng, 0.0, 0.1));
    for (std::size_t j = 0; j < 3; ++j) q.set_shift(j, uniform(rng, -0.1, 0.1));
    MeanField m{Eigen::VectorXcd(3), Eigen::VectorXcd(3)};
    Eigen::VectorXd cc(3);
    for (Eigen::Index j = 0; j < 3; ++j) {
      m.a(j) = Complex(uniform(rng, -5, 5), uniform(rng, -5, 5));
      m.b(j) = Complex(uniform(rng, -5, 5), uniform(rng, -5, 5));
      cc(j) = uniform(rng, -0.2, 0.2);
    }
    jacobian = std::max(jacobian, (build_drift_matrix(m, cc, nl, q) -
                                   oracle::mean_jacobian(m, cc, nl, q))
                                      .cwiseAbs()
                                      .maxCoeff());
  }
  const double elapsed = seconds_since(start);
  const bool pass = coherent < 1e-9 && squeezed < 1e-9 && lyapunov < 1e-6 && aux < 1e-14 &&
                    jacobian < 1e-6 && elapsed < 1.0;
  report.verdict(8, pass,
                 fmt::format("max errors: coherent F {:.1e} (< 1e-9); squeezed E_N {:.1e} (< 1e-9); "
                             "Lyapunov {:.1e} (< 1e-6); auxiliary {:.1e} (< 1e-14); drift Jacobian "
                             "{:.1e} (< 1e-6); {:.2f} s (< 1 s)",
                             coherent, squeezed, lyapunov, aux, jacobian, elapsed));
}

// ---------------------------------------------------------------------------
// Numerical hygiene

bool identical_runs(const ScenarioConfig& cfg) {
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto ra = csv_row(a, a.records[i]);
    const auto rb = csv_row(b, b.records[i]);
    if (ra.size() != rb.size() ||
        std::memcmp(ra.data(), rb.data(), ra.size() * sizeof(double)) != 0) {
      return false;
    }
  }
  return summary_json(cfg, a) == summary_json(cfg, b);
}

void criterion_hygiene() {
  const double e1 = oracle::linear_rk4_error(0.2);
  const double e2 = oracle::linear_rk4_error(0.1);
  const double e3 = oracle::linear_rk4_error(0.05);
  const double s1 = std::log2(e1 / e2);
  const double s2 = std::log2(e2 / e3);

  auto sf = scale_free_config();
  sf.t_end = 200.0;
  sf.scale_free.join_times = {100.0};
  auto sw = small_world_config();
  sw.t_end = 500.0;
  const bool same = identical_runs(point_to_point_config()) && identical_runs(sw) &&
                    identical_runs(sf);

  const bool slopes = std::abs(s1 - 4.0) <= 0.3 && std::abs(s2 - 4.0) <= 0.3;
  const bool physical = hygiene.failed.empty() && hygiene.nu_floor >= 0.5 - 1e-6;
  report.verdict(9, slopes && physical && same,
                 fmt::format("RK4 slopes {:.3f} {:.3f} (4 +- 0.3); lowest symplectic eigenvalue "
                             "over {} runs {:.9f} (>= 0.5 - 1e-6), {} incomplete; reruns "
                             "bit-identical: {}",
                             s1, s2, hygiene.runs, hygiene.nu_floor, hygiene.failed.size(),
                             same ? "yes" : "no"));
  if (!hygiene.nu_floor_run.empty()) {
    report.info("lowest symplectic eigenvalue from '{}' at t={}", hygiene.nu_floor_run,
                hygiene.nu_floor_t);
  }
  for (const auto& f : hygiene.failed) report.info("incomplete: {}", f);
}

}  // namespace

int main() {
  const auto start = Clock::now();
  try {
    criteria_point_to_point();
    criterion_trace_distance();
    criterion_small_world();
    criterion_scale_free();
    criterion_oracles();
    criterion_hygiene();
  } catch (const std::exception& e) {
    fmt::print("acceptance aborted: {}\n", e.what());
    return 2;
  }
  fmt::print("{} of 9 criteria failed ({:.0f} s)\n", report.failures(), seconds_since(start));
  return report.failures() == 0 ? 0 : 1;
}
