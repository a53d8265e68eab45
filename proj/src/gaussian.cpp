#include "qsync/gaussian.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "qsync/errors.hpp"

namespace qsync {

namespace {

constexpr double kPhysicalTol = 1e-6;

}  // namespace

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = c; r < m.rows(); ++r) {
      const double v = 0.5 * (m(r, c) + m(c, r));
      out(r, c) = v;
      out(c, r) = v;
    }
  }
  return out;
}

CovarianceMatrix::CovarianceMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() % 2 != 0) {
    throw ConfigError(fmt::format("covariance must be square of even order, got {}x{}",
                                  m.rows(), m.cols()));
  }
  m_ = symmetrize(m);
}

CovarianceMatrix CovarianceMatrix::vacuum(std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(2 * modes);
  return CovarianceMatrix(0.5 * Eigen::MatrixXd::Identity(n, n));
}

Eigen::Matrix2d CovarianceMatrix::mode_block(std::size_t mode) const {
  const auto i = static_cast<Eigen::Index>(2 * mode);
  return m_.block<2, 2>(i, i);
}

Eigen::Matrix4d CovarianceMatrix::pair_block(std::size_t first, std::size_t second) const {
  const Eigen::Index idx[4] = {static_cast<Eigen::Index>(2 * first),
                               static_cast<Eigen::Index>(2 * first + 1),
                               static_cast<Eigen::Index>(2 * second),
                               static_cast<Eigen::Index>(2 * second + 1)};
  Eigen::Matrix4d out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = m_(idx[r], idx[c]);
  }
  return out;
}

CovarianceMatrix CovarianceMatrix::with_inserted_vacuum(
    const std::vector<std::size_t>& positions) const {
  const std::size_t total = modes() + positions.size();
  std::vector<bool> fresh(total, false);
  for (auto p : positions) {
    if (p >= total || fresh[p]) {
      throw ConfigError(fmt::format("invalid vacuum insertion position {}", p));
    }
    fresh[p] = true;
  }
  std::vector<Eigen::Index> target;  // old mode -> new mode
  target.reserve(modes());
  for (std::size_t k = 0; k < total; ++k) {
    if (!fresh[k]) target.push_back(static_cast<Eigen::Index>(k));
  }
  const auto n = static_cast<Eigen::Index>(2 * total);
  Eigen::MatrixXd out = 0.5 * Eigen::MatrixXd::Identity(n, n);
  for (std::size_t a = 0; a < target.size(); ++a) {
    for (std::size_t b = 0; b < target.size(); ++b) {
      out.block<2, 2>(2 * target[a], 2 * target[b]) =
          m_.block<2, 2>(static_cast<Eigen::Index>(2 * a), static_cast<Eigen::Index>(2 * b));
    }
  }
  return CovarianceMatrix(out);
}

Eigen::MatrixXd symplectic_form(std::size_t modes) {
  const auto n = static_cast<Eigen::Index>(2 * modes);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

void validate_pair(const CovarianceMatrix& v, ModePair pair) {
  if (pair.first == pair.second) {
    throw ConfigError(fmt::format("mode pair must name two distinct modes, got ({}, {})",
                                  pair.first, pair.second));
  }
  if (pair.first >= v.modes() || pair.second >= v.modes()) {
    throw ConfigError(fmt::format("mode pair ({}, {}) out of range for {} modes", pair.first,
                                  pair.second, v.modes()));
  }
}

std::pair<double, double> first_order_error(Complex b1, Complex b2) {
  return {b1.real() - b2.real(), b1.imag() - b2.imag()};
}

double second_order_sync(const CovarianceMatrix& v, ModePair pair) {
  validate_pair(v, pair);
  const std::size_t half = v.modes() / 2;
  if (v.modes() % 2 != 0 || pair.first < half || pair.second < half) {
    throw ConfigError(fmt::format("second-order sync needs two mechanical modes, got ({}, {})",
                                  pair.first, pair.second));
  }
  const auto qi = static_cast<Eigen::Index>(2 * pair.first);
  const auto qj = static_cast<Eigen::Index>(2 * pair.second);
  const double dq = 0.5 * (v(qi, qi) + v(qj, qj) - 2.0 * v(qi, qj));
  const double dp = 0.5 * (v(qi + 1, qi + 1) + v(qj + 1, qj + 1) - 2.0 * v(qi + 1, qj + 1));
  const double denom = dq + dp;
  if (!(denom > 0.0)) {
    throw NonPhysicalError(
        fmt::format("nonphysical covariance: error variance {} is not positive", denom));
  }
  return 1.0 / denom;
}

double gaussian_fidelity(const Eigen::Matrix2d& v1, const Eigen::Vector2d& amp1,
                         const Eigen::Matrix2d& v2, const Eigen::Vector2d& amp2) {
  const Eigen::Matrix2d s1 = 2.0 * v1;
  const Eigen::Matrix2d s2 = 2.0 * v2;
  const Eigen::Matrix2d sum = s1 + s2;
  const double big = sum.determinant();
  // det s >= 1 for a physical mode; rounding in a large, nearly pure block can
  // push it a few ulps of |s|^2 below, which is clamped.
  auto excess = [](const Eigen::Matrix2d& s) {
    const double d = s.determinant() - 1.0;
    const double tol = 1e-9 * (1.0 + s.squaredNorm());
    return d < -tol ? d : std::max(d, 0.0);
  };
  const double e1 = excess(s1);
  const double e2 = excess(s2);
  if (!(big > 0.0) || e1 < 0.0 || e2 < 0.0) {
    throw NonPhysicalError(fmt::format(
        "nonphysical input to fidelity: det(s1+s2)={}, det s1={}, det s2={}", big,
        s1.determinant(), s2.determinant()));
  }
  const double small = e1 * e2;
  const Eigen::Vector2d beta = std::sqrt(2.0) * (amp1 - amp2);
  const double exponent = beta.dot(sum.inverse() * beta);
  // 2 / (sqrt(big + small) - sqrt(small)), rearranged to avoid cancellation.
  return 2.0 * std::exp(-exponent) * (std::sqrt(big + small) + std::sqrt(small)) / big;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& v) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0) {
    throw ConfigError("symplectic spectrum needs a square matrix of even order");
  }
  const auto modes = static_cast<std::size_t>(v.rows() / 2);
  const Eigen::MatrixXd ov = symplectic_form(modes) * v;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(ov, false);
  if (solver.info() != Eigen::Success) {
    throw NonPhysicalError("eigen decomposition of Omega V failed");
  }
  std::vector<double> moduli;
  moduli.reserve(static_cast<std::size_t>(v.rows()));
  double scale = 0.0;
  for (Eigen::Index k = 0; k < v.rows(); ++k) {
    scale = std::max(scale, std::abs(solver.eigenvalues()[k]));
  }
  for (Eigen::Index k = 0; k < v.rows(); ++k) {
    const Complex ev = solver.eigenvalues()[k];
    if (std::abs(ev.real()) > kPhysicalTol * std::max(1.0, scale)) {
      throw NonPhysicalError(
          fmt::format("Omega V has eigenvalue {}+{}i off the imaginary axis", ev.real(), ev.imag()));
    }
    moduli.push_back(std::abs(ev.imag()));
  }
  std::sort(moduli.begin(), moduli.end());
  std::vector<double> out;
  out.reserve(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    out.push_back(0.5 * (moduli[2 * k] + moduli[2 * k + 1]));
  }
  return out;
}

std::vector<double> symplectic_eigenvalues_squared(const Eigen::MatrixXd& v) {
  const auto modes = static_cast<std::size_t>(v.rows() / 2);
  const Eigen::MatrixXd ov = symplectic_form(modes) * v;
  const Eigen::MatrixXd sq = -(ov * ov);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(sq, false);
  std::vector<double> vals;
  for (Eigen::Index k = 0; k < sq.rows(); ++k) {
    const double re = solver.eigenvalues()[k].real();
    if (re < -kPhysicalTol) {
      throw NonPhysicalError(fmt::format("-(Omega V)^2 has negative eigenvalue {}", re));
    }
    vals.push_back(std::sqrt(std::max(re, 0.0)));
  }
  std::sort(vals.begin(), vals.end());
  std::vector<double> out;
  for (std::size_t k = 0; k < modes; ++k) out.push_back(0.5 * (vals[2 * k] + vals[2 * k + 1]));
  return out;
}

double uncertainty_margin(const Eigen::MatrixXd& v) {
  const auto modes = static_cast<std::size_t>(v.rows() / 2);
  Eigen::MatrixXcd h = v.cast<Complex>() + Complex(0.0, 0.5) * symplectic_form(modes).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_physical(const Eigen::MatrixXd& v, double tol) {
  if (!v.allFinite()) return false;
  for (Eigen::Index k = 0; k < v.rows(); ++k) {
    if (v(k, k) < 0.0) return false;
  }
  return uncertainty_margin(v) >= -tol;
}

Eigen::Matrix4d partial_transpose(const Eigen::Matrix4d& v, int which) {
  if (which != 0 && which != 1) throw ConfigError("partial transpose selects mode 0 or 1");
  const int p = 2 * which + 1;
  Eigen::Matrix4d out = v;
  for (int k = 0; k < 4; ++k) {
    if (k == p) continue;
    out(p, k) = -v(p, k);
    out(k, p) = -v(k, p);
  }
  return out;
}

double log_negativity(const Eigen::Matrix4d& two_mode) {
  const Eigen::Matrix4d pt = partial_transpose(two_mode, 1);
  const double zeta = symplectic_eigenvalues(pt).front();
  return std::max(0.0, -std::log(2.0 * zeta));
}

double log_negativity(const CovarianceMatrix& v, ModePair pair) {
  validate_pair(v, pair);
  return log_negativity(v.pair_block(pair.first, pair.second));
}

}  // namespace qsync
