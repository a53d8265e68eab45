#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qsync/types.hpp"

namespace qsync {

/// Quadrature covariance of an n-mode Gaussian state, vacuum variance 1/2.
///
/// Modes are stored as consecutive (position, momentum) pairs. For a network
/// of N nodes the first N modes are the optical fields (node order) and the
/// last N are the mechanical oscillators (node order), so for N = 2 the
/// quadrature vector is (x1, y1, x2, y2, q1, p1, q2, p2).
///
/// The stored matrix is symmetric bit-for-bit: every constructor and
/// assignment goes through symmetrize().
class CovarianceMatrix {
 public:
  CovarianceMatrix() = default;
  explicit CovarianceMatrix(const Eigen::MatrixXd& m);

  static CovarianceMatrix vacuum(std::size_t modes);

  std::size_t modes() const { return static_cast<std::size_t>(m_.rows() / 2); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(Eigen::Index r, Eigen::Index c) const { return m_(r, c); }

  /// 2x2 block of a single mode.
  Eigen::Matrix2d mode_block(std::size_t mode) const;
  /// 4x4 covariance of the two selected modes, first mode first.
  Eigen::Matrix4d pair_block(std::size_t first, std::size_t second) const;

  /// Returns a copy grown by `extra` vacuum modes inserted at the given
  /// positions (each position in terms of the resulting mode index).
  CovarianceMatrix with_inserted_vacuum(const std::vector<std::size_t>& positions) const;

 private:
  Eigen::MatrixXd m_;
};

/// (V + V^T) / 2, which is exactly symmetric in floating point.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);

/// Standard symplectic form for `modes` consecutive (q, p) pairs.
Eigen::MatrixXd symplectic_form(std::size_t modes);

/// Two mode indices of a CovarianceMatrix.
struct ModePair {
  std::size_t first = 0;
  std::size_t second = 0;
};

/// Mode index of node `node`'s optical / mechanical mode in an N-node network.
inline std::size_t optical_mode(std::size_t node, std::size_t /*nodes*/) { return node; }
inline std::size_t mechanical_mode(std::size_t node, std::size_t nodes) { return nodes + node; }

void validate_pair(const CovarianceMatrix& v, ModePair pair);

/// (Re B1 - Re B2, Im B1 - Im B2).
std::pair<double, double> first_order_error(Complex b1, Complex b2);

/// Inverse of the fluctuation error variance <dq_-^2 + dp_-^2> between two
/// mechanical modes. Throws NonPhysicalError if the variance is not positive.
double second_order_sync(const CovarianceMatrix& v, ModePair pair);

/// Fidelity of two single-mode Gaussian states.
///
/// `v1`, `v2` are 2x2 covariance blocks in vacuum-variance-1/2 units and
/// `amp1`, `amp2` hold (Re A, Im A) of the field amplitudes. Internally the
/// covariances are rescaled to the det = 1 vacuum convention (sigma = 2V) and
/// the displacement is beta = sqrt(2) (A1 - A2).
double gaussian_fidelity(const Eigen::Matrix2d& v1, const Eigen::Vector2d& amp1,
                         const Eigen::Matrix2d& v2, const Eigen::Vector2d& amp2);

/// Symplectic spectrum in ascending order, from the moduli of the (purely
/// imaginary) eigenvalues of Omega V.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& v);

/// Same spectrum from sqrt(eig(-(Omega V)^2)); kept as an independent route.
std::vector<double> symplectic_eigenvalues_squared(const Eigen::MatrixXd& v);

/// Smallest eigenvalue of the Hermitian matrix V + (i/2) Omega. A physical
/// state has this >= 0.
double uncertainty_margin(const Eigen::MatrixXd& v);

bool is_physical(const Eigen::MatrixXd& v, double tol = 1e-9);

/// Flips the sign of the momentum row and column of mode `which` (0 or 1).
Eigen::Matrix4d partial_transpose(const Eigen::Matrix4d& v, int which = 1);

/// max(0, -ln(2 zeta)) with zeta the smallest symplectic eigenvalue of the
/// partially transposed two-mode block.
double log_negativity(const Eigen::Matrix4d& two_mode);
double log_negativity(const CovarianceMatrix& v, ModePair pair);

}  // namespace qsync
