#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "qsync/errors.hpp"
#include "qsync/gaussian.hpp"
#include "qsync/random.hpp"

#include "oracles.hpp"

using namespace qsync;

using oracle::random_physical;
using oracle::two_mode_squeezed;

TEST_CASE("first_order_error") {
  const auto same = first_order_error({0.3, 0.7}, {0.3, 0.7});
  CHECK(same.first == 0.0);
  CHECK(same.second == 0.0);
  const auto d = first_order_error({1.0, 0.0}, {0.0, 0.0});
  CHECK(d.first == 1.0);
  CHECK(d.second == 0.0);
}

TEST_CASE("covariance construction is exactly symmetric") {
  Rng rng(3);
  Eigen::MatrixXd m(6, 6);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng, -1, 1);
  const CovarianceMatrix v(m);
  CHECK((v.matrix() - v.matrix().transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(CovarianceMatrix(Eigen::MatrixXd::Identity(3, 3)), ConfigError);
}

TEST_CASE("vacuum insertion keeps existing blocks") {
  Rng rng(5);
  const CovarianceMatrix v(random_physical(3, rng, 0.2));
  const auto grown = v.with_inserted_vacuum({1, 4});
  REQUIRE(grown.modes() == 5);
  const std::size_t old_to_new[3] = {0, 2, 3};
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      const auto i = static_cast<Eigen::Index>(2 * a);
      const auto j = static_cast<Eigen::Index>(2 * b);
      const auto ni = static_cast<Eigen::Index>(2 * old_to_new[a]);
      const auto nj = static_cast<Eigen::Index>(2 * old_to_new[b]);
      CHECK(grown.matrix().block<2, 2>(ni, nj) == v.matrix().block<2, 2>(i, j));
    }
  }
  CHECK(grown.mode_block(1) == Eigen::Matrix2d::Identity() * 0.5);
  CHECK(grown.matrix().block(2, 0, 2, 2).isZero());
  CHECK_THROWS_AS(v.with_inserted_vacuum({7}), ConfigError);
}

TEST_CASE("second_order_sync") {
  const auto vac = CovarianceMatrix::vacuum(4);
  CHECK(second_order_sync(vac, {2, 3}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(second_order_sync(CovarianceMatrix(Eigen::MatrixXd::Zero(8, 8)), {2, 3}),
                  NonPhysicalError);

  // direct quadratic form u^T V u with u = (e_qi - e_qj)/sqrt2 and the p analogue
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const CovarianceMatrix v(random_physical(4, rng, uniform(rng, 0, 2)));
    const std::size_t i = 2;
    const std::size_t j = 3;
    Eigen::VectorXd uq = Eigen::VectorXd::Zero(8);
    Eigen::VectorXd up = Eigen::VectorXd::Zero(8);
    uq(2 * i) = M_SQRT1_2;
    uq(2 * j) = -M_SQRT1_2;
    up(2 * i + 1) = M_SQRT1_2;
    up(2 * j + 1) = -M_SQRT1_2;
    const double direct =
        1.0 / (uq.dot(v.matrix() * uq) + up.dot(v.matrix() * up));
    CHECK(std::abs(second_order_sync(v, {i, j}) - direct) < 1e-12 * std::max(1.0, direct));
  }
}

TEST_CASE("coherent-state fidelity matches the overlap") {
  const Eigen::Matrix2d vac = 0.5 * Eigen::Matrix2d::Identity();
  CHECK(gaussian_fidelity(vac, {1.0, 0.0}, vac, {1.0, 1.0}) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  Rng rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Vector2d a1(uniform(rng, -3, 3), uniform(rng, -3, 3));
    const Eigen::Vector2d a2(uniform(rng, -3, 3), uniform(rng, -3, 3));
    const double expected = std::exp(-(a1 - a2).squaredNorm());
    worst = std::max(worst, std::abs(gaussian_fidelity(vac, a1, vac, a2) - expected));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("fidelity bounds and identity") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Matrix2d v1 = random_physical(1, rng, uniform(rng, 0, 3));
    const Eigen::Matrix2d v2 = random_physical(1, rng, uniform(rng, 0, 3));
    const Eigen::Vector2d m1(uniform(rng, -2, 2), uniform(rng, -2, 2));
    const Eigen::Vector2d m2(uniform(rng, -2, 2), uniform(rng, -2, 2));
    const double f = gaussian_fidelity(v1, m1, v2, m2);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0 + 1e-9);
    CHECK(f == doctest::Approx(gaussian_fidelity(v2, m2, v1, m1)).epsilon(1e-12));
    CHECK(std::abs(gaussian_fidelity(v1, m1, v1, m1) - 1.0) < 1e-12);
  }
  // commuting thermal states: F = (sqrt((n1+1)(n2+1)) - sqrt(n1 n2))^-2
  const double n1 = 0.7;
  const double n2 = 2.1;
  const Eigen::Matrix2d t1 = (n1 + 0.5) * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d t2 = (n2 + 0.5) * Eigen::Matrix2d::Identity();
  const double expected = 1.0 / std::pow(std::sqrt((n1 + 1) * (n2 + 1)) - std::sqrt(n1 * n2), 2);
  CHECK(gaussian_fidelity(t1, {0, 0}, t2, {0, 0}) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(gaussian_fidelity(Eigen::Matrix2d::Zero(), {0, 0}, Eigen::Matrix2d::Zero(),
                                    {0, 0}),
                  NonPhysicalError);
}

TEST_CASE("symplectic eigenvalues") {
  auto close = [](const std::vector<double>& got, const std::vector<double>& want) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - want[i]) < 1e-12);
  };
  close(symplectic_eigenvalues(0.5 * Eigen::MatrixXd::Identity(4, 4)), {0.5, 0.5});
  close(symplectic_eigenvalues(2.75 * Eigen::MatrixXd::Identity(2, 2)), {2.75});
  close(symplectic_eigenvalues(two_mode_squeezed(0.5)), {0.5, 0.5});

  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto v = random_physical(4, rng, uniform(rng, 0, 1));
    const auto a = symplectic_eigenvalues(v);
    const auto b = symplectic_eigenvalues_squared(v);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
    CHECK(a.front() >= 0.5 - 1e-9);
    CHECK(is_physical(v));
  }
}

TEST_CASE("uncertainty margin separates physical from unphysical") {
  CHECK(std::abs(uncertainty_margin(0.5 * Eigen::MatrixXd::Identity(4, 4))) < 1e-12);
  CHECK(uncertainty_margin(0.1 * Eigen::MatrixXd::Identity(4, 4)) < -0.3);
  CHECK_FALSE(is_physical(0.1 * Eigen::MatrixXd::Identity(4, 4)));
}

TEST_CASE("partial transpose") {
  Rng rng(23);
  Eigen::Matrix4d v = random_physical(2, rng, 0.3);
  CHECK(partial_transpose(partial_transpose(v)) == v);
  CHECK(partial_transpose(partial_transpose(v, 0), 0) == v);
  const Eigen::Matrix4d d = Eigen::Vector4d(1, 2, 3, 4).asDiagonal();
  CHECK(partial_transpose(d) == d);
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c(0, 3) = 0.25;
  c(3, 0) = 0.25;
  const Eigen::Matrix4d flipped = partial_transpose(c);
  CHECK(flipped(0, 3) == -0.25);
  CHECK(flipped(3, 0) == -0.25);
}

TEST_CASE("log negativity") {
  CHECK(log_negativity(Eigen::Matrix4d(0.5 * Eigen::Matrix4d::Identity())) == 0.0);
  for (double r : {0.1, 0.5, 1.0}) {
    CHECK(std::abs(log_negativity(two_mode_squeezed(r)) - 2.0 * r) < 1e-9);
  }
  // product states are never entangled
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    v.block<2, 2>(0, 0) = random_physical(1, rng, uniform(rng, 0, 1));
    v.block<2, 2>(2, 2) = random_physical(1, rng, uniform(rng, 0, 1));
    CHECK(log_negativity(v) == 0.0);
  }
  // pair selection on a larger covariance
  Eigen::MatrixXd big = 0.5 * Eigen::MatrixXd::Identity(6, 6);
  const Eigen::Matrix4d t = two_mode_squeezed(0.5);
  const Eigen::Index idx[4] = {0, 1, 4, 5};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) big(idx[r], idx[c]) = t(r, c);
  }
  const CovarianceMatrix cv(big);
  CHECK(log_negativity(cv, {0, 2}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(log_negativity(cv, {0, 1}) == 0.0);
}
