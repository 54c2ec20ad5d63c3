#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "saddle/problem.hpp"

using namespace saddle;

namespace {

Eigen::VectorXd scalar(double v) {
  Eigen::VectorXd x(1);
  x[0] = v;
  return x;
}

SaddleProblem one_dim_problem() {
  LinearCoupling K(Eigen::MatrixXd::Constant(1, 1, 1.0), 1.0);
  auto g = std::make_shared<ShiftedSquaredNorm>(1.0, Eigen::VectorXd::Zero(1));
  auto h = std::make_shared<ShiftedSquaredNorm>(1.0, Eigen::VectorXd::Zero(1));
  return SaddleProblem(std::move(K), g, h);
}

// g(x) = x^2/2 - x, h(y) = y^2/2, K = 1. Stationarity (x - 1 + y = 0,
// x - y = 0) puts the saddle point at (1/2, 1/2) with value -1/4.
SaddleProblem tilted_problem() {
  LinearCoupling K(Eigen::MatrixXd::Constant(1, 1, 1.0), 1.0);
  auto g = std::make_shared<QuadraticFunction>(Eigen::MatrixXd::Identity(1, 1),
                                               scalar(-1.0));
  auto h = std::make_shared<ShiftedSquaredNorm>(1.0, Eigen::VectorXd::Zero(1));
  return SaddleProblem(std::move(K), g, h);
}

SaddlePointCertificate tilted_certificate() {
  SaddlePointCertificate cert;
  cert.x_star = scalar(0.5);
  cert.y_star = scalar(0.5);
  cert.f_star = -0.25;
  return cert;
}

// One-sided Jacobi: rotate column pairs of a working copy until all pairs are
// orthogonal; the largest column norm is then the largest singular value.
// Entirely independent of the power-iteration code under test.
double largest_singular_value_jacobi(Eigen::MatrixXd A) {
  const Eigen::Index n = A.cols();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = A.col(p).dot(A.col(q));
        const double app = A.col(p).squaredNorm();
        const double aqq = A.col(q).squaredNorm();
        off = std::max(off, std::abs(apq));
        if (std::abs(apq) < 1e-15 * std::sqrt(app * aqq)) continue;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Eigen::VectorXd colp = A.col(p);
        A.col(p) = c * colp - s * A.col(q);
        A.col(q) = s * colp + c * A.col(q);
      }
    }
    if (off < 1e-14) break;
  }
  double best = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) best = std::max(best, A.col(j).norm());
  return best;
}

}  // namespace

TEST_CASE("evaluate_f on hand-computed points") {
  const SaddleProblem p = one_dim_problem();
  CHECK(evaluate_f(p, scalar(1.0), scalar(1.0)) == doctest::Approx(1.0));
  CHECK(evaluate_f(p, scalar(0.0), scalar(0.0)) == doctest::Approx(0.0));
  const SaddleProblem t = tilted_problem();
  CHECK(evaluate_f(t, scalar(0.5), scalar(0.5)) == doctest::Approx(-0.25));
}

TEST_CASE("evaluate_f extended values follow the sign convention of f") {
  LinearCoupling K(Eigen::MatrixXd::Constant(1, 1, 1.0), 1.0);
  auto box = std::make_shared<BoxQuadratic>(1.0, scalar(-1.0), scalar(1.0));
  const SaddleProblem p(std::move(K), box, box);
  CHECK(std::isinf(evaluate_f(p, scalar(2.0), scalar(0.0))));
  CHECK(evaluate_f(p, scalar(2.0), scalar(0.0)) > 0.0);
  CHECK(std::isinf(evaluate_f(p, scalar(0.0), scalar(2.0))));
  CHECK(evaluate_f(p, scalar(0.0), scalar(2.0)) < 0.0);
  // x outside dom g wins over y outside dom h.
  CHECK(evaluate_f(p, scalar(2.0), scalar(2.0)) > 0.0);
}

TEST_CASE("operator norm estimate on matrices with known norms") {
  const double inflation = 1.0 + 1e-6;
  {
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
    D(0, 0) = 2.0;
    D(1, 1) = 1.0;
    const OperatorNormEstimate est =
        estimate_operator_norm(LinearCoupling(D, 0.0));
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(2.0 * inflation).epsilon(1e-7));
  }
  {
    // Nilpotent, so no eigenvalue route works; singular value is still 1.
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(2, 2);
    N(0, 1) = 1.0;
    const OperatorNormEstimate est =
        estimate_operator_norm(LinearCoupling(N, 0.0));
    CHECK(est.converged);
    CHECK(est.value == doctest::Approx(1.0 * inflation).epsilon(1e-7));
  }
  {
    const OperatorNormEstimate est =
        estimate_operator_norm(LinearCoupling(Eigen::MatrixXd::Zero(3, 2), 0.0));
    CHECK(est.value == 0.0);
    CHECK(est.converged);
    CHECK(est.iterations == 0);
  }
}

TEST_CASE("operator norm estimate matches a one-sided Jacobi oracle") {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::MatrixXd K(5, 3);
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) K(i, j) = unif(rng);
  }
  const double oracle = largest_singular_value_jacobi(K);
  const OperatorNormEstimate est = estimate_operator_norm(LinearCoupling(K, 0.0));
  CHECK(est.converged);
  CHECK(est.value / (1.0 + 1e-6) == doctest::Approx(oracle).epsilon(1e-6));
  // The inflated value must sit above the true norm.
  CHECK(est.value >= oracle);
}

TEST_CASE("auto-estimating coupling constructor stores the inflated bound") {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 2.0;
  D(1, 1) = 1.0;
  const LinearCoupling K(D);
  CHECK(K.norm_bound() == doctest::Approx(2.0 * (1.0 + 1e-6)).epsilon(1e-7));
}

TEST_CASE("adjoint identity and norm bound hold on random data") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  Eigen::MatrixXd M(4, 6);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 6; ++j) M(i, j) = unif(rng);
  }
  const LinearCoupling K(M);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd x(6), y(4);
    for (Eigen::Index i = 0; i < 6; ++i) x[i] = unif(rng);
    for (Eigen::Index i = 0; i < 4; ++i) y[i] = unif(rng);
    const double lhs = K.apply(x).dot(y);
    const double rhs = x.dot(K.adjoint_apply(y));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    CHECK(K.apply(x).norm() <= K.norm_bound() * x.norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("saddle gap at and around the saddle point") {
  const SaddleProblem t = tilted_problem();
  const SaddlePointCertificate cert = tilted_certificate();
  CHECK(saddle_gap(t, cert, cert.x_star, cert.y_star) == doctest::Approx(0.0));

  const SaddleProblem p = one_dim_problem();
  SaddlePointCertificate origin;
  origin.x_star = scalar(0.0);
  origin.y_star = scalar(0.0);
  origin.f_star = 0.0;
  // gap(1,1) = f(1,0) - f(0,1) = 1/2 - (-1/2) = 1, meeting the quadratic
  // lower bound (mu/2) + (nu/2) with equality.
  CHECK(saddle_gap(p, origin, scalar(1.0), scalar(1.0)) == doctest::Approx(1.0));

  std::mt19937 rng(123);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = scalar(unif(rng));
    const Eigen::VectorXd y = scalar(unif(rng));
    const double gap = saddle_gap(t, cert, x, y);
    const double lower = 0.5 * t.mu() * (x - cert.x_star).squaredNorm() +
                         0.5 * t.nu() * (y - cert.y_star).squaredNorm();
    CHECK(gap >= lower - 1e-9);
  }
}

TEST_CASE("saddle ordering around the known saddle point") {
  const SaddleProblem t = tilted_problem();
  const SaddlePointCertificate cert = tilted_certificate();
  std::mt19937 rng(321);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = scalar(unif(rng));
    const Eigen::VectorXd y = scalar(unif(rng));
    CHECK(evaluate_f(t, cert.x_star, y) <= cert.f_star + 1e-12);
    CHECK(evaluate_f(t, x, cert.y_star) >= cert.f_star - 1e-12);
  }
}

TEST_CASE("saddle problem construction validates its pieces") {
  LinearCoupling K(Eigen::MatrixXd::Identity(2, 2), 1.0);
  auto g1 = std::make_shared<ShiftedSquaredNorm>(1.0, Eigen::VectorXd::Zero(1));
  auto g2 = std::make_shared<ShiftedSquaredNorm>(1.0, Eigen::VectorXd::Zero(2));
  CHECK_THROWS_AS(SaddleProblem(K, g1, g2), std::invalid_argument);
  CHECK_THROWS_AS(SaddleProblem(K, g2, g1), std::invalid_argument);
  CHECK_THROWS_AS(SaddleProblem(K, nullptr, g2), std::invalid_argument);
  CHECK_NOTHROW(SaddleProblem(K, g2, g2));
}
