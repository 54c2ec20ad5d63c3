#include "saddle/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "saddle/prox.hpp"

namespace saddle {

namespace {

// Deterministic normal sampler: uniforms from the top 53 bits of mt19937_64,
// Box-Muller on top. Self-contained so generated instances are bit-for-bit
// reproducible regardless of standard-library distribution internals.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    constexpr double kTwoPi = 6.283185307179586;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = kTwoPi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {      // row-major fill order is
      for (Eigen::Index j = 0; j < cols; ++j) {    // part of the format
        out(i, j) = normal();
      }
    }
    return out;
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) out[i] = normal();
    return out;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

SaddleProblem QuadraticSaddleInstance::to_problem() const {
  return SaddleProblem(LinearCoupling(K),
                       std::make_shared<QuadraticFunction>(A, a),
                       std::make_shared<QuadraticFunction>(B, b));
}

SaddlePointCertificate solve_quadratic_saddle(const QuadraticSaddleInstance& inst) {
  const Eigen::Index n = inst.a.size();
  const Eigen::Index m = inst.b.size();
  if (inst.A.rows() != n || inst.A.cols() != n || inst.B.rows() != m ||
      inst.B.cols() != m || inst.K.rows() != m || inst.K.cols() != n) {
    throw std::invalid_argument("solve_quadratic_saddle: inconsistent dimensions");
  }

  Eigen::MatrixXd M(n + m, n + m);
  M.topLeftCorner(n, n) = inst.A;
  M.topRightCorner(n, m) = inst.K.transpose();
  M.bottomLeftCorner(m, n) = -inst.K;
  M.bottomRightCorner(m, m) = inst.B;
  Eigen::VectorXd rhs(n + m);
  rhs.head(n) = -inst.a;
  rhs.tail(m) = -inst.b;

  const Eigen::VectorXd sol = Eigen::PartialPivLU<Eigen::MatrixXd>(M).solve(rhs);
  if (!sol.allFinite()) {
    throw std::runtime_error("solve_quadratic_saddle: factorization failed numerically");
  }

  SaddlePointCertificate cert;
  cert.x_star = sol.head(n);
  cert.y_star = sol.tail(m);
  const double r1 = (inst.A * cert.x_star + inst.a + inst.K.transpose() * cert.y_star).norm();
  const double r2 = (inst.B * cert.y_star + inst.b - inst.K * cert.x_star).norm();
  cert.subgradient_residual = std::max(r1, r2);
  cert.tolerance = 1e-10;
  cert.f_star = cert.y_star.dot(inst.K * cert.x_star) +
                0.5 * cert.x_star.dot(inst.A * cert.x_star) + inst.a.dot(cert.x_star) -
                (0.5 * cert.y_star.dot(inst.B * cert.y_star) + inst.b.dot(cert.y_star));
  return cert;
}

SaddlePointCertificate certify_saddle(const SaddleProblem& p, const PrimalVector& x,
                                      const DualVector& y, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("certify_saddle: tol must be positive");
  if (!std::isfinite(p.g().value(x)) || !std::isfinite(p.h().value(y))) {
    throw std::invalid_argument("certify_saddle: candidate outside effective domain");
  }
  const double dg = p.g().subgradient_distance(x, -p.coupling().adjoint_apply(y));
  const double dh = p.h().subgradient_distance(y, p.coupling().apply(x));

  SaddlePointCertificate cert;
  cert.x_star = x;
  cert.y_star = y;
  cert.f_star = evaluate_f(p, x, y);
  cert.subgradient_residual = std::max(dg, dh);
  cert.tolerance = tol;
  return cert;
}

GeneratedInstance generate_instance(const GeneratorSpec& spec) {
  if (spec.n < 1 || spec.m < 1) {
    throw std::invalid_argument("generate_instance: dimensions must be at least 1");
  }
  if (!(spec.mu > 0.0) || !(spec.nu > 0.0) || spec.norm_k < 0.0) {
    throw std::invalid_argument("generate_instance: need positive moduli and norm_k >= 0");
  }

  NormalSampler rng(spec.seed);
  // Draw order (R1, R2, a, b, K) is pinned; changing it changes every
  // serialized instance.
  const Eigen::MatrixXd R1 =
      rng.normal_matrix(spec.n, spec.n) / std::sqrt(static_cast<double>(spec.n));
  const Eigen::MatrixXd R2 =
      rng.normal_matrix(spec.m, spec.m) / std::sqrt(static_cast<double>(spec.m));

  QuadraticSaddleInstance inst;
  inst.A = spec.mu * Eigen::MatrixXd::Identity(spec.n, spec.n) + R1.transpose() * R1;
  inst.B = spec.nu * Eigen::MatrixXd::Identity(spec.m, spec.m) + R2.transpose() * R2;
  inst.a = rng.normal_vector(spec.n);
  inst.b = rng.normal_vector(spec.m);

  if (spec.norm_k > 0.0) {
    inst.K = rng.normal_matrix(spec.m, spec.n);
    // Rescale by the exact largest singular value (SVD, not the inflated
    // power-iteration estimate) so the measured norm hits the target to
    // machine precision; the emitted problem's norm_bound still comes from
    // estimate_operator_norm when the coupling is constructed.
    const double smax =
        Eigen::JacobiSVD<Eigen::MatrixXd>(inst.K).singularValues()(0);
    inst.K *= spec.norm_k / smax;
  } else {
    inst.K = Eigen::MatrixXd::Zero(spec.m, spec.n);
  }

  return GeneratedInstance{inst, inst.to_problem()};
}

}  // namespace saddle
