// Independent ground truth: closed-form saddle points for quadratic
// instances via the dense KKT system, subgradient-based certificates for
// nonsmooth instances, and a deterministic instance generator.
#pragma once

#include <Eigen/Dense>

#include <cstdint>

#include "saddle/problem.hpp"

namespace saddle {

// g(x) = (1/2)<Ax,x> + <a,x>, h(y) = (1/2)<By,y> + <b,y>, coupling K.
struct QuadraticSaddleInstance {
  Eigen::MatrixXd A;
  Eigen::VectorXd a;
  Eigen::MatrixXd B;
  Eigen::VectorXd b;
  Eigen::MatrixXd K;

  // Builds the SaddleProblem with quadratic g/h and an estimated coupling
  // norm bound.
  SaddleProblem to_problem() const;
};

struct GeneratorSpec {
  Eigen::Index n = 0;
  Eigen::Index m = 0;
  double mu = 1.0;      // target modulus of g; measured modulus is >= this
  double nu = 1.0;      // target modulus of h
  double norm_k = 1.0;  // target ||K||; measured norm within 1e-6 relative
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  QuadraticSaddleInstance quadratic;
  SaddleProblem problem;
};

// Solves the stationarity system [[A, K^T], [-K, B]] [x; y] = [-a; -b] by
// dense LU with partial pivoting (instances are desk-scale, so a direct
// solve is the right tool). The certificate's residual is the max norm of
// the two stationarity equations; its tolerance field is 1e-10.
SaddlePointCertificate solve_quadratic_saddle(const QuadraticSaddleInstance& inst);

// Checks the subgradient inclusions -K*y* in dg(x*) and Kx* in dh(y*) using
// the catalog functions' explicit subdifferentials. The certificate passes
// iff both distances are <= tol. This is the ground truth for nonsmooth
// instances, where no closed-form saddle point exists.
SaddlePointCertificate certify_saddle(const SaddleProblem& p, const PrimalVector& x,
                                      const DualVector& y, double tol);

// Deterministic from the seed: A = mu*I + R^T R with R entries N(0,1)/sqrt(n)
// (so the measured modulus is >= mu), similarly B; a, b standard normal; K
// dense standard normal rescaled to the target norm (zero matrix when the
// target is 0). All draws come from one seeded generator with a pinned
// draw order, so equal specs produce bit-identical instances.
GeneratedInstance generate_instance(const GeneratorSpec& spec);

}  // namespace saddle
