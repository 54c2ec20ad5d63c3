// Saddle-point problem model: f(x,y) = <Kx,y> + g(x) - h(y) with g, h
// strongly convex, together with operator-norm estimation and gap evaluation.
#pragma once

#include <Eigen/Dense>

#include <memory>

#include "saddle/prox.hpp"

namespace saddle {

using PrimalVector = Eigen::VectorXd;
using DualVector = Eigen::VectorXd;

struct OperatorNormEstimate {
  double value = 0.0;    // certified upper bound on ||K|| (inflated, see below)
  bool converged = true; // false: max_iter hit, value is the best estimate
  int iterations = 0;
};

// Dense linear coupling K with a certified upper bound on its operator norm.
class LinearCoupling {
 public:
  LinearCoupling() = default;
  // Estimates the norm bound via power iteration (tol 1e-10, inflation 1+1e-6).
  explicit LinearCoupling(Eigen::MatrixXd K);
  LinearCoupling(Eigen::MatrixXd K, double norm_bound);

  DualVector apply(const PrimalVector& x) const;
  PrimalVector adjoint_apply(const DualVector& y) const;

  Eigen::Index primal_dim() const { return K_.cols(); }
  Eigen::Index dual_dim() const { return K_.rows(); }
  const Eigen::MatrixXd& matrix() const { return K_; }
  double norm_bound() const { return norm_bound_; }

 private:
  Eigen::MatrixXd K_;
  double norm_bound_ = 0.0;
};

// Power iteration on K*K with a fixed internal start seed (the signature has
// no seed parameter but the result must be deterministic). The returned value
// is inflated by (1 + 1e-6) so that it is an upper bound on ||K|| for all
// practical purposes: every planner inequality needs ||K||^2 strictly below a
// threshold, so overestimating is the safe direction.
OperatorNormEstimate estimate_operator_norm(const LinearCoupling& coupling,
                                            double tol = 1e-10,
                                            int max_iter = 10000);

struct SaddlePointCertificate {
  PrimalVector x_star;
  DualVector y_star;
  double f_star = 0.0;
  // max of dist(-K*y*, dg(x*)) and dist(Kx*, dh(y*)).
  double subgradient_residual = 0.0;
  double tolerance = 0.0;  // the tolerance this certificate was issued against

  bool passes() const { return subgradient_residual <= tolerance; }
};

// Immutable after construction; safe to share across threads. Evaluation
// operations are pure.
class SaddleProblem {
 public:
  SaddleProblem(LinearCoupling coupling, std::shared_ptr<const ProxFunction> g,
                std::shared_ptr<const ProxFunction> h);

  const LinearCoupling& coupling() const { return coupling_; }
  const ProxFunction& g() const { return *g_; }
  const ProxFunction& h() const { return *h_; }
  std::shared_ptr<const ProxFunction> g_ptr() const { return g_; }
  std::shared_ptr<const ProxFunction> h_ptr() const { return h_; }

  double mu() const { return g_->modulus(); }
  double nu() const { return h_->modulus(); }
  Eigen::Index primal_dim() const { return coupling_.primal_dim(); }
  Eigen::Index dual_dim() const { return coupling_.dual_dim(); }

 private:
  LinearCoupling coupling_;
  std::shared_ptr<const ProxFunction> g_;
  std::shared_ptr<const ProxFunction> h_;
};

// <Kx,y> + g(x) - h(y). Extended values are reported by the sign convention
// of f: x outside dom g returns +infinity, y outside dom h returns -infinity
// (checked in that order, so the result is never NaN from domain handling;
// a NaN therefore always signals a numerical failure, not a domain issue).
double evaluate_f(const SaddleProblem& p, const PrimalVector& x, const DualVector& y);

// f(x, y*) - f(x*, y); nonnegative for any x, y when (x*, y*) is a saddle
// point, and bounded below by (mu/2)||x-x*||^2 + (nu/2)||y-y*||^2.
double saddle_gap(const SaddleProblem& p, const SaddlePointCertificate& cert,
                  const PrimalVector& x, const DualVector& y);

}  // namespace saddle
