// Catalog of strongly convex functions with exact proximity mappings, plus a
// 1-D golden-section prox oracle used as independent ground truth in tests.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

namespace saddle {

// A proper, lower semicontinuous, strongly convex function together with its
// exact prox. value() is extended-real-valued: points outside the effective
// domain return +infinity. subgradient_distance(x, t) is the Euclidean
// distance from t to the subdifferential set at x (+infinity when x is
// outside the domain); it is what saddle-point certificates are built from.
class ProxFunction {
 public:
  virtual ~ProxFunction() = default;

  virtual Eigen::Index dimension() const = 0;
  virtual double modulus() const = 0;
  virtual std::string kind() const = 0;
  virtual double value(const Eigen::VectorXd& x) const = 0;
  // Unique minimizer of value(u) + (1/2*step)*||u - v||^2, step > 0.
  virtual Eigen::VectorXd prox(double step, const Eigen::VectorXd& v) const = 0;
  virtual double subgradient_distance(const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& t) const = 0;
};

// (1/2)<Ax,x> + <a,x> with A symmetric positive definite. The modulus is the
// smallest eigenvalue of A, computed at construction.
class QuadraticFunction final : public ProxFunction {
 public:
  QuadraticFunction(Eigen::MatrixXd A, Eigen::VectorXd a);

  Eigen::Index dimension() const override { return a_.size(); }
  double modulus() const override { return modulus_; }
  std::string kind() const override { return "quadratic"; }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd prox(double step, const Eigen::VectorXd& v) const override;
  double subgradient_distance(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& t) const override;

  const Eigen::MatrixXd& matrix() const { return A_; }
  const Eigen::VectorXd& linear() const { return a_; }

 private:
  Eigen::MatrixXd A_;
  Eigen::VectorXd a_;
  double modulus_;
};

// (weight/2)*||x - center||^2.
class ShiftedSquaredNorm final : public ProxFunction {
 public:
  ShiftedSquaredNorm(double weight, Eigen::VectorXd center);

  Eigen::Index dimension() const override { return center_.size(); }
  double modulus() const override { return weight_; }
  std::string kind() const override { return "shifted_sq"; }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd prox(double step, const Eigen::VectorXd& v) const override;
  double subgradient_distance(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& t) const override;

  double weight() const { return weight_; }
  const Eigen::VectorXd& center() const { return center_; }

 private:
  double weight_;
  Eigen::VectorXd center_;
};

// l1_weight*||x||_1 + (quad_weight/2)*||x||^2; nonsmooth but strongly convex
// with modulus quad_weight.
class ElasticNet final : public ProxFunction {
 public:
  ElasticNet(double l1_weight, double quad_weight, Eigen::Index dim);

  Eigen::Index dimension() const override { return dim_; }
  double modulus() const override { return quad_weight_; }
  std::string kind() const override { return "elastic_net"; }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd prox(double step, const Eigen::VectorXd& v) const override;
  double subgradient_distance(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& t) const override;

  double l1_weight() const { return l1_weight_; }
  double quad_weight() const { return quad_weight_; }

 private:
  double l1_weight_;
  double quad_weight_;
  Eigen::Index dim_;
};

// (quad_weight/2)*||x||^2 on the box [lower, upper], +infinity outside.
class BoxQuadratic final : public ProxFunction {
 public:
  BoxQuadratic(double quad_weight, Eigen::VectorXd lower, Eigen::VectorXd upper);

  Eigen::Index dimension() const override { return lower_.size(); }
  double modulus() const override { return quad_weight_; }
  std::string kind() const override { return "box_quadratic"; }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd prox(double step, const Eigen::VectorXd& v) const override;
  double subgradient_distance(const Eigen::VectorXd& x,
                              const Eigen::VectorXd& t) const override;

  double quad_weight() const { return quad_weight_; }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

 private:
  double quad_weight_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

// Closed-form prox maps, usable standalone. The class prox() methods above
// delegate to these.
Eigen::VectorXd prox_shifted_sq(double mu, const Eigen::VectorXd& c, double tau,
                                const Eigen::VectorXd& v);
Eigen::VectorXd prox_quadratic(const Eigen::MatrixXd& A, const Eigen::VectorXd& a,
                               double tau, const Eigen::VectorXd& v);
Eigen::VectorXd prox_elastic_net(double l1, double mu, double tau,
                                 const Eigen::VectorXd& v);
Eigen::VectorXd prox_box_quadratic(double mu, double tau, const Eigen::VectorXd& l,
                                   const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct Bracket {
  double lo;
  double hi;
};

// Golden-section minimizer of fun(u) + (1/2*tau)*(u - v)^2 to an interval
// width of 1e-10. When no bracket is given, one is derived from one-sided
// difference quotients of fun at v, falling back to [-1e3, 1e3] if those are
// not finite. Throws std::domain_error when the boundary slope signs show the
// minimizer lies outside the bracket.
double prox_bruteforce_1d(const std::function<double(double)>& fun, double tau,
                          double v, std::optional<Bracket> bracket = std::nullopt);

}  // namespace saddle
