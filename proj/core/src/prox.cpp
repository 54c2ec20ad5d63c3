#include "saddle/prox.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace saddle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_dim(const Eigen::VectorXd& v, Eigen::Index dim, const char* what) {
  if (v.size() != dim) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be positive");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// QuadraticFunction

QuadraticFunction::QuadraticFunction(Eigen::MatrixXd A, Eigen::VectorXd a)
    : A_(std::move(A)), a_(std::move(a)) {
  if (A_.rows() != A_.cols() || A_.rows() != a_.size()) {
    throw std::invalid_argument("quadratic: A must be square and match a");
  }
  const double scale = std::max(1.0, A_.cwiseAbs().maxCoeff());
  if ((A_ - A_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("quadratic: A must be symmetric to 1e-12");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A_, Eigen::EigenvaluesOnly);
  modulus_ = es.eigenvalues().minCoeff();
  if (!(modulus_ > 0.0)) {
    throw std::invalid_argument("quadratic: A must be positive definite");
  }
}

double QuadraticFunction::value(const Eigen::VectorXd& x) const {
  require_dim(x, dimension(), "quadratic value");
  return 0.5 * x.dot(A_ * x) + a_.dot(x);
}

Eigen::VectorXd QuadraticFunction::prox(double step, const Eigen::VectorXd& v) const {
  require_dim(v, dimension(), "quadratic prox");
  return prox_quadratic(A_, a_, step, v);
}

double QuadraticFunction::subgradient_distance(const Eigen::VectorXd& x,
                                               const Eigen::VectorXd& t) const {
  require_dim(x, dimension(), "quadratic subgradient");
  require_dim(t, dimension(), "quadratic subgradient");
  return (t - (A_ * x + a_)).norm();
}

// ---------------------------------------------------------------------------
// ShiftedSquaredNorm

ShiftedSquaredNorm::ShiftedSquaredNorm(double weight, Eigen::VectorXd center)
    : weight_(weight), center_(std::move(center)) {
  require_positive(weight_, "shifted_sq weight");
}

double ShiftedSquaredNorm::value(const Eigen::VectorXd& x) const {
  require_dim(x, dimension(), "shifted_sq value");
  return 0.5 * weight_ * (x - center_).squaredNorm();
}

Eigen::VectorXd ShiftedSquaredNorm::prox(double step, const Eigen::VectorXd& v) const {
  require_dim(v, dimension(), "shifted_sq prox");
  return prox_shifted_sq(weight_, center_, step, v);
}

double ShiftedSquaredNorm::subgradient_distance(const Eigen::VectorXd& x,
                                                const Eigen::VectorXd& t) const {
  require_dim(x, dimension(), "shifted_sq subgradient");
  require_dim(t, dimension(), "shifted_sq subgradient");
  return (t - weight_ * (x - center_)).norm();
}

// ---------------------------------------------------------------------------
// ElasticNet

ElasticNet::ElasticNet(double l1_weight, double quad_weight, Eigen::Index dim)
    : l1_weight_(l1_weight), quad_weight_(quad_weight), dim_(dim) {
  if (l1_weight_ < 0.0) {
    throw std::invalid_argument("elastic_net l1 weight must be nonnegative");
  }
  require_positive(quad_weight_, "elastic_net quad weight");
  if (dim_ < 1) {
    throw std::invalid_argument("elastic_net dimension must be at least 1");
  }
}

double ElasticNet::value(const Eigen::VectorXd& x) const {
  require_dim(x, dim_, "elastic_net value");
  return l1_weight_ * x.lpNorm<1>() + 0.5 * quad_weight_ * x.squaredNorm();
}

Eigen::VectorXd ElasticNet::prox(double step, const Eigen::VectorXd& v) const {
  require_dim(v, dim_, "elastic_net prox");
  return prox_elastic_net(l1_weight_, quad_weight_, step, v);
}

double ElasticNet::subgradient_distance(const Eigen::VectorXd& x,
                                        const Eigen::VectorXd& t) const {
  require_dim(x, dim_, "elastic_net subgradient");
  require_dim(t, dim_, "elastic_net subgradient");
  // The subdifferential is separable: at x_i != 0 the singleton
  // l1*sign(x_i) + quad*x_i, at x_i = 0 the interval [-l1, l1].
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    double di;
    if (x[i] != 0.0) {
      const double s = x[i] > 0.0 ? 1.0 : -1.0;
      di = std::abs(t[i] - (l1_weight_ * s + quad_weight_ * x[i]));
    } else {
      di = std::max(std::abs(t[i]) - l1_weight_, 0.0);
    }
    d2 += di * di;
  }
  return std::sqrt(d2);
}

// ---------------------------------------------------------------------------
// BoxQuadratic

BoxQuadratic::BoxQuadratic(double quad_weight, Eigen::VectorXd lower,
                           Eigen::VectorXd upper)
    : quad_weight_(quad_weight), lower_(std::move(lower)), upper_(std::move(upper)) {
  require_positive(quad_weight_, "box_quadratic quad weight");
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("box_quadratic: bound dimensions differ");
  }
  if ((lower_.array() > upper_.array()).any()) {
    throw std::invalid_argument("box_quadratic: lower bound exceeds upper bound");
  }
}

double BoxQuadratic::value(const Eigen::VectorXd& x) const {
  require_dim(x, dimension(), "box_quadratic value");
  if ((x.array() < lower_.array()).any() || (x.array() > upper_.array()).any()) {
    return kInf;
  }
  return 0.5 * quad_weight_ * x.squaredNorm();
}

Eigen::VectorXd BoxQuadratic::prox(double step, const Eigen::VectorXd& v) const {
  require_dim(v, dimension(), "box_quadratic prox");
  return prox_box_quadratic(quad_weight_, step, lower_, upper_, v);
}

double BoxQuadratic::subgradient_distance(const Eigen::VectorXd& x,
                                          const Eigen::VectorXd& t) const {
  require_dim(x, dimension(), "box_quadratic subgradient");
  require_dim(t, dimension(), "box_quadratic subgradient");
  if ((x.array() < lower_.array()).any() || (x.array() > upper_.array()).any()) {
    return kInf;
  }
  // Subdifferential per coordinate: quad*x_i plus the normal cone of the box,
  // i.e. (-inf, quad*l_i] at an active lower bound, [quad*u_i, inf) at an
  // active upper bound, the whole line when l_i = u_i.
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < dimension(); ++i) {
    const bool at_lower = x[i] == lower_[i];
    const bool at_upper = x[i] == upper_[i];
    double di = 0.0;
    if (at_lower && at_upper) {
      di = 0.0;
    } else if (at_lower) {
      di = std::max(t[i] - quad_weight_ * x[i], 0.0);
    } else if (at_upper) {
      di = std::max(quad_weight_ * x[i] - t[i], 0.0);
    } else {
      di = std::abs(t[i] - quad_weight_ * x[i]);
    }
    d2 += di * di;
  }
  return std::sqrt(d2);
}

// ---------------------------------------------------------------------------
// Free prox maps

Eigen::VectorXd prox_shifted_sq(double mu, const Eigen::VectorXd& c, double tau,
                                const Eigen::VectorXd& v) {
  require_positive(mu, "mu");
  require_positive(tau, "tau");
  require_dim(v, c.size(), "prox_shifted_sq");
  return (v + tau * mu * c) / (1.0 + tau * mu);
}

Eigen::VectorXd prox_quadratic(const Eigen::MatrixXd& A, const Eigen::VectorXd& a,
                               double tau, const Eigen::VectorXd& v) {
  require_positive(tau, "tau");
  require_dim(v, a.size(), "prox_quadratic");
  Eigen::MatrixXd M = tau * A;
  M.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("prox_quadratic: factorization failed, A not positive definite");
  }
  return llt.solve(v - tau * a);
}

Eigen::VectorXd prox_elastic_net(double l1, double mu, double tau,
                                 const Eigen::VectorXd& v) {
  if (l1 < 0.0) throw std::invalid_argument("l1 must be nonnegative");
  require_positive(mu, "mu");
  require_positive(tau, "tau");
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double soft = std::max(std::abs(v[i]) - tau * l1, 0.0);
    out[i] = (v[i] > 0.0 ? soft : -soft) / (1.0 + tau * mu);
  }
  return out;
}

Eigen::VectorXd prox_box_quadratic(double mu, double tau, const Eigen::VectorXd& l,
                                   const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  require_positive(mu, "mu");
  require_positive(tau, "tau");
  if (l.size() != u.size() || (l.array() > u.array()).any()) {
    throw std::invalid_argument("prox_box_quadratic: invalid bounds");
  }
  require_dim(v, l.size(), "prox_box_quadratic");
  return (v / (1.0 + tau * mu)).cwiseMax(l).cwiseMin(u);
}

double prox_bruteforce_1d(const std::function<double(double)>& fun, double tau,
                          double v, std::optional<Bracket> bracket) {
  require_positive(tau, "tau");
  const auto phi = [&](double u) { return fun(u) + (u - v) * (u - v) / (2.0 * tau); };

  double lo, hi;
  if (bracket) {
    lo = bracket->lo;
    hi = bracket->hi;
  } else {
    // One-sided difference quotients of fun at v size the bracket; a flat or
    // ill-behaved oracle falls back to a fixed wide bracket.
    const double h = 1e-6 * std::max(1.0, std::abs(v));
    const double fv = fun(v);
    const double gplus = (fun(v + h) - fv) / h;
    const double gminus = (fv - fun(v - h)) / h;
    if (std::isfinite(gplus) && std::isfinite(gminus)) {
      lo = v - 10.0 * tau * (std::abs(gplus) + 1.0);
      hi = v + 10.0 * tau * (std::abs(gminus) + 1.0);
    } else {
      lo = -1e3;
      hi = 1e3;
    }
  }
  if (!(lo < hi)) throw std::invalid_argument("prox_bruteforce_1d: empty bracket");

  // Containment test via boundary slope signs: for a unimodal objective with
  // an interior minimizer, phi decreases leaving lo and increases entering hi.
  const double probe = std::max(1e-7 * (hi - lo), 1e-12);
  if (phi(lo + probe) > phi(lo) && phi(lo) < phi(hi)) {
    throw std::domain_error("prox_bruteforce_1d: minimizer left of bracket");
  }
  if (phi(hi - probe) > phi(hi) && phi(hi) < phi(lo)) {
    throw std::domain_error("prox_bruteforce_1d: minimizer right of bracket");
  }

  constexpr double kGolden = 0.6180339887498949;  // (sqrt(5)-1)/2
  double x1 = hi - kGolden * (hi - lo);
  double x2 = lo + kGolden * (hi - lo);
  double f1 = phi(x1);
  double f2 = phi(x2);
  while (hi - lo > 1e-10) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGolden * (hi - lo);
      f1 = phi(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGolden * (hi - lo);
      f2 = phi(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace saddle
