// Alternating proximal mapping iteration:
//   y^{k+1} = Prox_{sigma_k h}(sigma_k K xbar^k + y^k)
//   ybar^{k+1} = y^{k+1} + beta_k (y^{k+1} - y^k)
//   x^{k+1} = Prox_{tau_k g}(x^k - tau_k K* ybar^{k+1})
//   xbar^{k+1} = x^{k+1} + alpha_k (x^{k+1} - x^k)
// with xbar^0 = x^0, ybar^0 = y^0. The update order is load-bearing: the dual
// prox reads the previous extrapolated primal, the primal prox reads the
// freshly extrapolated dual.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "saddle/planner.hpp"
#include "saddle/problem.hpp"

namespace saddle {

struct IterateState {
  PrimalVector x, x_prev, x_bar;
  DualVector y, y_prev, y_bar;
  long k = 0;

  // k = 0 state with x_prev = x = xbar and y_prev = y = ybar.
  static IterateState start(PrimalVector x0, DualVector y0);
};

// Per-iteration parameter sequences. Only constant schedules are covered by
// planner certificates; general sequences are accepted by the solver.
class Schedule {
 public:
  using Fn = std::function<double(long)>;

  Schedule(Fn tau, Fn sigma, Fn alpha, Fn beta);
  static Schedule constant(double tau, double sigma, double alpha, double beta);
  static Schedule from_plan(const StepPlan& plan);

  double tau(long k) const { return tau_(k); }
  double sigma(long k) const { return sigma_(k); }
  double alpha(long k) const { return alpha_(k); }
  double beta(long k) const { return beta_(k); }
  bool is_constant() const { return constant_; }

 private:
  Schedule(Fn tau, Fn sigma, Fn alpha, Fn beta, bool constant);
  Fn tau_, sigma_, alpha_, beta_;
  bool constant_ = false;
};

// Geometrically weighted running average xhat_k of x^1..x^{k+1} with weights
// xi^{-i}. Direct summation overflows (xi^{-i} grows without bound), so the
// scaled recursion s' = xi*s + 1, xhat' = (1-1/s')*xhat + (1/s')*x_new is
// used; it is algebraically identical and s stays in [1, 1/(1-xi)).
class ErgodicAccumulator {
 public:
  // Anchored at ergodic index 0 with the first post-step iterate (x^1, y^1).
  ErgodicAccumulator(double xi, PrimalVector x1, DualVector y1);

  void update(const PrimalVector& x_new, const DualVector& y_new);

  double xi() const { return xi_; }
  double s() const { return s_; }
  const PrimalVector& x_hat() const { return x_hat_; }
  const DualVector& y_hat() const { return y_hat_; }

 private:
  double xi_;
  double s_;
  PrimalVector x_hat_;
  DualVector y_hat_;
};

// Functional form of the update above.
ErgodicAccumulator ergodic_update(ErgodicAccumulator acc, const PrimalVector& x_new,
                                  const DualVector& y_new);

// State after k completed iterations, plus derived columns. Records store the
// schedule parameters at index k (the ones the step leaving this record
// uses), and x_bar/y_bar as computed by the recursion, so diagnostics can
// replay any step from two consecutive records without re-deriving
// extrapolations. Ergodic fields at record k >= 1 carry the averages with
// ergodic index k-1 (built from x^1..x^k). Fields that need an oracle or a
// rate are NaN (or empty) when those were not supplied.
struct TraceRecord {
  long k = 0;
  PrimalVector x, x_bar, x_hat;
  DualVector y, y_bar, y_hat;
  double tau = 0.0, sigma = 0.0, alpha = 0.0, beta = 0.0;
  double dist2_x = 0.0, dist2_y = 0.0;  // squared distances to the oracle point
  double f_hat = 0.0;                   // f at the ergodic pair
  double gap_upper = 0.0;  // bracket bounding f(xhat,yhat) - f*
  double gap_lower = 0.0;  // bracket bounding f* - f(xhat,yhat)
};

struct TraceHeader {
  int version = 1;
  Eigen::Index n = 0, m = 0;
  bool constant_schedule = false;
  double tau = 0.0, sigma = 0.0, alpha = 0.0, beta = 0.0;  // set when constant
  double xi = 0.0;          // NaN when no rate was supplied
  double norm_bound = 0.0;  // coupling norm bound of the problem
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string plan_mode;    // empty when the run was not driven by a plan
  std::string stop_reason;  // "max_iter" | "displacement" | "distance"
};

struct Trace {
  TraceHeader header;
  std::vector<TraceRecord> records;
};

struct StoppingRule {
  long max_iter = 1000;
  double displacement_tol = 1e-12;  // ||z^{k+1} - z^k||; 0 disables
  double distance_tol = 0.0;        // ||z^k - z*|| when an oracle is given; 0 disables
};

struct TraceOptions {
  std::optional<double> xi;  // enables ergodic averaging and value brackets
  const SaddlePointCertificate* oracle = nullptr;  // enables distance columns
  bool store_iterates = true;
};

// One iteration; returns the successor state with k incremented.
IterateState step(const SaddleProblem& p, const IterateState& s, const Schedule& sched);

// Iterates from (x0, y0) until a stopping condition fires, emitting one
// record per completed iteration (plus the initial record). Throws
// std::runtime_error if an iterate becomes non-finite.
Trace run(const SaddleProblem& p, const Schedule& sched, const PrimalVector& x0,
          const DualVector& y0, const StoppingRule& stop,
          const TraceOptions& options = {});

// Convenience overload: constant schedule from the plan, xi filled in from it.
Trace run(const SaddleProblem& p, const StepPlan& plan, const PrimalVector& x0,
          const DualVector& y0, const StoppingRule& stop,
          TraceOptions options = {});

}  // namespace saddle
