// Trajectory diagnostics: asserts the per-iteration contraction and
// function-value bounds certified by a plan, replays the per-step prox
// subgradient inequalities, and fits empirical convergence rates.
//
// All checks are relative: pass <=> slack >= -tol*max(1, |lhs|, |rhs|). The
// max(1, .) floor keeps checks meaningful once distances sit at the
// floating-point noise floor.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "saddle/planner.hpp"
#include "saddle/problem.hpp"
#include "saddle/solver.hpp"

namespace saddle {

inline constexpr double kDefaultCheckTol = 1e-9;

struct BoundCheck {
  std::string id;
  long k = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // oriented so that positive means satisfied
  bool pass = false;
};

struct RateFit {
  double fitted_rate = 0.0;  // exp(slope) of the log-linear least-squares fit
  double intercept = 0.0;    // fit value at k = 0, in log space
  long window_lo = 0;        // window actually used, inclusive
  long window_hi = 0;
  double residual = 0.0;     // RMS of log-space fit residuals
  long points_used = 0;
};

// Per-k contraction certificate along a constant-parameter trace:
//   xi^k ((1/tau)||x*-x^0||^2 + (1/sigma)||y*-y^0||^2)
//     >= (1/tau)||x*-x^k||^2 + (1/sigma - xi*eta4*||K||^2)||y*-y^k||^2
// (id "iterate_contraction"), plus the derived per-coordinate-block bounds
// ||x*-x^k||^2 <= xi^k*tau*B0 ("primal_distance_bound") and ||y*-y^k||^2 <=
// xi^k*B0/w ("dual_distance_bound"). ||K|| is taken from the trace header.
// Requires stored iterates and a positive contraction weight w; throws
// std::invalid_argument otherwise.
std::vector<BoundCheck> check_iterate_bound(const Trace& trace, const StepPlan& plan,
                                            const AuxCertificate& cert,
                                            const SaddlePointCertificate& oracle_point,
                                            double tol = kDefaultCheckTol);

// The two k-independent halves of the ergodic value brackets:
// primal = (1/2*tau0)||x*-x^0||^2, dual = (1/2*sigma0)||y*-y^0||^2.
struct InitialBracket {
  double primal = 0.0;
  double dual = 0.0;
};

InitialBracket make_initial_bracket(const StepPlan& plan,
                                    const SaddlePointCertificate& cert,
                                    const PrimalVector& x0, const DualVector& y0);

// One-sided ergodic value brackets at every ergodic index k:
//   f(xhat_k, yhat_k) - f* <= xi^k (bracket.primal + (1/2*sigma0)||yhat_k-y^0||^2)
//   f* - f(xhat_k, yhat_k) <= xi^k ((1/2*tau0)||xhat_k-x^0||^2 + bracket.dual)
// (ids "value_upper_bracket" / "value_lower_bracket", reported at the trace
// record holding that ergodic index). Requires ergodic values and stored
// iterates in the trace.
std::vector<BoundCheck> check_value_bound(const Trace& trace, const StepPlan& plan,
                                          const SaddlePointCertificate& cert,
                                          double f_star, const InitialBracket& bracket,
                                          double tol = kDefaultCheckTol);

struct StepCheckOptions {
  int samples_per_step = 5;      // random (x, y) sample points per step
  std::uint64_t seed = 1234;     // sampling seed
  const SaddlePointCertificate* anchor = nullptr;  // also sample (x*, y*) and
                                                   // check the anchored form
  double tol = kDefaultCheckTol;
  int* skipped_samples = nullptr;  // out: samples outside dom g / dom h
};

// Replays each recorded step and asserts, at sampled points (x, y):
//  - "primal_prox_lowerbound": the strong-convexity subgradient inequality of
//    g at x^{k+1} with subgradient (x^k - x^{k+1})/tau_k - K*ybar^{k+1},
//  - "dual_prox_lowerbound": the analogue for h at y^{k+1},
//  - "joint_prox_descent": their sum, rearranged as a descent inequality with
//    the bilinear cross terms spelled out,
//  - "saddle_anchored_descent" (only with an anchor): the saddle-anchored
//    descent inequality with cross terms <K(x^{k+1}-xbar^k), y^{k+1}-y*> -
//    <K(x^{k+1}-x*), y^{k+1}-ybar^{k+1}>.
// Sample points outside the effective domains are skipped and counted.
std::vector<BoundCheck> check_step_inequalities(const Trace& trace,
                                                const SaddleProblem& problem,
                                                const StepCheckOptions& options = {});

// Least-squares fit of log(series[k]) against k over the window (inclusive
// index range; the single-argument form drops the first 10% of the series as
// transient). Zeros and the converged-to-noise tail truncate the window: the
// fit stops at the first entry <= 0 and at the first entry below 1e-8 times
// the window maximum (past that point the series measures floating-point
// noise, not the rate). Throws std::invalid_argument if fewer than 3 points
// remain.
RateFit fit_rate(const std::vector<double>& series, long window_lo, long window_hi);
RateFit fit_rate(const std::vector<double>& series);

}  // namespace saddle
