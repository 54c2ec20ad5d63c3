#include "saddle/solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace saddle {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

IterateState IterateState::start(PrimalVector x0, DualVector y0) {
  IterateState s;
  s.x = std::move(x0);
  s.y = std::move(y0);
  s.x_prev = s.x;
  s.x_bar = s.x;
  s.y_prev = s.y;
  s.y_bar = s.y;
  s.k = 0;
  return s;
}

Schedule::Schedule(Fn tau, Fn sigma, Fn alpha, Fn beta)
    : Schedule(std::move(tau), std::move(sigma), std::move(alpha), std::move(beta),
               false) {}

Schedule::Schedule(Fn tau, Fn sigma, Fn alpha, Fn beta, bool constant)
    : tau_(std::move(tau)),
      sigma_(std::move(sigma)),
      alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      constant_(constant) {}

Schedule Schedule::constant(double tau, double sigma, double alpha, double beta) {
  if (!(tau > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("schedule: tau and sigma must be positive");
  }
  if (alpha < 0.0 || beta < 0.0) {
    throw std::invalid_argument("schedule: alpha and beta must be nonnegative");
  }
  return Schedule([tau](long) { return tau; }, [sigma](long) { return sigma; },
                  [alpha](long) { return alpha; }, [beta](long) { return beta; },
                  true);
}

Schedule Schedule::from_plan(const StepPlan& plan) {
  return constant(plan.tau, plan.sigma, plan.alpha, plan.beta);
}

ErgodicAccumulator::ErgodicAccumulator(double xi, PrimalVector x1, DualVector y1)
    : xi_(xi), s_(1.0), x_hat_(std::move(x1)), y_hat_(std::move(y1)) {
  if (!(xi > 0.0) || !(xi < 1.0)) {
    throw std::invalid_argument("ergodic accumulator: xi must lie in (0,1)");
  }
}

void ErgodicAccumulator::update(const PrimalVector& x_new, const DualVector& y_new) {
  s_ = xi_ * s_ + 1.0;
  const double w = 1.0 / s_;
  x_hat_ = (1.0 - w) * x_hat_ + w * x_new;
  y_hat_ = (1.0 - w) * y_hat_ + w * y_new;
}

ErgodicAccumulator ergodic_update(ErgodicAccumulator acc, const PrimalVector& x_new,
                                  const DualVector& y_new) {
  acc.update(x_new, y_new);
  return acc;
}

IterateState step(const SaddleProblem& p, const IterateState& s, const Schedule& sched) {
  if (s.x.size() != p.primal_dim() || s.y.size() != p.dual_dim()) {
    throw std::invalid_argument("step: state dimensions do not match problem");
  }
  const double tau = sched.tau(s.k);
  const double sigma = sched.sigma(s.k);
  const double alpha = sched.alpha(s.k);
  const double beta = sched.beta(s.k);

  IterateState next;
  // Dual prox reads the previous extrapolated primal.
  next.y = p.h().prox(sigma, sigma * p.coupling().apply(s.x_bar) + s.y);
  next.y_bar = next.y + beta * (next.y - s.y);
  // Primal prox reads the freshly extrapolated dual.
  next.x = p.g().prox(tau, s.x - tau * p.coupling().adjoint_apply(next.y_bar));
  next.x_bar = next.x + alpha * (next.x - s.x);
  next.x_prev = s.x;
  next.y_prev = s.y;
  next.k = s.k + 1;
  return next;
}

namespace {

// Derived columns for one record; fields that need an oracle or a rate stay
// NaN when those are absent.
void fill_columns(TraceRecord& rec, const SaddleProblem& p, const TraceOptions& opt,
                  const IterateState& st, const ErgodicAccumulator* erg,
                  const PrimalVector& x0, const DualVector& y0, double tau0,
                  double sigma0) {
  rec.dist2_x = kNaN;
  rec.dist2_y = kNaN;
  rec.f_hat = kNaN;
  rec.gap_upper = kNaN;
  rec.gap_lower = kNaN;
  if (opt.oracle != nullptr) {
    rec.dist2_x = (opt.oracle->x_star - st.x).squaredNorm();
    rec.dist2_y = (opt.oracle->y_star - st.y).squaredNorm();
  }
  if (erg != nullptr) {
    rec.f_hat = evaluate_f(p, erg->x_hat(), erg->y_hat());
    if (opt.oracle != nullptr) {
      // One-sided value brackets at ergodic index k-1 (the average is built
      // from x^1..x^k when this record is k).
      const double xipow = std::pow(erg->xi(), static_cast<double>(st.k - 1));
      rec.gap_upper = xipow * ((opt.oracle->x_star - x0).squaredNorm() / (2.0 * tau0) +
                               (erg->y_hat() - y0).squaredNorm() / (2.0 * sigma0));
      rec.gap_lower = xipow * ((erg->x_hat() - x0).squaredNorm() / (2.0 * tau0) +
                               (opt.oracle->y_star - y0).squaredNorm() / (2.0 * sigma0));
    }
  }
  if (opt.store_iterates) {
    rec.x = st.x;
    rec.y = st.y;
    rec.x_bar = st.x_bar;
    rec.y_bar = st.y_bar;
    if (erg != nullptr) {
      rec.x_hat = erg->x_hat();
      rec.y_hat = erg->y_hat();
    }
  }
}

}  // namespace

Trace run(const SaddleProblem& p, const Schedule& sched, const PrimalVector& x0,
          const DualVector& y0, const StoppingRule& stop, const TraceOptions& options) {
  if (x0.size() != p.primal_dim() || y0.size() != p.dual_dim()) {
    throw std::invalid_argument("run: start point dimensions do not match problem");
  }
  if (options.xi && (!(*options.xi > 0.0) || !(*options.xi < 1.0))) {
    throw std::invalid_argument("run: xi must lie in (0,1)");
  }

  Trace trace;
  trace.header.n = p.primal_dim();
  trace.header.m = p.dual_dim();
  trace.header.constant_schedule = sched.is_constant();
  trace.header.tau = sched.is_constant() ? sched.tau(0) : kNaN;
  trace.header.sigma = sched.is_constant() ? sched.sigma(0) : kNaN;
  trace.header.alpha = sched.is_constant() ? sched.alpha(0) : kNaN;
  trace.header.beta = sched.is_constant() ? sched.beta(0) : kNaN;
  trace.header.xi = options.xi ? *options.xi : kNaN;
  trace.header.norm_bound = p.coupling().norm_bound();
  trace.header.stop_reason = "max_iter";

  const double tau0 = sched.tau(0);
  const double sigma0 = sched.sigma(0);

  IterateState state = IterateState::start(x0, y0);
  std::optional<ErgodicAccumulator> erg;

  auto make_record = [&](const IterateState& st) {
    TraceRecord rec;
    rec.k = st.k;
    rec.tau = sched.tau(st.k);
    rec.sigma = sched.sigma(st.k);
    rec.alpha = sched.alpha(st.k);
    rec.beta = sched.beta(st.k);
    fill_columns(rec, p, options, st, erg ? &*erg : nullptr, x0, y0, tau0, sigma0);
    return rec;
  };

  trace.records.push_back(make_record(state));

  for (long k = 0; k < stop.max_iter; ++k) {
    IterateState next = step(p, state, sched);
    if (!next.x.allFinite() || !next.y.allFinite()) {
      throw std::runtime_error("run: non-finite iterate at iteration " +
                               std::to_string(next.k));
    }
    if (options.xi) {
      if (!erg) {
        erg.emplace(*options.xi, next.x, next.y);
      } else {
        erg->update(next.x, next.y);
      }
    }
    const double displacement = std::sqrt((next.x - state.x).squaredNorm() +
                                          (next.y - state.y).squaredNorm());
    state = std::move(next);
    trace.records.push_back(make_record(state));

    if (stop.displacement_tol > 0.0 && displacement <= stop.displacement_tol) {
      trace.header.stop_reason = "displacement";
      break;
    }
    if (stop.distance_tol > 0.0 && options.oracle != nullptr) {
      const double d2 = (options.oracle->x_star - state.x).squaredNorm() +
                        (options.oracle->y_star - state.y).squaredNorm();
      if (std::sqrt(d2) <= stop.distance_tol) {
        trace.header.stop_reason = "distance";
        break;
      }
    }
  }
  return trace;
}

Trace run(const SaddleProblem& p, const StepPlan& plan, const PrimalVector& x0,
          const DualVector& y0, const StoppingRule& stop, TraceOptions options) {
  // Hand-built plans may carry xi = 0 ("no certified rate"); only a usable
  // rate enables ergodic averaging.
  if (!options.xi && plan.xi > 0.0 && plan.xi < 1.0) options.xi = plan.xi;
  return run(p, Schedule::from_plan(plan), x0, y0, stop, options);
}

}  // namespace saddle
