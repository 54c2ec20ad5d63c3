#include "saddle/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace saddle {

namespace {

BoundCheck relative_check(std::string id, long k, double lhs, double rhs,
                          bool lhs_is_lower_bounded, double tol) {
  // lhs_is_lower_bounded: inequality reads lhs >= rhs; otherwise lhs <= rhs.
  BoundCheck c;
  c.id = std::move(id);
  c.k = k;
  c.lhs = lhs;
  c.rhs = rhs;
  c.slack = lhs_is_lower_bounded ? lhs - rhs : rhs - lhs;
  c.pass = c.slack >= -tol * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return c;
}

double record_dist2_x(const TraceRecord& rec, const SaddlePointCertificate& oracle) {
  if (rec.x.size() > 0) return (oracle.x_star - rec.x).squaredNorm();
  if (std::isfinite(rec.dist2_x)) return rec.dist2_x;
  throw std::invalid_argument(
      "trace lacks both stored iterates and oracle distance columns");
}

double record_dist2_y(const TraceRecord& rec, const SaddlePointCertificate& oracle) {
  if (rec.y.size() > 0) return (oracle.y_star - rec.y).squaredNorm();
  if (std::isfinite(rec.dist2_y)) return rec.dist2_y;
  throw std::invalid_argument(
      "trace lacks both stored iterates and oracle distance columns");
}

}  // namespace

std::vector<BoundCheck> check_iterate_bound(const Trace& trace, const StepPlan& plan,
                                            const AuxCertificate& cert,
                                            const SaddlePointCertificate& oracle_point,
                                            double tol) {
  if (trace.records.empty()) {
    throw std::invalid_argument("check_iterate_bound: empty trace");
  }
  const double K2 = trace.header.norm_bound * trace.header.norm_bound;
  if (!std::isfinite(K2)) {
    throw std::invalid_argument("check_iterate_bound: trace header lacks a coupling norm");
  }
  const double w = 1.0 / plan.sigma - plan.xi * cert.eta4 * K2;
  if (!(w > 0.0)) {
    throw std::invalid_argument(
        "check_iterate_bound: plan does not certify a positive dual contraction weight");
  }

  const double b0 = record_dist2_x(trace.records.front(), oracle_point) / plan.tau +
                    record_dist2_y(trace.records.front(), oracle_point) / plan.sigma;

  std::vector<BoundCheck> out;
  out.reserve(3 * trace.records.size());
  for (const TraceRecord& rec : trace.records) {
    const double dx2 = record_dist2_x(rec, oracle_point);
    const double dy2 = record_dist2_y(rec, oracle_point);
    const double xipow = std::pow(plan.xi, static_cast<double>(rec.k));
    out.push_back(relative_check("iterate_contraction", rec.k, xipow * b0,
                                 dx2 / plan.tau + w * dy2, true, tol));
    out.push_back(relative_check("primal_distance_bound", rec.k, dx2,
                                 xipow * plan.tau * b0, false, tol));
    out.push_back(relative_check("dual_distance_bound", rec.k, dy2, xipow * b0 / w,
                                 false, tol));
  }
  return out;
}

InitialBracket make_initial_bracket(const StepPlan& plan,
                                    const SaddlePointCertificate& cert,
                                    const PrimalVector& x0, const DualVector& y0) {
  InitialBracket b;
  b.primal = (cert.x_star - x0).squaredNorm() / (2.0 * plan.tau);
  b.dual = (cert.y_star - y0).squaredNorm() / (2.0 * plan.sigma);
  return b;
}

std::vector<BoundCheck> check_value_bound(const Trace& trace, const StepPlan& plan,
                                          const SaddlePointCertificate& cert,
                                          double f_star, const InitialBracket& bracket,
                                          double tol) {
  (void)cert;
  if (trace.records.size() < 2) {
    throw std::invalid_argument("check_value_bound: trace has no completed iterations");
  }
  const TraceRecord& first = trace.records.front();
  if (first.x.size() == 0 || first.y.size() == 0) {
    throw std::invalid_argument("check_value_bound: trace lacks stored iterates");
  }

  std::vector<BoundCheck> out;
  out.reserve(2 * trace.records.size());
  for (std::size_t j = 1; j < trace.records.size(); ++j) {
    const TraceRecord& rec = trace.records[j];
    if (rec.x_hat.size() == 0 || !std::isfinite(rec.f_hat)) {
      throw std::invalid_argument("check_value_bound: trace lacks ergodic values");
    }
    const long kk = rec.k - 1;  // ergodic index carried by this record
    const double xipow = std::pow(plan.xi, static_cast<double>(kk));
    const double upper =
        xipow * (bracket.primal + (rec.y_hat - first.y).squaredNorm() / (2.0 * plan.sigma));
    const double lower =
        xipow * ((rec.x_hat - first.x).squaredNorm() / (2.0 * plan.tau) + bracket.dual);
    out.push_back(
        relative_check("value_upper_bracket", kk, rec.f_hat - f_star, upper, false, tol));
    out.push_back(
        relative_check("value_lower_bracket", kk, f_star - rec.f_hat, lower, false, tol));
  }
  return out;
}

std::vector<BoundCheck> check_step_inequalities(const Trace& trace,
                                                const SaddleProblem& problem,
                                                const StepCheckOptions& options) {
  if (trace.records.size() < 2) return {};
  for (const TraceRecord& rec : trace.records) {
    if (rec.x.size() == 0 || rec.x_bar.size() == 0) {
      throw std::invalid_argument("check_step_inequalities: trace lacks stored iterates");
    }
  }

  const double mu = problem.mu();
  const double nu = problem.nu();
  const auto& K = problem.coupling();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int skipped = 0;

  std::vector<BoundCheck> out;
  for (std::size_t j = 0; j + 1 < trace.records.size(); ++j) {
    const TraceRecord& cur = trace.records[j];
    const TraceRecord& nxt = trace.records[j + 1];
    const long k = cur.k;
    const double tau = cur.tau;
    const double sigma = cur.sigma;

    const PrimalVector& xk = cur.x;
    const PrimalVector& xk1 = nxt.x;
    const DualVector& yk = cur.y;
    const DualVector& yk1 = nxt.y;
    const PrimalVector& xbk = cur.x_bar;    // xbar^k, read by the dual prox
    const DualVector& ybk1 = nxt.y_bar;     // ybar^{k+1}, read by the primal prox

    const double g_next = problem.g().value(xk1);
    const double h_next = problem.h().value(yk1);
    const PrimalVector px = (xk - xk1) / tau - K.adjoint_apply(ybk1);
    const DualVector py = (yk - yk1) / sigma + K.apply(xbk);
    const DualVector k_xbk = K.apply(xbk);

    auto check_sample = [&](const PrimalVector& x, const DualVector& y) {
      const double gx = problem.g().value(x);
      const double hy = problem.h().value(y);
      if (!std::isfinite(gx) || !std::isfinite(hy)) {
        ++skipped;
        return;
      }
      // Strong-convexity subgradient inequality of g at x^{k+1}; the prox
      // update makes (x^k - x^{k+1})/tau - K*ybar^{k+1} a subgradient there.
      const double lhs_i = px.dot(x - xk1) + 0.5 * mu * (x - xk1).squaredNorm() + g_next;
      out.push_back(relative_check("primal_prox_lowerbound", k, lhs_i, gx, false,
                                   options.tol));
      // Dual analogue at y^{k+1}.
      const double lhs_ii =
          py.dot(y - yk1) + 0.5 * nu * (y - yk1).squaredNorm() + h_next;
      out.push_back(relative_check("dual_prox_lowerbound", k, lhs_ii, hy, false,
                                   options.tol));
      // Summed descent form with the bilinear cross terms spelled out.
      const double lhs_v =
          (x - xk).squaredNorm() / (2.0 * tau) + (y - yk).squaredNorm() / (2.0 * sigma);
      const double rhs_v =
          (0.5 * mu + 0.5 / tau) * (x - xk1).squaredNorm() +
          (0.5 * nu + 0.5 / sigma) * (y - yk1).squaredNorm() +
          (xk - xk1).squaredNorm() / (2.0 * tau) +
          (yk - yk1).squaredNorm() / (2.0 * sigma) + k_xbk.dot(y - yk1) -
          ybk1.dot(K.apply(x - xk1)) + g_next - hy + h_next - gx;
      out.push_back(relative_check("joint_prox_descent", k, lhs_v, rhs_v, true,
                                   options.tol));
    };

    if (options.anchor != nullptr) {
      const PrimalVector& xs = options.anchor->x_star;
      const DualVector& ys = options.anchor->y_star;
      check_sample(xs, ys);
      // Saddle-anchored descent inequality; all quantities computable along
      // the trajectory.
      const double lhs = (xs - xk).squaredNorm() / (2.0 * tau) +
                         (ys - yk).squaredNorm() / (2.0 * sigma);
      const double rhs = (mu + 0.5 / tau) * (xs - xk1).squaredNorm() +
                         (nu + 0.5 / sigma) * (ys - yk1).squaredNorm() +
                         (xk - xk1).squaredNorm() / (2.0 * tau) +
                         (yk - yk1).squaredNorm() / (2.0 * sigma) +
                         K.apply(xk1 - xbk).dot(yk1 - ys) -
                         K.apply(xk1 - xs).dot(yk1 - ybk1);
      out.push_back(
          relative_check("saddle_anchored_descent", k, lhs, rhs, true, options.tol));
    }
    for (int s = 0; s < options.samples_per_step; ++s) {
      PrimalVector x(problem.primal_dim());
      DualVector y(problem.dual_dim());
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = gauss(rng);
      for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = gauss(rng);
      check_sample(x, y);
    }
  }
  if (options.skipped_samples != nullptr) *options.skipped_samples = skipped;
  return out;
}

RateFit fit_rate(const std::vector<double>& series, long window_lo, long window_hi) {
  if (series.empty()) throw std::invalid_argument("fit_rate: empty series");
  const long size = static_cast<long>(series.size());
  long lo = std::max(window_lo, 0L);
  long hi = std::min(window_hi, size - 1);
  if (hi < lo) throw std::invalid_argument("fit_rate: empty window");

  // Zeros (and negatives) truncate the window: the series must be strictly
  // positive over the fitted range.
  long end = lo - 1;
  for (long i = lo; i <= hi; ++i) {
    if (!(series[static_cast<std::size_t>(i)] > 0.0)) break;
    end = i;
  }
  // Converged-to-noise tail: once the series falls 8 decades below the
  // window maximum it measures floating-point noise, not the rate; stop the
  // fit at the first such entry. Relative, so the fit is scale equivariant,
  // and a truncated prefix of an exactly geometric series fits the same
  // slope.
  if (end >= lo) {
    double wmax = 0.0;
    for (long i = lo; i <= end; ++i) {
      wmax = std::max(wmax, series[static_cast<std::size_t>(i)]);
    }
    const double floor = 1e-8 * wmax;
    for (long i = lo; i <= end; ++i) {
      if (series[static_cast<std::size_t>(i)] < floor) {
        end = i - 1;
        break;
      }
    }
  }

  const long count = end - lo + 1;
  if (count < 3) {
    throw std::invalid_argument("fit_rate: window shorter than 3 points after truncation");
  }

  double sk = 0.0, sv = 0.0, skk = 0.0, skv = 0.0;
  for (long i = lo; i <= end; ++i) {
    const double kd = static_cast<double>(i);
    const double v = std::log(series[static_cast<std::size_t>(i)]);
    sk += kd;
    sv += v;
    skk += kd * kd;
    skv += kd * v;
  }
  const double nd = static_cast<double>(count);
  const double denom = nd * skk - sk * sk;
  const double slope = (nd * skv - sk * sv) / denom;
  const double intercept = (sv - slope * sk) / nd;

  double ss = 0.0;
  for (long i = lo; i <= end; ++i) {
    const double r =
        std::log(series[static_cast<std::size_t>(i)]) - (intercept + slope * i);
    ss += r * r;
  }

  RateFit fit;
  fit.fitted_rate = std::exp(slope);
  fit.intercept = intercept;
  fit.window_lo = lo;
  fit.window_hi = end;
  fit.residual = std::sqrt(ss / nd);
  fit.points_used = count;
  return fit;
}

RateFit fit_rate(const std::vector<double>& series) {
  const long size = static_cast<long>(series.size());
  return fit_rate(series, size / 10, size - 1);
}

}  // namespace saddle
