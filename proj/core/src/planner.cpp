#include "saddle/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace saddle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Strict inequalities are enforced at construction time with this relative
// slack so the emitted plan survives floating point re-evaluation.
constexpr double kRelSlack = 1e-9;

double guarded_ratio(double num, double den) {
  // Lower-bound formulas whose denominator must be positive; a nonpositive
  // denominator means the chain is broken and the bound is unsatisfiable.
  return den > 0.0 ? num / den : kInf;
}

}  // namespace

const char* plan_mode_name(PlanMode mode) {
  switch (mode) {
    case PlanMode::iterate_k: return "iterate-k";
    case PlanMode::iterate_ksq: return "iterate-ksq";
    case PlanMode::value_k: return "value-k";
    case PlanMode::value_ksq: return "value-ksq";
  }
  throw std::invalid_argument("unknown plan mode");
}

PlanMode parse_plan_mode(const std::string& s) {
  if (s == "iterate-k") return PlanMode::iterate_k;
  if (s == "iterate-ksq") return PlanMode::iterate_ksq;
  if (s == "value-k") return PlanMode::value_k;
  if (s == "value-ksq") return PlanMode::value_ksq;
  throw std::invalid_argument("unknown plan mode: " + s +
                              " (expected iterate-k, iterate-ksq, value-k, value-ksq)");
}

const char* cert_family_name(CertFamily family) {
  return family == CertFamily::norm_k ? "K" : "Ksq";
}

CertFamily parse_cert_family(const std::string& s) {
  if (s == "K") return CertFamily::norm_k;
  if (s == "Ksq") return CertFamily::norm_k_squared;
  throw std::invalid_argument("unknown certificate family: " + s);
}

CertFamily plan_mode_family(PlanMode mode) {
  return (mode == PlanMode::iterate_k || mode == PlanMode::value_k)
             ? CertFamily::norm_k
             : CertFamily::norm_k_squared;
}

double plan_mode_zeta(PlanMode mode) {
  return (mode == PlanMode::iterate_k || mode == PlanMode::iterate_ksq) ? 2.0 : 1.0;
}

bool PlanReport::all_margins_pass() const {
  return std::all_of(margins.begin(), margins.end(),
                     [](const Margin& m) { return m.pass(); });
}

std::vector<Margin> validate_plan(const StepPlan& plan, const AuxCertificate& cert,
                                  double mu, double nu, double normK, PlanMode mode) {
  if (!(plan.tau > 0.0) || !(plan.sigma > 0.0)) {
    throw std::invalid_argument("validate_plan: tau and sigma must be positive");
  }
  if (!(plan.alpha > 0.0) || !(plan.xi > 0.0) || plan.beta < 0.0) {
    throw std::invalid_argument("validate_plan: alpha and xi must be positive, beta nonnegative");
  }
  if (!(cert.eta1 > 0.0) || !(cert.eta2 > 0.0) || !(cert.eta3 > 0.0) ||
      !(cert.eta4 > 0.0)) {
    throw std::invalid_argument("validate_plan: certificate etas must be positive");
  }
  if (!(mu > 0.0) || !(nu > 0.0) || normK < 0.0) {
    throw std::invalid_argument("validate_plan: need mu, nu > 0 and normK >= 0");
  }
  if (cert.family != plan_mode_family(mode)) {
    throw std::invalid_argument("validate_plan: certificate family does not match mode");
  }
  const double z = plan_mode_zeta(mode);
  if (cert.zeta != z) {
    throw std::invalid_argument("validate_plan: certificate zeta does not match mode");
  }

  const double t = plan.tau, s = plan.sigma, a = plan.alpha, b = plan.beta;
  const double xi = plan.xi;
  const double K = normK, K2 = normK * normK;
  const double e1 = cert.eta1, e2 = cert.eta2, e3 = cert.eta3, e4 = cert.eta4;
  const double D = a * t * s * K2;
  const double C = z * mu + 1.0 / t - 1.0 / (a * t);

  std::vector<Margin> out;
  out.reserve(20);
  auto add = [&out](const char* id, double slack, bool strict) {
    out.push_back(Margin{id, slack, strict});
  };

  // Construction chain: thresholds, the alpha interval, the coupling
  // product, the beta budget and the eta selection bounds.
  add("threshold_primal", (z * mu + 1.0 / t) / s - K2, true);
  add("threshold_dual", (z * nu + 1.0 / s) / t - K2, true);
  add("alpha_lower", a - 1.0 / (z * mu * t + 1.0), true);
  add("alpha_upper", 1.0 - a, true);
  add("alpha_dual_lower", a - 1.0 / (z * nu * s + 1.0), false);
  add("coupling_product", 1.0 - D, true);
  add("beta_budget", (1.0 - D) * C - s * K2 * b * b, false);
  add("eta4_lower", e4 - t, false);
  add("eta4_coupling", 1.0 - a * s * e4 * K2, true);

  if (cert.family == CertFamily::norm_k) {
    add("eta3_lower", e3 - guarded_ratio(s * K, 1.0 - D), true);
    add("eta3_budget", C - e3 * K * b * b, true);
    add("eta1_lower", e1 - (K > 0.0 ? guarded_ratio(s * K * e3, e3 - s * K) : 0.0),
        false);
    add("eta1_coupling", 1.0 - a * t * e1 * K, true);
    add("eta2_lower",
        e2 - (K > 0.0 ? guarded_ratio(t * K, a - t * e1 * K * a * a) : 0.0), false);
    // Rate hypotheses (constant parameters, so inf = sup = value).
    add("agg_primal", xi / t - K * (e1 * xi * xi + 1.0 / e2), false);
    add("agg_dual", 1.0 / s - K * (1.0 / e1 + 1.0 / e3), false);
    add("rate_mu", z * mu - (1.0 / (xi * t) - 1.0 / t + e3 * K * b * b), false);
  } else {
    add("eta3_lower", e3 - guarded_ratio(s, 1.0 - D), true);
    add("eta3_budget", C - K2 * b * b * e3, false);
    add("eta1_lower", e1 - guarded_ratio(s * e3, e3 - s), false);
    add("eta1_coupling", 1.0 - a * t * e1 * K2, true);
    add("eta2_lower", e2 - guarded_ratio(t, a * (1.0 - a * t * e1 * K2)), false);
    add("agg_primal", 1.0 / t - (e1 * K2 * xi + 1.0 / (e2 * xi)), false);
    add("agg_dual", 1.0 / s - (1.0 / e1 + 1.0 / e3), false);
    add("rate_mu", z * mu - (1.0 / (xi * t) - 1.0 / t + e3 * K2 * b * b), false);
  }

  add("rate_nu", z * nu - (1.0 / (xi * s) - 1.0 / s), false);
  add("rate_coupling", 1.0 - xi * t * s * K2, true);
  add("contraction_weight", 1.0 / s - xi * e4 * K2, true);
  return out;
}

namespace {

struct StepSearch {
  double tau = 0.0, sigma = 0.0, alpha = 0.0;
  bool ok = false;
  std::string failed;
};

// Search schedule: tau = sigma = c*min(1/mu, 1/nu, 1/(K+eps)) with c halved
// up to 40 times until the thresholds and a usable alpha interval pass with
// relative slack >= 1e-9.
StepSearch search_steps(double mu, double nu, double K, double zeta) {
  constexpr double kEps = 1e-12;
  StepSearch r;
  double c = 1.0;
  for (int attempt = 0; attempt <= 40; ++attempt, c *= 0.5) {
    const double t = c * std::min({1.0 / mu, 1.0 / nu, 1.0 / (K + kEps)});
    const double s = t;
    const double K2 = K * K;
    const double thr1 = (zeta * mu + 1.0 / t) / s;
    const double thr2 = (zeta * nu + 1.0 / s) / t;
    const double lo = std::max(1.0 / (zeta * mu * t + 1.0), 1.0 / (zeta * nu * s + 1.0));
    const double hi = std::min(1.0, K > 0.0 ? 1.0 / (t * s * K2) : kInf);
    const double alpha = 0.5 * (lo + hi);

    r.tau = t;
    r.sigma = s;
    r.alpha = alpha;
    if (thr1 - K2 <= kRelSlack * std::max({1.0, K2, thr1})) {
      r.failed = "threshold_primal";
      continue;
    }
    if (thr2 - K2 <= kRelSlack * std::max({1.0, K2, thr2})) {
      r.failed = "threshold_dual";
      continue;
    }
    if (alpha - lo <= kRelSlack) {
      r.failed = lo > 1.0 / (zeta * mu * t + 1.0) ? "alpha_dual_lower" : "alpha_lower";
      continue;
    }
    if (1.0 - alpha <= kRelSlack) {
      r.failed = "alpha_upper";
      continue;
    }
    if (hi - alpha <= kRelSlack) {
      r.failed = hi < 1.0 ? "coupling_product" : "alpha_upper";
      continue;
    }
    r.ok = true;
    r.failed.clear();
    return r;
  }
  return r;
}

PlanReport make_plan(double mu, double nu, double normK, PlanMode mode,
                     bool beta_zero) {
  if (!(mu > 0.0) || !(nu > 0.0)) {
    throw std::invalid_argument("planner: moduli must be positive");
  }
  if (normK < 0.0 || !std::isfinite(normK)) {
    throw std::invalid_argument("planner: normK must be finite and nonnegative");
  }

  PlanReport report;
  report.mu = mu;
  report.nu = nu;
  report.norm_k = normK;

  const double zeta = plan_mode_zeta(mode);
  const CertFamily family = plan_mode_family(mode);
  const StepSearch steps = search_steps(mu, nu, normK, zeta);
  if (!steps.ok) {
    report.feasible = false;
    report.failure = steps.failed;
    return report;
  }

  const double t = steps.tau, s = steps.sigma, a = steps.alpha;
  const double K = normK, K2 = normK * normK;
  const double D = a * t * s * K2;           // < 1 by the search
  const double C = zeta * mu + 1.0 / t - 1.0 / (a * t);  // > 0 by alpha_lower

  StepPlan plan;
  plan.tau = t;
  plan.sigma = s;
  plan.alpha = a;
  plan.xi = a;
  if (beta_zero) {
    plan.beta = 0.0;
  } else if (K > 0.0) {
    // Largest allowed dual extrapolation, backed off to 90% of the budget:
    // the extrapolation is the method's distinguishing feature, so the
    // default plan uses it rather than beta = 0.
    plan.beta = 0.9 * std::sqrt((1.0 - D) * C / (s * K2));
  } else {
    plan.beta = 1.0;  // budget is unbounded for a decoupled problem
  }

  AuxCertificate cert;
  cert.zeta = zeta;
  cert.family = family;
  // eta4 in [tau, 1/(alpha*sigma*K^2)): 1.1x the lower end, capped at the
  // interval midpoint (the midpoint exists because D < 1).
  const double u4 = K > 0.0 ? 1.0 / (a * s * K2) : kInf;
  cert.eta4 = std::min(1.1 * t, 0.5 * (t + u4));

  if (family == CertFamily::norm_k) {
    if (K > 0.0) {
      // The upper constraint on eta3 is C/(K*beta^2); with beta at 90% of its
      // budget that equals lower/0.81, so 1.1x the lower bound always fits.
      cert.eta3 = 1.1 * s * K / (1.0 - D);
      const double l1 = s * K * cert.eta3 / (cert.eta3 - s * K);
      const double u1 = 1.0 / (a * t * K);
      cert.eta1 = std::min(1.1 * l1, 0.5 * (l1 + u1));
      cert.eta2 = 1.1 * t * K / (a - t * cert.eta1 * K * a * a);
    } else {
      // Decoupled problem: every coupling inequality is vacuous; pick the
      // natural positive scales.
      cert.eta3 = s;
      cert.eta1 = t;
      cert.eta2 = t;
    }
  } else {
    cert.eta3 = 1.1 * s / (1.0 - D);
    const double l1 = s * cert.eta3 / (cert.eta3 - s);
    const double u1 = K > 0.0 ? 1.0 / (a * t * K2) : kInf;
    cert.eta1 = std::min(1.1 * l1, 0.5 * (l1 + u1));
    cert.eta2 = 1.1 * t / (a * (1.0 - a * t * cert.eta1 * K2));
  }

  report.plan = plan;
  report.cert = cert;
  report.margins = validate_plan(plan, cert, mu, nu, normK, mode);
  report.feasible = report.all_margins_pass();
  if (!report.feasible) {
    double worst = kInf;
    for (const Margin& m : report.margins) {
      if (!m.pass() && m.slack < worst) {
        worst = m.slack;
        report.failure = m.id;
      }
    }
  }
  return report;
}

}  // namespace

PlanReport plan_iterate_rate_K(double mu, double nu, double normK, bool beta_zero) {
  return make_plan(mu, nu, normK, PlanMode::iterate_k, beta_zero);
}

PlanReport plan_iterate_rate_Ksq(double mu, double nu, double normK, bool beta_zero) {
  return make_plan(mu, nu, normK, PlanMode::iterate_ksq, beta_zero);
}

PlanReport plan_value_rate(double mu, double nu, double normK, CertFamily variant,
                           bool beta_zero) {
  return make_plan(mu, nu, normK,
                   variant == CertFamily::norm_k ? PlanMode::value_k
                                                 : PlanMode::value_ksq,
                   beta_zero);
}

}  // namespace saddle
