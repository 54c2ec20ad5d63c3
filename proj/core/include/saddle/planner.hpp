// Parameter planner: constructs constant step parameters (tau, sigma, alpha,
// beta) plus the auxiliary certificate (zeta, eta1..eta4) whose inequalities
// jointly imply linear convergence, and re-validates every inequality
// numerically before returning. Two condition families exist, differing in
// whether the coupling enters the certificate through ||K|| or ||K||^2;
// iterate-rate plans use zeta = 2, function-value plans use zeta = 1.
#pragma once

#include <string>
#include <vector>

namespace saddle {

enum class CertFamily { norm_k, norm_k_squared };

enum class PlanMode { iterate_k, iterate_ksq, value_k, value_ksq };

const char* plan_mode_name(PlanMode mode);       // "iterate-k", "iterate-ksq", ...
PlanMode parse_plan_mode(const std::string& s);  // throws std::invalid_argument
const char* cert_family_name(CertFamily family); // "K", "Ksq"
CertFamily parse_cert_family(const std::string& s);
CertFamily plan_mode_family(PlanMode mode);
double plan_mode_zeta(PlanMode mode);            // 2 for iterate modes, 1 for value modes

struct StepPlan {
  double tau = 0.0;
  double sigma = 0.0;
  double alpha = 0.0;  // in (0,1); also the certified rate for constant plans
  double beta = 0.0;
  double xi = 0.0;     // certified contraction rate; equals alpha here
};

struct AuxCertificate {
  double zeta = 0.0;  // 2 for iterate-rate plans, 1 for value-rate plans
  double eta1 = 0.0;
  double eta2 = 0.0;
  double eta3 = 0.0;
  double eta4 = 0.0;
  CertFamily family = CertFamily::norm_k;
};

// One inequality of the plan. slack is signed: for "lhs <= rhs" inequalities
// it is rhs - lhs, for "lhs >= rhs" it is lhs - rhs, so positive always means
// satisfied with room. Strict inequalities require slack > 0 to pass.
struct Margin {
  std::string id;
  double slack = 0.0;
  bool strict = false;

  bool pass() const { return strict ? slack > 0.0 : slack >= 0.0; }
};

struct PlanReport {
  StepPlan plan;
  AuxCertificate cert;
  std::vector<Margin> margins;
  bool feasible = false;
  std::string failure;  // id of the inequality that failed last, when infeasible
  // Inputs echoed for audit and re-validation.
  double mu = 0.0;
  double nu = 0.0;
  double norm_k = 0.0;

  bool all_margins_pass() const;
};

// Planners. Preconditions: mu > 0, nu > 0, normK >= 0 (throws
// std::invalid_argument otherwise). The search schedule takes
// tau = sigma = c*min(1/mu, 1/nu, 1/(normK+eps)) with c halved up to 40 times
// until the two threshold inequalities pass with relative slack >= 1e-9;
// alpha is the midpoint of its feasible interval, beta is 0.9x the square
// root of its budget (or 0 when beta_zero), and each eta sits at 1.1x its
// lower threshold, capped at the midpoint to its upper constraint where one
// exists. Infeasibility is reported via PlanReport::feasible = false with the
// failing inequality named; it is not an exception.
PlanReport plan_iterate_rate_K(double mu, double nu, double normK,
                               bool beta_zero = false);
PlanReport plan_iterate_rate_Ksq(double mu, double nu, double normK,
                                 bool beta_zero = false);
PlanReport plan_value_rate(double mu, double nu, double normK, CertFamily variant,
                           bool beta_zero = false);

// Re-evaluates every inequality of the selected mode from the stored fields:
// the construction chain (thresholds, alpha interval, coupling product,
// beta budget, eta chain) and the rate hypotheses (the zeta*mu /
// zeta*nu lower bounds, the eta1/eta2 aggregation inequalities, the rate
// coupling product, and the positive contraction weight 1/sigma -
// xi*eta4*||K||^2). Negative slack is data, not an error. Throws
// std::invalid_argument if cert.family disagrees with the mode.
std::vector<Margin> validate_plan(const StepPlan& plan, const AuxCertificate& cert,
                                  double mu, double nu, double normK, PlanMode mode);

}  // namespace saddle
