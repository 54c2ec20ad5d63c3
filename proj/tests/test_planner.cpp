#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "saddle/planner.hpp"

using namespace saddle;

namespace {

const Margin& find_margin(const std::vector<Margin>& margins, const std::string& id) {
  for (const Margin& m : margins) {
    if (m.id == id) return m;
  }
  FAIL("margin not found: ", id);
  static Margin dummy;
  return dummy;
}

constexpr const char* kMarginOrder[20] = {
    "threshold_primal", "threshold_dual", "alpha_lower",   "alpha_upper",
    "alpha_dual_lower", "coupling_product", "beta_budget", "eta4_lower",
    "eta4_coupling",    "eta3_lower",     "eta3_budget",   "eta1_lower",
    "eta1_coupling",    "eta2_lower",     "agg_primal",    "agg_dual",
    "rate_mu",          "rate_nu",        "rate_coupling", "contraction_weight"};

}  // namespace

TEST_CASE("mode and family names round trip") {
  for (PlanMode mode : {PlanMode::iterate_k, PlanMode::iterate_ksq,
                        PlanMode::value_k, PlanMode::value_ksq}) {
    CHECK(parse_plan_mode(plan_mode_name(mode)) == mode);
  }
  CHECK_THROWS_AS(parse_plan_mode("gradient-descent"), std::invalid_argument);
  CHECK(parse_cert_family("K") == CertFamily::norm_k);
  CHECK(parse_cert_family("Ksq") == CertFamily::norm_k_squared);
  CHECK_THROWS_AS(parse_cert_family("k2"), std::invalid_argument);
  CHECK(plan_mode_zeta(PlanMode::iterate_k) == 2.0);
  CHECK(plan_mode_zeta(PlanMode::value_ksq) == 1.0);
  CHECK(plan_mode_family(PlanMode::iterate_k) == CertFamily::norm_k);
  CHECK(plan_mode_family(PlanMode::value_ksq) == CertFamily::norm_k_squared);
}

// Hand-derived feasible point for mu = nu = 1, ||K|| = 1, iterate rate:
// tau = sigma = 1/2, alpha = 3/4 gives D = 3/16 and C = 4/3, so the beta
// budget (1-D)C/(sigma*K^2) is 13/6 and beta = 1.2 fits inside it. The etas
// below are 1.1x their chain lower bounds (eta1 hits its midpoint cap).
TEST_CASE("hand-derived iterate-rate certificate validates") {
  StepPlan plan;
  plan.tau = plan.sigma = 0.5;
  plan.alpha = plan.xi = 0.75;
  plan.beta = 1.2;
  AuxCertificate cert;
  cert.zeta = 2.0;
  cert.family = CertFamily::norm_k;
  cert.eta4 = 0.55;
  cert.eta3 = 1.1 * 0.5 / (1.0 - 0.1875);  // 44/65
  const double l1 = 0.5 * cert.eta3 / (cert.eta3 - 0.5);
  CHECK(l1 == doctest::Approx(44.0 / 23.0).epsilon(1e-12));
  cert.eta1 = 1.1 * l1;  // 2.10434..., below the midpoint to 1/(alpha*tau)
  cert.eta2 = 1.1 * 0.5 / (0.75 - 0.5 * cert.eta1 * 0.5625);

  const double budget = (1.0 - 0.1875) * (4.0 / 3.0) / 0.5;
  CHECK(budget == doctest::Approx(2.1666666666666665).epsilon(1e-12));

  const auto margins = validate_plan(plan, cert, 1.0, 1.0, 1.0, PlanMode::iterate_k);
  REQUIRE(margins.size() == 20);
  for (size_t i = 0; i < margins.size(); ++i) CHECK(margins[i].id == kMarginOrder[i]);
  for (const Margin& m : margins) {
    INFO("margin ", m.id, " slack ", m.slack);
    CHECK(m.pass());
  }
  CHECK(find_margin(margins, "coupling_product").slack ==
        doctest::Approx(0.8125).epsilon(1e-12));
  CHECK(find_margin(margins, "beta_budget").slack ==
        doctest::Approx(0.8125 * 4.0 / 3.0 - 0.5 * 1.44).epsilon(1e-12));
  CHECK(find_margin(margins, "rate_nu").slack ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("hand-derived squared-coupling certificate validates") {
  StepPlan plan;
  plan.tau = plan.sigma = 0.5;
  plan.alpha = plan.xi = 0.75;
  plan.beta = 1.2;
  AuxCertificate cert;
  cert.zeta = 2.0;
  cert.family = CertFamily::norm_k_squared;
  cert.eta4 = 0.55;
  cert.eta3 = 1.1 * 0.5 / (1.0 - 0.1875);
  CHECK(cert.eta3 - 0.5 / (1.0 - 0.1875) ==
        doctest::Approx(0.1 * 0.5 / 0.8125).epsilon(1e-9));
  cert.eta1 = 1.1 * 0.5 * cert.eta3 / (cert.eta3 - 0.5);
  cert.eta2 = 1.1 * 0.5 / (0.75 * (1.0 - 0.75 * 0.5 * cert.eta1));

  const auto margins =
      validate_plan(plan, cert, 1.0, 1.0, 1.0, PlanMode::iterate_ksq);
  for (const Margin& m : margins) {
    INFO("margin ", m.id, " slack ", m.slack);
    CHECK(m.pass());
  }
}

TEST_CASE("hand-derived value-rate certificate validates") {
  // zeta = 1 shrinks the alpha interval to (2/3, 1); alpha = 0.8, D = 1/5,
  // C = 1/2, beta budget 0.8 so beta = 0.6 fits.
  StepPlan plan;
  plan.tau = plan.sigma = 0.5;
  plan.alpha = plan.xi = 0.8;
  plan.beta = 0.6;
  AuxCertificate cert;
  cert.zeta = 1.0;
  cert.family = CertFamily::norm_k;
  cert.eta4 = 0.55;
  cert.eta3 = 1.1 * 0.5 / 0.8;
  cert.eta1 = std::min(1.1 * (0.5 * cert.eta3 / (cert.eta3 - 0.5)),
                       0.5 * (0.5 * cert.eta3 / (cert.eta3 - 0.5) + 2.5));
  cert.eta2 = 1.1 * 0.5 / (0.8 - 0.5 * cert.eta1 * 0.64);

  const auto margins = validate_plan(plan, cert, 1.0, 1.0, 1.0, PlanMode::value_k);
  for (const Margin& m : margins) {
    INFO("margin ", m.id, " slack ", m.slack);
    CHECK(m.pass());
  }
  CHECK(find_margin(margins, "rate_nu").slack == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("planner emits a self-consistent plan for a unit instance") {
  const PlanReport r = plan_iterate_rate_K(1.0, 1.0, 1.0);
  REQUIRE(r.feasible);
  CHECK(r.failure.empty());
  CHECK(r.all_margins_pass());
  REQUIRE(r.margins.size() == 20);
  for (size_t i = 0; i < r.margins.size(); ++i) CHECK(r.margins[i].id == kMarginOrder[i]);
  CHECK(r.plan.xi == r.plan.alpha);
  // Frozen values for the default search at mu = nu = ||K|| = 1.
  CHECK(r.plan.tau == doctest::Approx(1.0 / (1.0 + 1e-12)).epsilon(1e-12));
  CHECK(r.plan.sigma == r.plan.tau);
  CHECK(r.plan.alpha == doctest::Approx(0.666666666667).epsilon(1e-9));
  CHECK(r.plan.beta == doctest::Approx(0.636396103069).epsilon(1e-9));
  CHECK(r.cert.eta1 == doctest::Approx(1.46739130435).epsilon(1e-9));
  CHECK(r.cert.eta2 == doctest::Approx(75.8999999995).epsilon(1e-8));
  CHECK(r.cert.eta3 == doctest::Approx(3.29999999998).epsilon(1e-9));
  CHECK(r.cert.eta4 == doctest::Approx(1.1).epsilon(1e-9));
  CHECK(r.cert.zeta == 2.0);
  CHECK(r.cert.family == CertFamily::norm_k);
}

TEST_CASE("planner succeeds in every mode for a unit instance") {
  const PlanReport reports[] = {
      plan_iterate_rate_K(1.0, 1.0, 1.0), plan_iterate_rate_Ksq(1.0, 1.0, 1.0),
      plan_value_rate(1.0, 1.0, 1.0, CertFamily::norm_k),
      plan_value_rate(1.0, 1.0, 1.0, CertFamily::norm_k_squared)};
  for (const PlanReport& r : reports) {
    CHECK(r.feasible);
    CHECK(r.all_margins_pass());
    CHECK(r.plan.alpha > 0.0);
    CHECK(r.plan.alpha < 1.0);
    CHECK(r.plan.tau > 0.0);
    CHECK(r.plan.sigma == r.plan.tau);
  }
  CHECK(plan_iterate_rate_K(10.0, 10.0, 1.0).feasible);
}

TEST_CASE("decoupled instance gets full dual extrapolation") {
  const PlanReport r = plan_value_rate(1.0, 1.0, 0.0, CertFamily::norm_k_squared);
  REQUIRE(r.feasible);
  CHECK(r.plan.beta == 1.0);
  CHECK(r.plan.tau == 1.0);
  CHECK(r.plan.alpha == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.cert.eta1 == doctest::Approx(12.1).epsilon(1e-12));
  CHECK(r.cert.eta2 == doctest::Approx(1.1 / 0.75).epsilon(1e-12));
  CHECK(r.cert.eta3 == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(r.all_margins_pass());
}

TEST_CASE("beta-zero request zeroes the extrapolation but stays feasible") {
  const PlanReport r = plan_iterate_rate_K(2.0, 0.5, 3.0, /*beta_zero=*/true);
  REQUIRE(r.feasible);
  CHECK(r.plan.beta == 0.0);
  CHECK(r.all_margins_pass());
}

TEST_CASE("boundary alpha fails its strict lower margin with zero slack") {
  StepPlan plan;
  plan.tau = plan.sigma = 0.5;
  plan.alpha = plan.xi = 0.5;  // exactly 1/(zeta*mu*tau + 1)
  plan.beta = 0.0;
  AuxCertificate cert;
  cert.zeta = 2.0;
  cert.family = CertFamily::norm_k;
  cert.eta1 = cert.eta2 = cert.eta3 = cert.eta4 = 1.0;
  const auto margins = validate_plan(plan, cert, 1.0, 1.0, 1.0, PlanMode::iterate_k);
  const Margin& lower = find_margin(margins, "alpha_lower");
  CHECK(lower.slack == 0.0);
  CHECK(lower.strict);
  CHECK_FALSE(lower.pass());
}

TEST_CASE("doubling beta blows the budget") {
  PlanReport r = plan_iterate_rate_K(1.0, 1.0, 1.0);
  REQUIRE(r.feasible);
  StepPlan bumped = r.plan;
  bumped.beta *= 2.0;
  const auto margins = validate_plan(bumped, r.cert, 1.0, 1.0, 1.0, PlanMode::iterate_k);
  CHECK(find_margin(margins, "beta_budget").slack < 0.0);
  CHECK_FALSE(find_margin(margins, "beta_budget").pass());
}

TEST_CASE("broken eta chain reports unbounded negative slack, not an exception") {
  PlanReport r = plan_iterate_rate_Ksq(1.0, 1.0, 1.0);
  REQUIRE(r.feasible);
  AuxCertificate broken = r.cert;
  broken.eta3 = r.plan.sigma;  // eta1 lower bound sigma*eta3/(eta3-sigma) degenerates
  const auto margins =
      validate_plan(r.plan, broken, 1.0, 1.0, 1.0, PlanMode::iterate_ksq);
  CHECK(find_margin(margins, "eta1_lower").slack ==
        -std::numeric_limits<double>::infinity());
  CHECK_FALSE(find_margin(margins, "eta1_lower").pass());
}

TEST_CASE("vanishing primal modulus is reported infeasible, not thrown") {
  const PlanReport r = plan_iterate_rate_K(1e-12, 1.0, 1.0);
  CHECK_FALSE(r.feasible);
  CHECK(r.failure == "alpha_lower");
  CHECK(r.margins.empty());
}

TEST_CASE("planner input validation") {
  CHECK_THROWS_AS(plan_iterate_rate_K(0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(plan_iterate_rate_K(1.0, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(plan_iterate_rate_K(1.0, 1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(
      plan_iterate_rate_K(1.0, 1.0, std::numeric_limits<double>::infinity()),
      std::invalid_argument);
}

TEST_CASE("validate_plan input validation") {
  PlanReport r = plan_iterate_rate_K(1.0, 1.0, 1.0);
  REQUIRE(r.feasible);
  AuxCertificate wrong_family = r.cert;
  wrong_family.family = CertFamily::norm_k_squared;
  CHECK_THROWS_AS(
      validate_plan(r.plan, wrong_family, 1.0, 1.0, 1.0, PlanMode::iterate_k),
      std::invalid_argument);
  AuxCertificate wrong_zeta = r.cert;
  wrong_zeta.zeta = 1.0;
  CHECK_THROWS_AS(
      validate_plan(r.plan, wrong_zeta, 1.0, 1.0, 1.0, PlanMode::iterate_k),
      std::invalid_argument);
  StepPlan bad = r.plan;
  bad.tau = 0.0;
  CHECK_THROWS_AS(validate_plan(bad, r.cert, 1.0, 1.0, 1.0, PlanMode::iterate_k),
                  std::invalid_argument);
  AuxCertificate bad_eta = r.cert;
  bad_eta.eta2 = 0.0;
  CHECK_THROWS_AS(validate_plan(r.plan, bad_eta, 1.0, 1.0, 1.0, PlanMode::iterate_k),
                  std::invalid_argument);
}

TEST_CASE("planner output is deterministic") {
  const PlanReport a = plan_iterate_rate_K(1.3, 0.7, 2.1);
  const PlanReport b = plan_iterate_rate_K(1.3, 0.7, 2.1);
  CHECK(a.plan.tau == b.plan.tau);
  CHECK(a.plan.beta == b.plan.beta);
  CHECK(a.cert.eta1 == b.cert.eta1);
  CHECK(a.cert.eta2 == b.cert.eta2);
  REQUIRE(a.margins.size() == b.margins.size());
  for (size_t i = 0; i < a.margins.size(); ++i) {
    CHECK(a.margins[i].slack == b.margins[i].slack);
  }
}

TEST_CASE("random feasible draws keep every margin nonnegative") {
  std::mt19937 rng(808);
  std::uniform_real_distribution<double> mod_draw(0.1, 10.0);
  std::uniform_real_distribution<double> k_draw(0.0, 5.0);
  const PlanMode modes[] = {PlanMode::iterate_k, PlanMode::iterate_ksq,
                            PlanMode::value_k, PlanMode::value_ksq};
  for (int trial = 0; trial < 60; ++trial) {
    const double mu = mod_draw(rng);
    const double nu = mod_draw(rng);
    const double K = k_draw(rng);
    const PlanMode mode = modes[trial % 4];
    PlanReport r;
    switch (mode) {
      case PlanMode::iterate_k: r = plan_iterate_rate_K(mu, nu, K); break;
      case PlanMode::iterate_ksq: r = plan_iterate_rate_Ksq(mu, nu, K); break;
      case PlanMode::value_k: r = plan_value_rate(mu, nu, K, CertFamily::norm_k); break;
      case PlanMode::value_ksq:
        r = plan_value_rate(mu, nu, K, CertFamily::norm_k_squared);
        break;
    }
    INFO("mu ", mu, " nu ", nu, " K ", K, " mode ", plan_mode_name(mode));
    REQUIRE(r.feasible);
    REQUIRE(r.margins.size() == 20);
    for (const Margin& m : r.margins) {
      INFO("margin ", m.id, " slack ", m.slack);
      CHECK(m.pass());
    }
    CHECK(r.plan.alpha > 0.0);
    CHECK(r.plan.alpha < 1.0);
    CHECK(r.plan.xi == r.plan.alpha);
  }
}
