#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "saddle/io.hpp"

using namespace saddle;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::VectorXd scalar(double v) {
  Eigen::VectorXd x(1);
  x[0] = v;
  return x;
}

SaddleProblem catalog_problem() {
  Eigen::MatrixXd K(2, 3);
  K << 0.5, -1.25, 2.0, 0.0, 0.75, -0.125;
  auto g = std::make_shared<ElasticNet>(0.3, 1.2, 3);
  Eigen::VectorXd lo(2), hi(2);
  lo << -1.0, -2.0;
  hi << 1.5, 0.25;
  auto h = std::make_shared<BoxQuadratic>(0.7, lo, hi);
  return SaddleProblem(LinearCoupling(K, 2.625), g, h);
}

SaddleProblem quadratic_problem() {
  Eigen::MatrixXd A(2, 2);
  A << 2.0, 0.5, 0.5, 1.0;
  Eigen::VectorXd a(2);
  a << -1.0, 0.25;
  Eigen::MatrixXd B(1, 1);
  B << 1.5;
  Eigen::VectorXd b(1);
  b << 0.75;
  Eigen::MatrixXd K(1, 2);
  K << 1.0, -0.5;
  auto g = std::make_shared<QuadraticFunction>(A, a);
  auto h = std::make_shared<QuadraticFunction>(B, b);
  return SaddleProblem(LinearCoupling(K, 1.25), g, h);
}

Trace tiny_trace() {
  Trace trace;
  trace.header.n = 1;
  trace.header.m = 1;
  trace.header.constant_schedule = true;
  trace.header.tau = trace.header.sigma = 0.5;
  trace.header.alpha = trace.header.beta = 0.25;
  trace.header.xi = 0.25;
  trace.header.norm_bound = 1.0;
  trace.header.stop_reason = "max_iter";
  for (int k = 0; k < 3; ++k) {
    TraceRecord rec;
    rec.k = k;
    rec.tau = rec.sigma = 0.5;
    rec.alpha = rec.beta = 0.25;
    rec.x = scalar(1.0 / (k + 1));
    rec.y = scalar(-2.0 / (k + 1));
    rec.x_bar = rec.x;
    rec.y_bar = rec.y;
    rec.dist2_x = 0.04 * std::pow(0.25, k);
    rec.dist2_y = 0.01 * std::pow(0.25, k);
    rec.f_hat = k == 0 ? kNaN : 1.0 + 1.0 / k;
    rec.gap_upper = k == 0 ? kNaN : 2.0 / k;
    rec.gap_lower = k == 0 ? kNaN : 0.5 / k;
    if (k > 0) {
      rec.x_hat = scalar(0.5);
      rec.y_hat = scalar(-0.5);
    }
    trace.records.push_back(rec);
  }
  return trace;
}

}  // namespace

TEST_CASE("problem documents round trip the full catalog exactly") {
  for (const SaddleProblem& p : {catalog_problem(), quadratic_problem()}) {
    const std::string text = problem_to_json(p);
    const SaddleProblem q = problem_from_json(text);
    CHECK((p.coupling().matrix() - q.coupling().matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(p.coupling().norm_bound() == q.coupling().norm_bound());
    CHECK(p.g().kind() == q.g().kind());
    CHECK(p.h().kind() == q.h().kind());
    CHECK(p.mu() == q.mu());
    CHECK(p.nu() == q.nu());
    // Serialization is canonical: dumping the parsed problem reproduces the
    // original text byte for byte.
    CHECK(problem_to_json(q) == text);
  }
}

TEST_CASE("catalog parameters survive the problem round trip") {
  const SaddleProblem q = problem_from_json(problem_to_json(catalog_problem()));
  const auto* en = dynamic_cast<const ElasticNet*>(&q.g());
  REQUIRE(en != nullptr);
  CHECK(en->l1_weight() == 0.3);
  CHECK(en->quad_weight() == 1.2);
  CHECK(en->dimension() == 3);
  const auto* box = dynamic_cast<const BoxQuadratic*>(&q.h());
  REQUIRE(box != nullptr);
  CHECK(box->quad_weight() == 0.7);
  CHECK(box->lower()[1] == -2.0);
  CHECK(box->upper()[1] == 0.25);
}

TEST_CASE("problem document parsing rejects malformed input") {
  CHECK_THROWS_AS(problem_from_json("{oops"), std::invalid_argument);
  CHECK_THROWS_AS(problem_from_json(R"({"version": 2})"), std::invalid_argument);
  CHECK_THROWS_AS(problem_from_json(R"({
    "version": 1,
    "coupling": {"matrix": [[1.0]], "norm_bound": 1.0},
    "g": {"kind": "mystery"},
    "h": {"kind": "shifted_sq", "weight": 1.0, "center": [0.0]}
  })"),
                  std::invalid_argument);
}

TEST_CASE("quadratic instance recovery requires quadratic g and h") {
  const auto inst = quadratic_instance_of(quadratic_problem());
  REQUIRE(inst.has_value());
  CHECK(inst->A(0, 1) == 0.5);
  CHECK(inst->a[0] == -1.0);
  CHECK(inst->K(0, 1) == -0.5);
  CHECK_FALSE(quadratic_instance_of(catalog_problem()).has_value());
  // shifted_sq is algebraically quadratic but carries a constant offset the
  // quadratic form would silently drop, so it is not recovered either.
  LinearCoupling K(Eigen::MatrixXd::Identity(1, 1), 1.0);
  auto sq = std::make_shared<ShiftedSquaredNorm>(1.0, scalar(0.5));
  CHECK_FALSE(quadratic_instance_of(SaddleProblem(K, sq, sq)).has_value());
}

TEST_CASE("plan documents round trip every field exactly") {
  PlanDocument doc;
  doc.mode = PlanMode::iterate_k;
  doc.report = plan_iterate_rate_K(1.3, 0.7, 2.1);
  REQUIRE(doc.report.feasible);

  const std::string text = plan_document_to_json(doc);
  const PlanDocument back = plan_document_from_json(text);
  CHECK(back.mode == doc.mode);
  CHECK(back.report.mu == doc.report.mu);
  CHECK(back.report.nu == doc.report.nu);
  CHECK(back.report.norm_k == doc.report.norm_k);
  CHECK(back.report.plan.tau == doc.report.plan.tau);
  CHECK(back.report.plan.sigma == doc.report.plan.sigma);
  CHECK(back.report.plan.alpha == doc.report.plan.alpha);
  CHECK(back.report.plan.beta == doc.report.plan.beta);
  CHECK(back.report.plan.xi == doc.report.plan.xi);
  CHECK(back.report.cert.zeta == doc.report.cert.zeta);
  CHECK(back.report.cert.family == doc.report.cert.family);
  CHECK(back.report.cert.eta1 == doc.report.cert.eta1);
  CHECK(back.report.cert.eta2 == doc.report.cert.eta2);
  CHECK(back.report.cert.eta3 == doc.report.cert.eta3);
  CHECK(back.report.cert.eta4 == doc.report.cert.eta4);
  CHECK(back.report.feasible == doc.report.feasible);
  REQUIRE(back.report.margins.size() == doc.report.margins.size());
  for (size_t i = 0; i < doc.report.margins.size(); ++i) {
    CHECK(back.report.margins[i].id == doc.report.margins[i].id);
    CHECK(back.report.margins[i].slack == doc.report.margins[i].slack);
    CHECK(back.report.margins[i].strict == doc.report.margins[i].strict);
  }
  CHECK(plan_document_to_json(back) == text);
}

TEST_CASE("non-finite margin slacks survive the plan round trip") {
  PlanDocument doc;
  doc.mode = PlanMode::value_ksq;
  doc.report = plan_value_rate(1.0, 1.0, 0.0, CertFamily::norm_k_squared);
  REQUIRE(doc.report.margins.size() >= 3);
  doc.report.margins[0].slack = kInf;
  doc.report.margins[1].slack = -kInf;
  doc.report.margins[2].slack = kNaN;

  const PlanDocument back = plan_document_from_json(plan_document_to_json(doc));
  CHECK(back.report.margins[0].slack == kInf);
  CHECK(back.report.margins[1].slack == -kInf);
  CHECK(std::isnan(back.report.margins[2].slack));
}

TEST_CASE("trace bundles are byte-stable through a parse/dump cycle") {
  TraceBundle bundle;
  bundle.trace = tiny_trace();
  bundle.problem_json = problem_to_json(quadratic_problem());
  PlanDocument plan;
  plan.mode = PlanMode::iterate_k;
  plan.report = plan_iterate_rate_K(1.0, 1.0, 1.0);
  bundle.plan = plan;
  bundle.config_echo = R"({"version": 1, "note": "echo"})";

  const std::string s1 = trace_bundle_to_json(bundle);
  const TraceBundle b2 = trace_bundle_from_json(s1);
  const std::string s2 = trace_bundle_to_json(b2);
  CHECK(s1 == s2);

  REQUIRE(b2.trace.records.size() == 3);
  CHECK(b2.trace.header.stop_reason == "max_iter");
  CHECK(b2.trace.header.xi == 0.25);
  CHECK(b2.trace.records[1].x[0] == 0.5);
  CHECK(std::isnan(b2.trace.records[0].f_hat));
  REQUIRE(b2.plan.has_value());
  CHECK(b2.plan->report.plan.tau == plan.report.plan.tau);
  CHECK_FALSE(b2.config_echo.empty());
}

TEST_CASE("bundles without plan or config echo round trip as null") {
  TraceBundle bundle;
  bundle.trace = tiny_trace();
  bundle.problem_json = problem_to_json(catalog_problem());
  const std::string text = trace_bundle_to_json(bundle);
  const TraceBundle back = trace_bundle_from_json(text);
  CHECK_FALSE(back.plan.has_value());
  CHECK(back.config_echo.empty());
  CHECK(trace_bundle_to_json(back) == text);
}

TEST_CASE("csv starts with the version line and round trips numbers exactly") {
  const Trace trace = tiny_trace();
  const std::string csv = trace_csv_string(trace);
  CHECK(csv.rfind("# saddle trace csv v1\n", 0) == 0);
  CHECK(csv.find("k,dist2_x,dist2_y,f_hat,gap_upper,gap_lower\n") != std::string::npos);

  const std::vector<double> ks = read_csv_column(csv, "k");
  REQUIRE(ks.size() == 3);
  CHECK(ks[2] == 2.0);
  const std::vector<double> dx = read_csv_column(csv, "dist2_x");
  for (size_t i = 0; i < dx.size(); ++i) {
    CHECK(dx[i] == trace.records[i].dist2_x);  // %.17g is exact for doubles
  }
  const std::vector<double> fh = read_csv_column(csv, "f_hat");
  CHECK(std::isnan(fh[0]));
  CHECK(fh[1] == trace.records[1].f_hat);

  CHECK_THROWS_AS(read_csv_column(csv, "no_such_column"), std::invalid_argument);
  CHECK_THROWS_AS(read_csv_column("# only a comment\n", "k"), std::invalid_argument);
}

TEST_CASE("margin columns are sorted and aggregate the worst slack per step") {
  Trace trace = tiny_trace();
  std::vector<BoundCheck> checks;
  BoundCheck c;
  c.id = "zeta_check";
  c.k = 0;
  c.slack = 5.0;
  checks.push_back(c);
  c.slack = 2.0;  // same id and k: the smaller slack must win
  checks.push_back(c);
  c.k = 1;
  c.slack = 7.0;
  checks.push_back(c);
  c.id = "alpha_check";
  c.k = 0;
  c.slack = -1.0;
  checks.push_back(c);

  const std::string csv = trace_csv_string(trace, &checks);
  CHECK(csv.find("gap_lower,margin_alpha_check,margin_zeta_check\n") !=
        std::string::npos);
  const std::vector<double> zeta = read_csv_column(csv, "margin_zeta_check");
  REQUIRE(zeta.size() == 3);
  CHECK(zeta[0] == 2.0);
  CHECK(zeta[1] == 7.0);
  CHECK(std::isnan(zeta[2]));  // no check at k = 2
  const std::vector<double> alpha = read_csv_column(csv, "margin_alpha_check");
  CHECK(alpha[0] == -1.0);
  CHECK(std::isnan(alpha[1]));
}
