#include "commands.hpp"

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "config.hpp"
#include "saddle/diagnostics.hpp"
#include "saddle/io.hpp"
#include "saddle/oracle.hpp"
#include "saddle/planner.hpp"
#include "saddle/problem.hpp"
#include "saddle/solver.hpp"

namespace saddle::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

PlanReport make_plan(PlanMode mode, double mu, double nu, double normK,
                     bool beta_zero) {
  switch (mode) {
    case PlanMode::iterate_k:
      return plan_iterate_rate_K(mu, nu, normK, beta_zero);
    case PlanMode::iterate_ksq:
      return plan_iterate_rate_Ksq(mu, nu, normK, beta_zero);
    default:
      return plan_value_rate(mu, nu, normK, plan_mode_family(mode), beta_zero);
  }
}

void print_plan_report(const PlanReport& rep, PlanMode mode) {
  fmt::print("mode {}  mu={:.12g} nu={:.12g} normk={:.12g}\n", plan_mode_name(mode),
             rep.mu, rep.nu, rep.norm_k);
  fmt::print("plan  tau={:.12g} sigma={:.12g} alpha={:.12g} beta={:.12g} xi={:.12g}\n",
             rep.plan.tau, rep.plan.sigma, rep.plan.alpha, rep.plan.beta, rep.plan.xi);
  fmt::print("cert  family={} zeta={:g} eta1={:.12g} eta2={:.12g} eta3={:.12g} "
             "eta4={:.12g}\n",
             cert_family_name(rep.cert.family), rep.cert.zeta, rep.cert.eta1,
             rep.cert.eta2, rep.cert.eta3, rep.cert.eta4);
  fmt::print("{:<22} {:>14} {:>7} {:>5}\n", "inequality", "slack", "strict", "pass");
  for (const Margin& m : rep.margins) {
    fmt::print("{:<22} {:>14.6g} {:>7} {:>5}\n", m.id, m.slack, m.strict ? "yes" : "no",
               m.pass() ? "yes" : "no");
  }
}

struct BuiltRun {
  SaddleProblem problem;
  std::optional<SaddlePointCertificate> oracle;
  StepPlan plan;
  std::optional<PlanDocument> plan_doc;
};

BuiltRun build_run(const RunConfig& cfg) {
  std::optional<GeneratedInstance> gen;
  std::optional<SaddleProblem> problem;
  if (cfg.problem.generator) {
    GeneratorSpec spec = *cfg.problem.generator;
    spec.seed = *cfg.seed;
    gen = generate_instance(spec);
    problem = gen->problem;
  } else {
    problem = problem_from_json(*cfg.problem.inline_json);
  }

  std::optional<SaddlePointCertificate> oracle;
  if (gen) {
    oracle = solve_quadratic_saddle(gen->quadratic);
  } else if (const auto qi = quadratic_instance_of(*problem)) {
    oracle = solve_quadratic_saddle(*qi);
  }

  StepPlan plan;
  std::optional<PlanDocument> plan_doc;
  if (cfg.plan.mode) {
    PlanReport rep = make_plan(*cfg.plan.mode, problem->mu(), problem->nu(),
                               problem->coupling().norm_bound(), cfg.plan.beta_zero);
    if (!rep.feasible) {
      throw std::runtime_error("infeasible plan: inequality '" + rep.failure +
                               "' cannot be satisfied for this instance");
    }
    plan = rep.plan;
    plan_doc = PlanDocument{std::move(rep), *cfg.plan.mode};
  } else {
    plan = *cfg.plan.explicit_plan;
  }
  return BuiltRun{std::move(*problem), std::move(oracle), plan, std::move(plan_doc)};
}

void resolve_start(const StartSpec& start, Eigen::Index n, Eigen::Index m,
                   PrimalVector& x0, DualVector& y0) {
  if (start.constant) {
    x0 = PrimalVector::Constant(n, *start.constant);
    y0 = DualVector::Constant(m, *start.constant);
    return;
  }
  if (start.x->size() != n || start.y->size() != m) {
    throw std::invalid_argument(
        fmt::format("config field 'start': dimensions ({}, {}) do not match the "
                    "problem ({}, {})",
                    start.x->size(), start.y->size(), n, m));
  }
  x0 = *start.x;
  y0 = *start.y;
}

struct CheckSummaryRow {
  long count = 0;
  long fails = 0;
  double min_slack = std::numeric_limits<double>::infinity();
};

std::map<std::string, CheckSummaryRow> summarize(const std::vector<BoundCheck>& checks) {
  std::map<std::string, CheckSummaryRow> rows;
  for (const BoundCheck& c : checks) {
    CheckSummaryRow& row = rows[c.id];
    ++row.count;
    if (!c.pass) ++row.fails;
    row.min_slack = std::min(row.min_slack, c.slack);
  }
  return rows;
}

}  // namespace

int cmd_plan(const PlanArgs& args) {
  const PlanMode mode = parse_plan_mode(args.mode);
  const PlanReport rep = make_plan(mode, args.mu, args.nu, args.normk, args.beta_zero);
  print_plan_report(rep, mode);
  if (!args.out.empty()) {
    write_file(args.out, plan_document_to_json(PlanDocument{rep, mode}));
    fmt::print("wrote {}\n", args.out);
  }
  if (!rep.feasible) {
    fmt::print(stderr, "infeasible plan: inequality '{}' cannot be satisfied\n",
               rep.failure);
    return 1;
  }
  return 0;
}

int cmd_solve(const SolveArgs& args) {
  RunConfig cfg = parse_run_config(read_file(args.config_path));
  if (args.seed) cfg.seed = *args.seed;
  if (!args.out_base.empty()) {
    cfg.out_csv = args.out_base + ".csv";
    cfg.out_json = args.out_base + ".json";
  }
  if (cfg.problem.generator && !cfg.seed) {
    throw std::invalid_argument(
        "config field 'seed': required when the problem comes from the generator");
  }

  BuiltRun built = build_run(cfg);
  PrimalVector x0;
  DualVector y0;
  resolve_start(cfg.start, built.problem.primal_dim(), built.problem.dual_dim(), x0, y0);

  StoppingRule stop;
  stop.max_iter = cfg.max_iter;
  stop.displacement_tol = cfg.displacement_tol;
  stop.distance_tol = cfg.distance_tol;
  TraceOptions options;
  options.store_iterates = cfg.store_iterates;
  if (built.oracle) options.oracle = &*built.oracle;

  Trace trace = run(built.problem, built.plan, x0, y0, stop, options);
  if (cfg.seed) {
    trace.header.seed = *cfg.seed;
    trace.header.has_seed = true;
  }
  if (built.plan_doc) trace.header.plan_mode = plan_mode_name(built.plan_doc->mode);

  fmt::print("instance n={} m={} mu={:.6g} nu={:.6g} normk={:.6g}\n",
             built.problem.primal_dim(), built.problem.dual_dim(), built.problem.mu(),
             built.problem.nu(), built.problem.coupling().norm_bound());
  fmt::print("plan tau={:.6g} sigma={:.6g} alpha={:.6g} beta={:.6g} xi={:.6g}\n",
             built.plan.tau, built.plan.sigma, built.plan.alpha, built.plan.beta,
             built.plan.xi);
  const TraceRecord& last = trace.records.back();
  fmt::print("run {} iterations, stop={}\n", last.k, trace.header.stop_reason);
  if (built.oracle) {
    fmt::print("final dist2_x={:.6g} dist2_y={:.6g}\n", last.dist2_x, last.dist2_y);
  }

  if (!cfg.out_csv.empty()) {
    write_file(cfg.out_csv, trace_csv_string(trace));
    fmt::print("wrote {}\n", cfg.out_csv);
  }
  if (!cfg.out_json.empty()) {
    TraceBundle bundle;
    bundle.trace = std::move(trace);
    bundle.problem_json = problem_to_json(built.problem);
    bundle.plan = built.plan_doc;
    bundle.config_echo = run_config_to_json(cfg);
    write_file(cfg.out_json, trace_bundle_to_json(bundle));
    fmt::print("wrote {}\n", cfg.out_json);
  }
  return 0;
}

int cmd_check(const CheckArgs& args) {
  TraceBundle bundle = trace_bundle_from_json(read_file(args.trace_path));
  std::optional<PlanDocument> doc = bundle.plan;
  if (!args.plan_path.empty()) {
    PlanDocument external = plan_document_from_json(read_file(args.plan_path));
    if (doc) {
      const StepPlan& a = doc->report.plan;
      const StepPlan& b = external.report.plan;
      if (doc->mode != external.mode || a.tau != b.tau || a.sigma != b.sigma ||
          a.alpha != b.alpha || a.beta != b.beta || a.xi != b.xi) {
        throw std::invalid_argument(
            "plan document does not match the plan embedded in the trace");
      }
    }
    doc = std::move(external);
  }
  if (!doc) {
    throw std::invalid_argument("trace bundle carries no plan; pass one with --plan");
  }
  const StepPlan& plan = doc->report.plan;
  const TraceHeader& header = bundle.trace.header;
  if (!header.constant_schedule || header.tau != plan.tau ||
      header.sigma != plan.sigma || header.alpha != plan.alpha ||
      header.beta != plan.beta) {
    throw std::invalid_argument(
        "trace header parameters do not match the plan document");
  }
  if (bundle.trace.records.empty()) {
    throw std::invalid_argument("trace has no records");
  }

  SaddleProblem problem = problem_from_json(bundle.problem_json);
  const auto qi = quadratic_instance_of(problem);
  if (!qi) {
    throw std::invalid_argument(
        "check needs a closed-form saddle point, so the instance must be quadratic");
  }
  const SaddlePointCertificate oracle = solve_quadratic_saddle(*qi);

  const std::vector<Margin> margins =
      validate_plan(plan, doc->report.cert, problem.mu(), problem.nu(),
                    problem.coupling().norm_bound(), doc->mode);
  long margin_fails = 0;
  for (const Margin& m : margins) {
    if (!m.pass()) ++margin_fails;
  }

  const bool value_mode = plan_mode_zeta(doc->mode) == 1.0;
  std::vector<BoundCheck> checks;
  double initial_bracket = 0.0;
  double empirical_m_upper = 0.0;
  double empirical_m_lower = 0.0;
  if (value_mode) {
    const TraceRecord& first = bundle.trace.records.front();
    if (first.x.size() == 0) {
      throw std::invalid_argument("value checks need stored iterates in the trace");
    }
    const InitialBracket br = make_initial_bracket(plan, oracle, first.x, first.y);
    checks = check_value_bound(bundle.trace, plan, oracle, oracle.f_star, br, args.tol);
    // The per-ergodic-index bracket constants; their sup over k is the
    // smallest single constant the bound could quote.
    for (std::size_t j = 1; j < bundle.trace.records.size(); ++j) {
      const TraceRecord& rec = bundle.trace.records[j];
      empirical_m_upper =
          std::max(empirical_m_upper,
                   br.primal + (rec.y_hat - first.y).squaredNorm() / (2.0 * plan.sigma));
      empirical_m_lower =
          std::max(empirical_m_lower,
                   br.dual + (rec.x_hat - first.x).squaredNorm() / (2.0 * plan.tau));
    }
  } else {
    checks = check_iterate_bound(bundle.trace, plan, doc->report.cert, oracle, args.tol);
    initial_bracket = checks.front().lhs;  // xi^0 * B0 at the first record
  }

  StepCheckOptions sopt;
  sopt.anchor = &oracle;
  sopt.tol = args.tol;
  sopt.samples_per_step = args.samples_per_step;
  sopt.seed = args.sample_seed;
  int skipped = 0;
  sopt.skipped_samples = &skipped;
  const std::vector<BoundCheck> step_checks =
      check_step_inequalities(bundle.trace, problem, sopt);
  checks.insert(checks.end(), step_checks.begin(), step_checks.end());

  const auto rows = summarize(checks);
  long check_fails = 0;
  for (const auto& [id, row] : rows) check_fails += row.fails;
  const bool pass = margin_fails == 0 && check_fails == 0;

  fmt::print("trace: {} records, mode {}\n", bundle.trace.records.size(),
             plan_mode_name(doc->mode));
  fmt::print("plan margins: {}/{} pass\n", margins.size() - margin_fails,
             margins.size());
  for (const Margin& m : margins) {
    if (!m.pass()) fmt::print("  failed margin {} (slack {:.6g})\n", m.id, m.slack);
  }
  fmt::print("{:<26} {:>7} {:>7} {:>14}\n", "check", "count", "fails", "min slack");
  for (const auto& [id, row] : rows) {
    fmt::print("{:<26} {:>7} {:>7} {:>14.6g}\n", id, row.count, row.fails,
               row.min_slack);
  }
  if (skipped > 0) fmt::print("skipped {} out-of-domain sample points\n", skipped);
  fmt::print("{}\n", pass ? "PASS" : "FAIL");

  json report;
  report["version"] = 1;
  report["mode"] = plan_mode_name(doc->mode);
  report["pass"] = pass;
  json mj = json::array();
  for (const Margin& m : margins) {
    mj.push_back({{"id", m.id}, {"slack", m.slack}, {"strict", m.strict},
                  {"pass", m.pass()}});
  }
  report["margins"] = std::move(mj);
  json cj = json::array();
  for (const auto& [id, row] : rows) {
    cj.push_back({{"id", id},
                  {"count", row.count},
                  {"fails", row.fails},
                  {"min_slack", row.min_slack}});
  }
  report["checks"] = std::move(cj);
  report["skipped_samples"] = skipped;
  if (value_mode) {
    report["empirical_M"] = {{"upper", empirical_m_upper}, {"lower", empirical_m_lower}};
  } else {
    report["initial_bracket"] = initial_bracket;
  }
  if (!args.report_out.empty()) {
    write_file(args.report_out, report.dump(2));
    fmt::print("wrote {}\n", args.report_out);
  }
  if (!args.csv_out.empty()) {
    write_file(args.csv_out, trace_csv_string(bundle.trace, &checks));
    fmt::print("wrote {}\n", args.csv_out);
  }
  return pass ? 0 : 1;
}

int cmd_rate(const RateArgs& args) {
  const std::string text = read_file(args.trace_path);
  std::optional<double> xi = args.xi;
  std::string csv;
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const TraceBundle bundle = trace_bundle_from_json(text);
    csv = trace_csv_string(bundle.trace);
    if (!xi && std::isfinite(bundle.trace.header.xi)) xi = bundle.trace.header.xi;
  } else {
    csv = text;
  }

  const std::vector<double> series = read_csv_column(csv, args.column);
  RateFit fit;
  if (args.window.empty()) {
    fit = fit_rate(series);
  } else {
    long lo = 0, hi = 0;
    if (std::sscanf(args.window.c_str(), "%ld:%ld", &lo, &hi) != 2) {
      throw std::invalid_argument("--window expects 'lo:hi'");
    }
    fit = fit_rate(series, lo, hi);
  }

  fmt::print("column {}: fitted_rate={:.12g} residual={:.6g} window=[{}, {}] "
             "points={}\n",
             args.column, fit.fitted_rate, fit.residual, fit.window_lo, fit.window_hi,
             fit.points_used);
  if (xi) {
    fmt::print("certified rate xi={:.12g}, margin {:.3g}\n", *xi, args.margin);
    if (fit.fitted_rate > *xi + args.margin) {
      fmt::print(stderr, "fitted rate {:.6g} exceeds certified xi {:.6g} + {:.3g}\n",
                 fit.fitted_rate, *xi, args.margin);
      return 1;
    }
  }
  return 0;
}

}  // namespace saddle::cli
