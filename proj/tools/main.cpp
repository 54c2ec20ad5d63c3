#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdint>
#include <exception>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"alternating proximal solver for strongly convex-concave "
               "saddle-point problems"};
  app.require_subcommand(1);

  saddle::cli::PlanArgs plan_args;
  CLI::App* plan = app.add_subcommand(
      "plan", "derive step parameters and a linear-rate certificate");
  plan->add_option("--mu", plan_args.mu, "strong convexity modulus of g")->required();
  plan->add_option("--nu", plan_args.nu, "strong convexity modulus of h")->required();
  plan->add_option("--normk", plan_args.normk, "operator norm bound of the coupling")
      ->required();
  plan->add_option("--mode", plan_args.mode,
                   "iterate-k | iterate-ksq | value-k | value-ksq")
      ->required();
  plan->add_flag("--beta-zero", plan_args.beta_zero,
                 "pin the dual extrapolation weight to zero");
  plan->add_option("--out", plan_args.out, "write the plan document JSON here");

  saddle::cli::SolveArgs solve_args;
  std::uint64_t seed_value = 0;
  CLI::App* solve = app.add_subcommand("solve", "run the solver from a config file");
  solve->add_option("--config", solve_args.config_path, "run configuration JSON")
      ->required();
  CLI::Option* seed_opt =
      solve->add_option("--seed", seed_value, "override the config seed");
  solve->add_option("--out", solve_args.out_base,
                    "output basename; writes <base>.csv and <base>.json");

  saddle::cli::CheckArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "re-validate a plan and assert certified bounds along a trace");
  check->add_option("--trace", check_args.trace_path, "trace bundle JSON")->required();
  check->add_option("--plan", check_args.plan_path,
                    "plan document to cross-check against the trace");
  check->add_option("--out", check_args.report_out, "write the report JSON here");
  check->add_option("--csv", check_args.csv_out,
                    "write the trace CSV with slack columns here");
  check->add_option("--tol", check_args.tol, "relative check tolerance");
  check->add_option("--samples", check_args.samples_per_step,
                    "random sample points per step");
  check->add_option("--sample-seed", check_args.sample_seed, "sampling seed");

  saddle::cli::RateArgs rate_args;
  double xi_value = 0.0;
  CLI::App* rate = app.add_subcommand(
      "rate", "fit an empirical linear rate from a trace column");
  rate->add_option("--trace", rate_args.trace_path, "trace bundle JSON or trace CSV")
      ->required();
  rate->add_option("--column", rate_args.column, "CSV column to fit");
  rate->add_option("--window", rate_args.window, "iteration window 'lo:hi'");
  CLI::Option* xi_opt = rate->add_option(
      "--xi", xi_value, "certified rate to compare against (default: from trace)");
  rate->add_option("--margin", rate_args.margin,
                   "allowed excess of fitted rate over the certified one");

  int rc = 0;
  plan->callback([&] { rc = saddle::cli::cmd_plan(plan_args); });
  solve->callback([&] {
    if (seed_opt->count() > 0) solve_args.seed = seed_value;
    rc = saddle::cli::cmd_solve(solve_args);
  });
  check->callback([&] { rc = saddle::cli::cmd_check(check_args); });
  rate->callback([&] {
    if (xi_opt->count() > 0) rate_args.xi = xi_value;
    rc = saddle::cli::cmd_rate(rate_args);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return rc;
}
