// Subcommand implementations behind the CLI entry point. Each returns the
// process exit code: 0 on success, 1 when the workload itself reports a
// failure (infeasible plan, failed check, rate above certification); thrown
// exceptions become exit code 2 in main.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace saddle::cli {

struct PlanArgs {
  double mu = 0.0;
  double nu = 0.0;
  double normk = 0.0;
  std::string mode;
  bool beta_zero = false;
  std::string out;  // optional plan document path
};

struct SolveArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::string out_base;               // overrides outputs: <base>.csv / <base>.json
};

struct CheckArgs {
  std::string trace_path;            // trace bundle JSON
  std::string plan_path;             // optional plan document cross-check
  std::string report_out;            // optional report JSON path
  std::string csv_out;               // optional slack-augmented CSV path
  double tol = 1e-9;
  int samples_per_step = 5;
  std::uint64_t sample_seed = 1234;
};

struct RateArgs {
  std::string trace_path;  // trace bundle JSON or trace CSV
  std::string column = "dist2_x";
  std::string window;           // "lo:hi", empty for the default window
  std::optional<double> xi;     // overrides the rate found in the trace
  double margin = 0.02;
};

int cmd_plan(const PlanArgs& args);
int cmd_solve(const SolveArgs& args);
int cmd_check(const CheckArgs& args);
int cmd_rate(const RateArgs& args);

}  // namespace saddle::cli
