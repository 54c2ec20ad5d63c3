// Run configuration for the solve workflow: JSON in, normalized JSON out.
// Parsing is strict (unknown fields are errors) and every diagnostic names
// the offending field.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "saddle/oracle.hpp"
#include "saddle/planner.hpp"
#include "saddle/solver.hpp"

namespace saddle::cli {

// Start point: every coordinate equal to `constant`, or explicit vectors.
struct StartSpec {
  std::optional<double> constant;
  std::optional<Eigen::VectorXd> x;
  std::optional<Eigen::VectorXd> y;
};

// Exactly one of `generator` / `inline_json` is set. The generator's seed
// field is filled from RunConfig::seed at build time; inline_json holds a
// normalized problem document.
struct ProblemSpec {
  std::optional<GeneratorSpec> generator;
  std::optional<std::string> inline_json;
};

// Exactly one of `mode` / `explicit_plan` is set. Explicit plans carry no
// certificate; xi = 0 there means "no certified rate" (disables ergodic
// averaging).
struct PlanSpec {
  std::optional<PlanMode> mode;
  bool beta_zero = false;
  std::optional<StepPlan> explicit_plan;
};

struct RunConfig {
  ProblemSpec problem;
  PlanSpec plan;
  StartSpec start;
  long max_iter = 1000;
  double displacement_tol = 1e-12;
  double distance_tol = 0.0;
  bool store_iterates = true;
  std::optional<std::uint64_t> seed;  // mandatory when the generator is used
  std::string out_csv;                // empty: do not write
  std::string out_json;
  std::string out_report;
};

// Throws std::invalid_argument naming the field on any schema violation.
RunConfig parse_run_config(const std::string& text);

// Canonical form: sorted keys, all defaulted fields explicit. Parsing the
// output reproduces the config, so normalization is idempotent.
std::string run_config_to_json(const RunConfig& cfg);

}  // namespace saddle::cli
