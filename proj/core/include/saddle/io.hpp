// Serialization: JSON documents for problems, plans and traces, and the CSV
// trace format. All documents carry an explicit version field. Numeric CSV
// cells use %.17g so round-trips and rerun comparisons are exact.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "saddle/diagnostics.hpp"
#include "saddle/oracle.hpp"
#include "saddle/planner.hpp"
#include "saddle/problem.hpp"
#include "saddle/solver.hpp"

namespace saddle {

// Problem document: dense K (row-major nested arrays) with its norm bound,
// g/h as tagged prox-function descriptors
// ({"kind": "quadratic"|"shifted_sq"|"elastic_net"|"box_quadratic", ...}).
std::string problem_to_json(const SaddleProblem& p);
SaddleProblem problem_from_json(const std::string& text);

// Rebuilds the quadratic instance when both g and h are quadratic; empty
// otherwise. This is how checkers recover the KKT oracle from a serialized
// problem.
std::optional<QuadraticSaddleInstance> quadratic_instance_of(const SaddleProblem& p);

struct PlanDocument {
  PlanReport report;
  PlanMode mode = PlanMode::iterate_k;
};

// Plan document: all plan/certificate fields, the planner inputs, and the
// full named margin list for audit.
std::string plan_document_to_json(const PlanDocument& doc);
PlanDocument plan_document_from_json(const std::string& text);

// Trace document: header, embedded problem document, optional plan document,
// optional config echo (the normalized config that produced the run), and
// all records including full iterates.
struct TraceBundle {
  Trace trace;
  std::string problem_json;
  std::optional<PlanDocument> plan;
  std::string config_echo;
};

std::string trace_bundle_to_json(const TraceBundle& bundle);
TraceBundle trace_bundle_from_json(const std::string& text);

// CSV: first line "# saddle trace csv v1", then the fixed column row
// k,dist2_x,dist2_y,f_hat,gap_upper,gap_lower, one data row per record.
// When checks are supplied, one additional column margin_<id> per inequality
// id (ids sorted) holds that record's slack, NaN where the id has no check
// at that k.
void write_trace_csv(const Trace& trace, std::ostream& out,
                     const std::vector<BoundCheck>* checks = nullptr);
std::string trace_csv_string(const Trace& trace,
                             const std::vector<BoundCheck>* checks = nullptr);

// Column extraction for rate fitting; throws std::invalid_argument when the
// column is missing.
std::vector<double> read_csv_column(const std::string& csv_text,
                                    const std::string& column);

}  // namespace saddle
