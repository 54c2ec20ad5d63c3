#include "config.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <vector>

namespace saddle::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::invalid_argument("config field '" + field + "': " + what);
}

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> known) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(where.empty() ? item.key() : where + "." + item.key(), "unknown field");
  }
}

double as_double(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  return j.get<double>();
}

long as_long(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<long>();
}

bool as_bool(const json& j, const std::string& field) {
  if (!j.is_boolean()) fail(field, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd as_vector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field, "expected a nonempty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(field, "expected a nonempty array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

ProblemSpec parse_problem(const json& j) {
  if (!j.is_object()) fail("problem", "expected an object");
  reject_unknown(j, "problem", {"generator", "inline"});
  const bool has_gen = j.contains("generator");
  const bool has_inline = j.contains("inline");
  if (has_gen == has_inline) {
    fail("problem", "exactly one of 'generator' and 'inline' is required");
  }
  ProblemSpec spec;
  if (has_gen) {
    const json& g = j["generator"];
    if (!g.is_object()) fail("problem.generator", "expected an object");
    reject_unknown(g, "problem.generator", {"n", "m", "mu", "nu", "norm_k"});
    GeneratorSpec gen;
    if (!g.contains("n") || !g.contains("m")) {
      fail("problem.generator", "'n' and 'm' are required");
    }
    gen.n = static_cast<Eigen::Index>(as_long(g["n"], "problem.generator.n"));
    gen.m = static_cast<Eigen::Index>(as_long(g["m"], "problem.generator.m"));
    if (g.contains("mu")) gen.mu = as_double(g["mu"], "problem.generator.mu");
    if (g.contains("nu")) gen.nu = as_double(g["nu"], "problem.generator.nu");
    if (g.contains("norm_k")) {
      gen.norm_k = as_double(g["norm_k"], "problem.generator.norm_k");
    }
    spec.generator = gen;
  } else {
    const json& doc = j["inline"];
    if (!doc.is_object()) fail("problem.inline", "expected a problem document object");
    spec.inline_json = doc.dump(2);
  }
  return spec;
}

PlanSpec parse_plan(const json& j) {
  if (!j.is_object()) fail("plan", "expected an object");
  reject_unknown(j, "plan", {"mode", "beta_zero", "explicit"});
  const bool has_mode = j.contains("mode");
  const bool has_explicit = j.contains("explicit");
  if (has_mode == has_explicit) {
    fail("plan", "exactly one of 'mode' and 'explicit' is required");
  }
  PlanSpec spec;
  if (j.contains("beta_zero")) {
    spec.beta_zero = as_bool(j["beta_zero"], "plan.beta_zero");
  }
  if (has_mode) {
    try {
      spec.mode = parse_plan_mode(as_string(j["mode"], "plan.mode"));
    } catch (const std::invalid_argument& e) {
      fail("plan.mode", e.what());
    }
  } else {
    const json& e = j["explicit"];
    if (!e.is_object()) fail("plan.explicit", "expected an object");
    reject_unknown(e, "plan.explicit", {"tau", "sigma", "alpha", "beta", "xi"});
    StepPlan plan;
    for (const char* req : {"tau", "sigma", "alpha", "beta"}) {
      if (!e.contains(req)) fail(std::string("plan.explicit.") + req, "required");
    }
    plan.tau = as_double(e["tau"], "plan.explicit.tau");
    plan.sigma = as_double(e["sigma"], "plan.explicit.sigma");
    plan.alpha = as_double(e["alpha"], "plan.explicit.alpha");
    plan.beta = as_double(e["beta"], "plan.explicit.beta");
    if (e.contains("xi")) plan.xi = as_double(e["xi"], "plan.explicit.xi");
    spec.explicit_plan = plan;
  }
  return spec;
}

StartSpec parse_start(const json& j) {
  if (!j.is_object()) fail("start", "expected an object");
  reject_unknown(j, "start", {"constant", "x", "y"});
  StartSpec spec;
  const bool has_const = j.contains("constant");
  const bool has_x = j.contains("x");
  const bool has_y = j.contains("y");
  if (has_const) {
    if (has_x || has_y) fail("start", "'constant' excludes explicit 'x'/'y'");
    spec.constant = as_double(j["constant"], "start.constant");
  } else if (has_x && has_y) {
    spec.x = as_vector(j["x"], "start.x");
    spec.y = as_vector(j["y"], "start.y");
  } else {
    fail("start", "give 'constant', or both 'x' and 'y'");
  }
  return spec;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");
  reject_unknown(j, "",
                 {"version", "problem", "plan", "start", "max_iter", "displacement_tol",
                  "distance_tol", "store_iterates", "seed", "outputs"});
  if (j.contains("version") && as_long(j["version"], "version") != 1) {
    fail("version", "unsupported value");
  }

  RunConfig cfg;
  if (!j.contains("problem")) fail("problem", "required");
  cfg.problem = parse_problem(j["problem"]);
  if (!j.contains("plan")) fail("plan", "required");
  cfg.plan = parse_plan(j["plan"]);
  cfg.start.constant = 0.0;
  if (j.contains("start")) cfg.start = parse_start(j["start"]);

  if (j.contains("max_iter")) {
    cfg.max_iter = as_long(j["max_iter"], "max_iter");
    if (cfg.max_iter < 0) fail("max_iter", "must be >= 0");
  }
  if (j.contains("displacement_tol")) {
    cfg.displacement_tol = as_double(j["displacement_tol"], "displacement_tol");
    if (cfg.displacement_tol < 0) fail("displacement_tol", "must be >= 0");
  }
  if (j.contains("distance_tol")) {
    cfg.distance_tol = as_double(j["distance_tol"], "distance_tol");
    if (cfg.distance_tol < 0) fail("distance_tol", "must be >= 0");
  }
  if (j.contains("store_iterates")) {
    cfg.store_iterates = as_bool(j["store_iterates"], "store_iterates");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      fail("seed", "expected a nonnegative integer");
    }
    const auto s = j["seed"].get<long long>();
    if (s < 0) fail("seed", "expected a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (cfg.problem.generator && !cfg.seed) {
    fail("seed", "required when the problem comes from the generator");
  }
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_object()) fail("outputs", "expected an object");
    reject_unknown(o, "outputs", {"trace_csv", "trace_json", "report"});
    if (o.contains("trace_csv")) cfg.out_csv = as_string(o["trace_csv"], "outputs.trace_csv");
    if (o.contains("trace_json")) {
      cfg.out_json = as_string(o["trace_json"], "outputs.trace_json");
    }
    if (o.contains("report")) cfg.out_report = as_string(o["report"], "outputs.report");
  }
  return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["version"] = 1;
  if (cfg.problem.generator) {
    const GeneratorSpec& g = *cfg.problem.generator;
    json gj;
    gj["n"] = static_cast<long long>(g.n);
    gj["m"] = static_cast<long long>(g.m);
    gj["mu"] = g.mu;
    gj["nu"] = g.nu;
    gj["norm_k"] = g.norm_k;
    j["problem"]["generator"] = std::move(gj);
  } else {
    j["problem"]["inline"] = json::parse(*cfg.problem.inline_json);
  }
  if (cfg.plan.mode) {
    j["plan"]["mode"] = plan_mode_name(*cfg.plan.mode);
    j["plan"]["beta_zero"] = cfg.plan.beta_zero;
  } else {
    const StepPlan& p = *cfg.plan.explicit_plan;
    j["plan"]["explicit"] = {{"tau", p.tau},
                             {"sigma", p.sigma},
                             {"alpha", p.alpha},
                             {"beta", p.beta},
                             {"xi", p.xi}};
  }
  if (cfg.start.constant) {
    j["start"]["constant"] = *cfg.start.constant;
  } else {
    j["start"]["x"] = vector_to_json(*cfg.start.x);
    j["start"]["y"] = vector_to_json(*cfg.start.y);
  }
  j["max_iter"] = cfg.max_iter;
  j["displacement_tol"] = cfg.displacement_tol;
  j["distance_tol"] = cfg.distance_tol;
  j["store_iterates"] = cfg.store_iterates;
  if (cfg.seed) j["seed"] = *cfg.seed;
  json outputs = json::object();
  if (!cfg.out_csv.empty()) outputs["trace_csv"] = cfg.out_csv;
  if (!cfg.out_json.empty()) outputs["trace_json"] = cfg.out_json;
  if (!cfg.out_report.empty()) outputs["report"] = cfg.out_report;
  if (!outputs.empty()) j["outputs"] = std::move(outputs);
  return j.dump(2);
}

}  // namespace saddle::cli
