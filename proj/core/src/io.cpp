#include "saddle/io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace saddle {

namespace {

using nlohmann::json;

constexpr int kIndent = 2;

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}

// JSON has no non-finite numbers. NaN round-trips through null; infinities
// (vacuous plan margins on decoupled instances) through "inf"/"-inf".
json num_to_json(double v) {
  if (std::isnan(v)) return json(nullptr);
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

double num_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("unrecognized numeric string: " + s);
  }
  return j.get<double>();
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a JSON array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v[i] = j[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

// Empty vectors mark fields the run did not populate (iterates not stored,
// no ergodic averaging); those serialize as null, not [].
json optional_vector_to_json(const Eigen::VectorXd& v) {
  return v.size() == 0 ? json(nullptr) : vector_to_json(v);
}

Eigen::VectorXd optional_vector_from_json(const json& j) {
  return j.is_null() ? Eigen::VectorXd() : vector_from_json(j);
}

// Row-major nested arrays: one inner array per matrix row.
json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument("expected a nonempty JSON array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("matrix rows have inconsistent lengths");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      M(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return M;
}

json prox_to_json(const ProxFunction& f) {
  json j;
  j["kind"] = f.kind();
  if (const auto* q = dynamic_cast<const QuadraticFunction*>(&f)) {
    j["matrix"] = matrix_to_json(q->matrix());
    j["linear"] = vector_to_json(q->linear());
  } else if (const auto* s = dynamic_cast<const ShiftedSquaredNorm*>(&f)) {
    j["weight"] = s->weight();
    j["center"] = vector_to_json(s->center());
  } else if (const auto* e = dynamic_cast<const ElasticNet*>(&f)) {
    j["l1_weight"] = e->l1_weight();
    j["quad_weight"] = e->quad_weight();
    j["dim"] = static_cast<long long>(e->dimension());
  } else if (const auto* b = dynamic_cast<const BoxQuadratic*>(&f)) {
    j["quad_weight"] = b->quad_weight();
    j["lower"] = vector_to_json(b->lower());
    j["upper"] = vector_to_json(b->upper());
  } else {
    throw std::invalid_argument("unsupported prox function kind: " + f.kind());
  }
  return j;
}

std::shared_ptr<const ProxFunction> prox_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "quadratic") {
    return std::make_shared<QuadraticFunction>(matrix_from_json(j.at("matrix")),
                                               vector_from_json(j.at("linear")));
  }
  if (kind == "shifted_sq") {
    return std::make_shared<ShiftedSquaredNorm>(j.at("weight").get<double>(),
                                                vector_from_json(j.at("center")));
  }
  if (kind == "elastic_net") {
    return std::make_shared<ElasticNet>(
        j.at("l1_weight").get<double>(), j.at("quad_weight").get<double>(),
        static_cast<Eigen::Index>(j.at("dim").get<long long>()));
  }
  if (kind == "box_quadratic") {
    return std::make_shared<BoxQuadratic>(j.at("quad_weight").get<double>(),
                                          vector_from_json(j.at("lower")),
                                          vector_from_json(j.at("upper")));
  }
  throw std::invalid_argument("unknown prox function kind: " + kind);
}

json problem_to_json_object(const SaddleProblem& p) {
  json j;
  j["version"] = 1;
  j["coupling"]["matrix"] = matrix_to_json(p.coupling().matrix());
  j["coupling"]["norm_bound"] = p.coupling().norm_bound();
  j["g"] = prox_to_json(p.g());
  j["h"] = prox_to_json(p.h());
  return j;
}

SaddleProblem problem_from_json_object(const json& j) {
  if (j.at("version").get<int>() != 1) {
    throw std::invalid_argument("unsupported problem document version");
  }
  const json& c = j.at("coupling");
  LinearCoupling coupling(matrix_from_json(c.at("matrix")),
                          c.at("norm_bound").get<double>());
  return SaddleProblem(std::move(coupling), prox_from_json(j.at("g")),
                       prox_from_json(j.at("h")));
}

json plan_document_to_json_object(const PlanDocument& doc) {
  const PlanReport& r = doc.report;
  json j;
  j["version"] = 1;
  j["mode"] = plan_mode_name(doc.mode);
  j["inputs"]["mu"] = r.mu;
  j["inputs"]["nu"] = r.nu;
  j["inputs"]["norm_k"] = r.norm_k;
  j["plan"]["tau"] = r.plan.tau;
  j["plan"]["sigma"] = r.plan.sigma;
  j["plan"]["alpha"] = r.plan.alpha;
  j["plan"]["beta"] = r.plan.beta;
  j["plan"]["xi"] = r.plan.xi;
  j["cert"]["family"] = cert_family_name(r.cert.family);
  j["cert"]["zeta"] = r.cert.zeta;
  j["cert"]["eta1"] = r.cert.eta1;
  j["cert"]["eta2"] = r.cert.eta2;
  j["cert"]["eta3"] = r.cert.eta3;
  j["cert"]["eta4"] = r.cert.eta4;
  j["feasible"] = r.feasible;
  j["failure"] = r.failure;
  json margins = json::array();
  for (const Margin& m : r.margins) {
    json mj;
    mj["id"] = m.id;
    mj["slack"] = num_to_json(m.slack);
    mj["strict"] = m.strict;
    margins.push_back(std::move(mj));
  }
  j["margins"] = std::move(margins);
  return j;
}

PlanDocument plan_document_from_json_object(const json& j) {
  if (j.at("version").get<int>() != 1) {
    throw std::invalid_argument("unsupported plan document version");
  }
  PlanDocument doc;
  doc.mode = parse_plan_mode(j.at("mode").get<std::string>());
  PlanReport& r = doc.report;
  r.mu = j.at("inputs").at("mu").get<double>();
  r.nu = j.at("inputs").at("nu").get<double>();
  r.norm_k = j.at("inputs").at("norm_k").get<double>();
  const json& p = j.at("plan");
  r.plan.tau = p.at("tau").get<double>();
  r.plan.sigma = p.at("sigma").get<double>();
  r.plan.alpha = p.at("alpha").get<double>();
  r.plan.beta = p.at("beta").get<double>();
  r.plan.xi = p.at("xi").get<double>();
  const json& c = j.at("cert");
  r.cert.family = parse_cert_family(c.at("family").get<std::string>());
  r.cert.zeta = c.at("zeta").get<double>();
  r.cert.eta1 = c.at("eta1").get<double>();
  r.cert.eta2 = c.at("eta2").get<double>();
  r.cert.eta3 = c.at("eta3").get<double>();
  r.cert.eta4 = c.at("eta4").get<double>();
  r.feasible = j.at("feasible").get<bool>();
  r.failure = j.at("failure").get<std::string>();
  for (const json& mj : j.at("margins")) {
    Margin m;
    m.id = mj.at("id").get<std::string>();
    m.slack = num_from_json(mj.at("slack"));
    m.strict = mj.at("strict").get<bool>();
    r.margins.push_back(std::move(m));
  }
  return doc;
}

json header_to_json(const TraceHeader& h) {
  json j;
  j["version"] = h.version;
  j["n"] = static_cast<long long>(h.n);
  j["m"] = static_cast<long long>(h.m);
  j["constant_schedule"] = h.constant_schedule;
  j["tau"] = num_to_json(h.tau);
  j["sigma"] = num_to_json(h.sigma);
  j["alpha"] = num_to_json(h.alpha);
  j["beta"] = num_to_json(h.beta);
  j["xi"] = num_to_json(h.xi);
  j["norm_bound"] = num_to_json(h.norm_bound);
  j["seed"] = h.seed;
  j["has_seed"] = h.has_seed;
  j["plan_mode"] = h.plan_mode;
  j["stop_reason"] = h.stop_reason;
  return j;
}

TraceHeader header_from_json(const json& j) {
  TraceHeader h;
  h.version = j.at("version").get<int>();
  h.n = static_cast<Eigen::Index>(j.at("n").get<long long>());
  h.m = static_cast<Eigen::Index>(j.at("m").get<long long>());
  h.constant_schedule = j.at("constant_schedule").get<bool>();
  h.tau = num_from_json(j.at("tau"));
  h.sigma = num_from_json(j.at("sigma"));
  h.alpha = num_from_json(j.at("alpha"));
  h.beta = num_from_json(j.at("beta"));
  h.xi = num_from_json(j.at("xi"));
  h.norm_bound = num_from_json(j.at("norm_bound"));
  h.seed = j.at("seed").get<std::uint64_t>();
  h.has_seed = j.at("has_seed").get<bool>();
  h.plan_mode = j.at("plan_mode").get<std::string>();
  h.stop_reason = j.at("stop_reason").get<std::string>();
  return h;
}

json record_to_json(const TraceRecord& r) {
  json j;
  j["k"] = r.k;
  j["x"] = optional_vector_to_json(r.x);
  j["x_bar"] = optional_vector_to_json(r.x_bar);
  j["x_hat"] = optional_vector_to_json(r.x_hat);
  j["y"] = optional_vector_to_json(r.y);
  j["y_bar"] = optional_vector_to_json(r.y_bar);
  j["y_hat"] = optional_vector_to_json(r.y_hat);
  j["tau"] = num_to_json(r.tau);
  j["sigma"] = num_to_json(r.sigma);
  j["alpha"] = num_to_json(r.alpha);
  j["beta"] = num_to_json(r.beta);
  j["dist2_x"] = num_to_json(r.dist2_x);
  j["dist2_y"] = num_to_json(r.dist2_y);
  j["f_hat"] = num_to_json(r.f_hat);
  j["gap_upper"] = num_to_json(r.gap_upper);
  j["gap_lower"] = num_to_json(r.gap_lower);
  return j;
}

TraceRecord record_from_json(const json& j) {
  TraceRecord r;
  r.k = j.at("k").get<long>();
  r.x = optional_vector_from_json(j.at("x"));
  r.x_bar = optional_vector_from_json(j.at("x_bar"));
  r.x_hat = optional_vector_from_json(j.at("x_hat"));
  r.y = optional_vector_from_json(j.at("y"));
  r.y_bar = optional_vector_from_json(j.at("y_bar"));
  r.y_hat = optional_vector_from_json(j.at("y_hat"));
  r.tau = num_from_json(j.at("tau"));
  r.sigma = num_from_json(j.at("sigma"));
  r.alpha = num_from_json(j.at("alpha"));
  r.beta = num_from_json(j.at("beta"));
  r.dist2_x = num_from_json(j.at("dist2_x"));
  r.dist2_y = num_from_json(j.at("dist2_y"));
  r.f_hat = num_from_json(j.at("f_hat"));
  r.gap_upper = num_from_json(j.at("gap_upper"));
  r.gap_lower = num_from_json(j.at("gap_lower"));
  return r;
}

}  // namespace

std::string problem_to_json(const SaddleProblem& p) {
  return problem_to_json_object(p).dump(kIndent);
}

SaddleProblem problem_from_json(const std::string& text) {
  return problem_from_json_object(parse_document(text, "problem document"));
}

std::optional<QuadraticSaddleInstance> quadratic_instance_of(const SaddleProblem& p) {
  const auto* g = dynamic_cast<const QuadraticFunction*>(&p.g());
  const auto* h = dynamic_cast<const QuadraticFunction*>(&p.h());
  if (g == nullptr || h == nullptr) return std::nullopt;
  QuadraticSaddleInstance inst;
  inst.A = g->matrix();
  inst.a = g->linear();
  inst.B = h->matrix();
  inst.b = h->linear();
  inst.K = p.coupling().matrix();
  return inst;
}

std::string plan_document_to_json(const PlanDocument& doc) {
  return plan_document_to_json_object(doc).dump(kIndent);
}

PlanDocument plan_document_from_json(const std::string& text) {
  return plan_document_from_json_object(parse_document(text, "plan document"));
}

std::string trace_bundle_to_json(const TraceBundle& bundle) {
  json j;
  j["version"] = 1;
  j["header"] = header_to_json(bundle.trace.header);
  j["problem"] = parse_document(bundle.problem_json, "embedded problem document");
  j["plan"] = bundle.plan ? plan_document_to_json_object(*bundle.plan) : json(nullptr);
  j["config_echo"] = bundle.config_echo.empty()
                         ? json(nullptr)
                         : parse_document(bundle.config_echo, "config echo");
  json records = json::array();
  for (const TraceRecord& r : bundle.trace.records) records.push_back(record_to_json(r));
  j["records"] = std::move(records);
  return j.dump(kIndent);
}

TraceBundle trace_bundle_from_json(const std::string& text) {
  const json j = parse_document(text, "trace document");
  if (j.at("version").get<int>() != 1) {
    throw std::invalid_argument("unsupported trace document version");
  }
  TraceBundle bundle;
  bundle.trace.header = header_from_json(j.at("header"));
  bundle.problem_json = j.at("problem").dump(kIndent);
  if (!j.at("plan").is_null()) {
    bundle.plan = plan_document_from_json_object(j.at("plan"));
  }
  bundle.config_echo = j.at("config_echo").is_null() ? std::string()
                                                     : j.at("config_echo").dump(kIndent);
  for (const json& rj : j.at("records")) {
    bundle.trace.records.push_back(record_from_json(rj));
  }
  return bundle;
}

void write_trace_csv(const Trace& trace, std::ostream& out,
                     const std::vector<BoundCheck>* checks) {
  out << "# saddle trace csv v1\n";

  // Margin columns: one per inequality id, sorted; the cell at row k holds
  // the smallest slack recorded for that id at iteration k (step checks emit
  // several samples per step).
  std::vector<std::string> ids;
  std::map<std::pair<std::string, long>, double> slack;
  if (checks != nullptr) {
    std::set<std::string> idset;
    for (const BoundCheck& c : *checks) {
      idset.insert(c.id);
      const auto key = std::make_pair(c.id, c.k);
      const auto it = slack.find(key);
      if (it == slack.end() || c.slack < it->second) slack[key] = c.slack;
    }
    ids.assign(idset.begin(), idset.end());
  }

  out << "k,dist2_x,dist2_y,f_hat,gap_upper,gap_lower";
  for (const std::string& id : ids) out << ",margin_" << id;
  out << "\n";

  char buf[64];
  const auto cell = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const TraceRecord& rec : trace.records) {
    out << rec.k;
    out << ',';
    cell(rec.dist2_x);
    out << ',';
    cell(rec.dist2_y);
    out << ',';
    cell(rec.f_hat);
    out << ',';
    cell(rec.gap_upper);
    out << ',';
    cell(rec.gap_lower);
    for (const std::string& id : ids) {
      out << ',';
      const auto it = slack.find(std::make_pair(id, rec.k));
      cell(it == slack.end() ? std::numeric_limits<double>::quiet_NaN() : it->second);
    }
    out << "\n";
  }
}

std::string trace_csv_string(const Trace& trace, const std::vector<BoundCheck>* checks) {
  std::ostringstream out;
  write_trace_csv(trace, out, checks);
  return out.str();
}

std::vector<double> read_csv_column(const std::string& csv_text,
                                    const std::string& column) {
  std::istringstream in(csv_text);
  std::string line;

  const auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = s.find(',', start);
      if (pos == std::string::npos) {
        fields.push_back(s.substr(start));
        break;
      }
      fields.push_back(s.substr(start, pos - start));
      start = pos + 1;
    }
    return fields;
  };

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split(line);
    break;
  }
  if (header.empty()) throw std::invalid_argument("csv text has no header row");

  std::size_t idx = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) {
      idx = i;
      break;
    }
  }
  if (idx == header.size()) {
    throw std::invalid_argument("csv column not found: " + column);
  }

  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> fields = split(line);
    if (idx >= fields.size()) {
      throw std::invalid_argument("csv row has fewer fields than the header");
    }
    values.push_back(std::stod(fields[idx]));
  }
  return values;
}

}  // namespace saddle
