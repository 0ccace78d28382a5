// Copyright 2026 The AdmmGuard Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "admmguard/serialization.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "admmguard/errors.h"

namespace admmguard {
namespace {

Json selector_or_dense(const Matrix& M) {
  Json j;
  j["rows"] = M.rows();
  j["cols"] = M.cols();
  if (const auto sel = as_selector(M)) {
    Json entries = Json::array();
    for (const SelectorRow& r : *sel) {
      entries.push_back({{"column", r.column}, {"coefficient", r.coefficient}});
    }
    j["selector"] = entries;
  } else {
    j["dense"] = matrix_to_json(M);
  }
  return j;
}

Matrix selector_or_dense_from_json(const Json& j) {
  if (j.contains("dense")) return matrix_from_json(j.at("dense"));
  Matrix M = Matrix::Zero(j.at("rows").get<int>(), j.at("cols").get<int>());
  int i = 0;
  for (const Json& r : j.at("selector")) {
    const int col = r.at("column").get<int>();
    if (i >= M.rows() || col < 0 || col >= M.cols()) {
      throw StructuralError("selector entry out of range");
    }
    M(i++, col) = r.at("coefficient").get<double>();
  }
  if (i != M.rows()) throw StructuralError("selector row count mismatch");
  return M;
}

Json number_or_null(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

}  // namespace

Json vector_to_json(const Vector& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected a numeric array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
  return v;
}

Json matrix_to_json(const Matrix& M) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) j.push_back(vector_to_json(M.row(i)));
  return j;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ConfigError("expected an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols) {
      throw StructuralError("ragged matrix");
    }
    M.row(i) = vector_from_json(j[i]).transpose();
  }
  return M;
}

Json problem_to_json(const QuadraticProblem& problem,
                     std::optional<std::uint64_t> seed, int retries) {
  Json j;
  j["n"] = problem.n();
  j["m"] = problem.m();
  j["p"] = problem.p();
  j["P"] = matrix_to_json(problem.P);
  j["c"] = vector_to_json(problem.c_cost);
  j["Q"] = matrix_to_json(problem.Q);
  j["d"] = vector_to_json(problem.d_cost);
  j["A"] = selector_or_dense(problem.link.A);
  j["B"] = selector_or_dense(problem.link.B);
  j["c_link"] = vector_to_json(problem.link.c);
  if (seed) {
    j["seed"] = *seed;
    j["retries"] = retries;
  }
  return j;
}

QuadraticProblem problem_from_json(const Json& j) {
  QuadraticProblem q;
  q.P = matrix_from_json(j.at("P"));
  q.c_cost = vector_from_json(j.at("c"));
  q.Q = matrix_from_json(j.at("Q"));
  q.d_cost = vector_from_json(j.at("d"));
  q.link.A = selector_or_dense_from_json(j.at("A"));
  q.link.B = selector_or_dense_from_json(j.at("B"));
  q.link.c = vector_from_json(j.at("c_link"));
  if (j.at("n").get<int>() != q.n() || j.at("m").get<int>() != q.m() ||
      j.at("p").get<int>() != q.p()) {
    throw StructuralError("declared dimensions do not match the arrays");
  }
  validate_problem(q);
  return q;
}

Json attack_spec_to_json(const AttackSpec& s) {
  Json j;
  j["vector"] = to_string(s.vector);
  j["magnitude"] = s.magnitude;
  j["distribution"] = to_string(s.distribution);
  j["start_iteration"] = s.start_iteration;
  j["seed"] = s.seed;
  j["scaling"] = s.scaling;
  j["margin_fraction"] = s.margin_fraction;
  j["mode"] = to_string(s.mode);
  return j;
}

AttackSpec attack_spec_from_json(const Json& j) {
  AttackSpec s;
  s.vector = attack_vector_from_string(j.at("vector").get<std::string>());
  s.magnitude = j.value("magnitude", s.magnitude);
  s.distribution = noise_distribution_from_string(
      j.value("distribution", std::string(to_string(s.distribution))));
  s.start_iteration = j.value("start_iteration", s.start_iteration);
  s.seed = j.value("seed", s.seed);
  s.scaling = j.value("scaling", s.scaling);
  s.margin_fraction = j.value("margin_fraction", s.margin_fraction);
  s.mode = private_mode_from_string(j.value("mode", std::string(to_string(s.mode))));
  s.validate();
  return s;
}

Json admm_config_to_json(const AdmmConfig& c) {
  return Json{{"rho", c.rho},
              {"eps_pri", c.eps_pri},
              {"eps_dual", c.eps_dual},
              {"max_iterations", c.max_iterations},
              {"z0", c.z0},
              {"u0", c.u0}};
}

Json detector_config_to_json(const DetectorConfig& c) {
  return Json{{"detector_mode", to_string(c.mode)},
              {"psd_tolerance", c.psd_tolerance},
              {"condition_cap", number_or_null(c.condition_cap)},
              {"collinearity_threshold", c.collinearity_threshold},
              {"min_relative_separation", c.min_relative_separation},
              {"strategy", to_string(c.strategy)},
              {"custom_indices", c.custom_indices},
              {"half_window", c.half_window},
              {"cadence", to_string(c.cadence)},
              {"stop_on_detection", c.stop_on_detection}};
}

Json generator_config_to_json(const GeneratorConfig& c) {
  return Json{{"maxdim", c.maxdim},
              {"scale", c.scale},
              {"seed", c.seed},
              {"curvature_floor", c.curvature_floor}};
}

std::string trace_entry_line(const TraceEntry& e) {
  Json j;
  j["k"] = e.k;
  j["x"] = vector_to_json(e.x);
  j["z"] = vector_to_json(e.z);
  j["u"] = vector_to_json(e.u);
  j["r_norm"] = e.r_norm;
  j["s_norm"] = e.s_norm;
  j["attacked"] = e.attacked;
  j["mitigated"] = e.mitigated;
  if (e.x_received) j["x_received"] = vector_to_json(*e.x_received);
  if (e.x_honest) j["x_honest"] = vector_to_json(*e.x_honest);
  return j.dump();
}

std::string trace_to_jsonl(const AdmmTrace& trace) {
  std::string out;
  for (const TraceEntry& e : trace.entries) {
    out += trace_entry_line(e);
    out += '\n';
  }
  return out;
}

Json trace_meta(const AdmmTrace& trace) {
  Json j;
  j["rho"] = trace.rho;
  j["eps_pri"] = trace.eps_pri;
  j["eps_dual"] = trace.eps_dual;
  j["termination"] = to_string(trace.termination);
  j["iterations"] = trace.iterations();
  j["x_updates_first"] = trace.x_updates_first;
  j["attack"] = trace.attack ? attack_spec_to_json(*trace.attack) : Json(nullptr);
  j["problem"] = trace.problem ? problem_to_json(*trace.problem) : Json(nullptr);
  return j;
}

void write_trace(const AdmmTrace& trace, const std::string& path) {
  write_file(path, trace_to_jsonl(trace));
  write_file(path + ".meta.json", trace_meta(trace).dump(2) + "\n");
}

AdmmTrace trace_from_jsonl(const std::string& jsonl, const Json& meta) {
  AdmmTrace t;
  t.rho = meta.at("rho").get<double>();
  t.eps_pri = meta.value("eps_pri", 0.0);
  t.eps_dual = meta.value("eps_dual", 0.0);
  t.termination = termination_from_string(meta.at("termination").get<std::string>());
  t.x_updates_first = meta.value("x_updates_first", true);
  if (!meta.at("attack").is_null()) t.attack = attack_spec_from_json(meta.at("attack"));
  if (meta.at("problem").is_null()) throw StructuralError("trace meta has no problem");
  t.problem = std::make_shared<const QuadraticProblem>(problem_from_json(meta.at("problem")));
  std::istringstream in(jsonl);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    TraceEntry e;
    e.k = j.at("k").get<int>();
    e.x = vector_from_json(j.at("x"));
    e.z = vector_from_json(j.at("z"));
    e.u = vector_from_json(j.at("u"));
    e.r = primal_residual(e.x, e.z, t.problem->link);
    e.r_norm = j.at("r_norm").get<double>();
    e.s_norm = j.at("s_norm").get<double>();
    e.attacked = j.at("attacked").get<bool>();
    e.mitigated = j.at("mitigated").get<bool>();
    if (j.contains("x_received")) e.x_received = vector_from_json(j["x_received"]);
    if (j.contains("x_honest")) e.x_honest = vector_from_json(j["x_honest"]);
    if (e.k != static_cast<int>(t.entries.size())) {
      throw StructuralError("trace iterate indices are not contiguous");
    }
    t.entries.push_back(std::move(e));
  }
  if (t.entries.empty()) throw StructuralError("trace has no iterates");
  return t;
}

AdmmTrace read_trace(const std::string& path) {
  return trace_from_jsonl(read_file(path),
                          Json::parse(read_file(path + ".meta.json")));
}

Json detection_report_to_json(const DetectionReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["first_detection_iterate"] =
      r.first_detection ? Json(*r.first_detection) : Json(nullptr);
  j["audits_total"] = r.audits_total;
  j["audits_rejected_conditioning"] = r.rejected_conditioning;
  j["audits_rejected_collinearity"] = r.rejected_collinearity;
  j["min_lambda_seen"] = number_or_null(r.min_lambda_seen);
  j["mode"] = to_string(r.mode);
  j["unaudited_dimensions"] = r.unaudited_dimensions;
  j["note"] = r.note;
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace admmguard
