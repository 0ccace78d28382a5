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

#ifndef ADMMGUARD_SERIALIZATION_H_
#define ADMMGUARD_SERIALIZATION_H_

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "admmguard/admm.h"
#include "admmguard/attacks.h"
#include "admmguard/detector.h"
#include "admmguard/generator.h"
#include "admmguard/problem.h"
#include "admmguard/trace.h"

namespace admmguard {

using Json = nlohmann::ordered_json;

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json matrix_to_json(const Matrix& M);  // array of rows
Matrix matrix_from_json(const Json& j);

// Dimensions, dense P/Q/c/d, selector descriptors for A and B (dense
// arrays when they are not selectors) and optional seed provenance.
Json problem_to_json(const QuadraticProblem& problem,
                     std::optional<std::uint64_t> seed = std::nullopt,
                     int retries = 0);
QuadraticProblem problem_from_json(const Json& j);

Json attack_spec_to_json(const AttackSpec& spec);
AttackSpec attack_spec_from_json(const Json& j);

Json admm_config_to_json(const AdmmConfig& cfg);
Json detector_config_to_json(const DetectorConfig& cfg);
Json generator_config_to_json(const GeneratorConfig& cfg);

// One iterate per line, fields in the order
// k, x, z, u, r_norm, s_norm, attacked, mitigated, [x_received], [x_honest].
std::string trace_entry_line(const TraceEntry& e);
std::string trace_to_jsonl(const AdmmTrace& trace);

// Everything a reader needs besides the iterates: rho, thresholds,
// termination, update order, attack spec and the problem.
Json trace_meta(const AdmmTrace& trace);

// Writes `path` (JSONL) and `path`.meta.json.
void write_trace(const AdmmTrace& trace, const std::string& path);
AdmmTrace read_trace(const std::string& path);
AdmmTrace trace_from_jsonl(const std::string& jsonl, const Json& meta);

// verdict, first_detection_iterate, audits_total,
// audits_rejected_conditioning, audits_rejected_collinearity,
// min_lambda_seen (null when no audit was accepted), then mode and notes.
Json detection_report_to_json(const DetectionReport& report);

std::string read_file(const std::string& path);
// Throws std::runtime_error naming the path when it cannot be written.
void write_file(const std::string& path, const std::string& content);

}  // namespace admmguard

#endif  // ADMMGUARD_SERIALIZATION_H_
