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

#include "admmguard/trace.h"

#include <string>

#include "admmguard/errors.h"

namespace admmguard {

const char* to_string(Termination t) {
  switch (t) {
    case Termination::kConverged: return "converged";
    case Termination::kIterationCap: return "iteration_cap";
    case Termination::kDetectorAbort: return "detector_abort";
    case Termination::kNumericalFailure: return "numerical_failure";
  }
  return "?";
}

Termination termination_from_string(const std::string& s) {
  if (s == "converged") return Termination::kConverged;
  if (s == "iteration_cap") return Termination::kIterationCap;
  if (s == "detector_abort") return Termination::kDetectorAbort;
  if (s == "numerical_failure") return Termination::kNumericalFailure;
  throw ConfigError("unknown termination '" + s + "'");
}

const TraceEntry& AdmmTrace::at(int k) const {
  if (k < 0 || k >= static_cast<int>(entries.size())) {
    throw StructuralError("trace has no iterate " + std::to_string(k));
  }
  return entries[k];
}

std::string check_trace(const AdmmTrace& trace) {
  if (!trace.problem) return "trace has no problem";
  const LinkingConstraint& link = trace.problem->link;
  for (size_t i = 0; i < trace.entries.size(); ++i) {
    const TraceEntry& e = trace.entries[i];
    const std::string at = "iterate " + std::to_string(i) + ": ";
    if (e.k != static_cast<int>(i)) return at + "index gap";
    const Vector r = primal_residual(e.x, e.z, link);
    if (r != e.r) return at + "stored r differs from Ax + Bz - c";
    if (r.norm() != e.r_norm) return at + "stored r_norm differs";
    if (i == 0) continue;
    const TraceEntry& prev = trace.entries[i - 1];
    if (prev.u + r != e.u) return at + "u does not follow the recurrence";
    const double s = trace.x_updates_first
                         ? dual_residual(e.z, prev.z, link, trace.rho).norm()
                         : dual_residual_x_second(e.x, prev.x, link, trace.rho).norm();
    if (s != e.s_norm) return at + "stored s_norm differs";
  }
  return {};
}

}  // namespace admmguard
