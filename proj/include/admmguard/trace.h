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

#ifndef ADMMGUARD_TRACE_H_
#define ADMMGUARD_TRACE_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "admmguard/attacks.h"
#include "admmguard/problem.h"

namespace admmguard {

enum class Termination { kConverged, kIterationCap, kDetectorAbort, kNumericalFailure };

const char* to_string(Termination t);
Termination termination_from_string(const std::string& s);

// One iterate. `x` is the value the z-side consumed (after attack and
// mitigation); `x_honest` is the true minimizer and `x_received` the value on
// the wire before any mitigation. Both are only populated when they differ
// from `x`, to keep honest traces small.
struct TraceEntry {
  int k = 0;
  Vector x;
  Vector z;
  Vector u;
  Vector r;
  double r_norm = 0;
  double s_norm = 0;
  bool attacked = false;
  bool mitigated = false;
  std::optional<Vector> x_honest;
  std::optional<Vector> x_received;
};

struct AdmmTrace {
  double rho = 1;
  double eps_pri = 0;
  double eps_dual = 0;
  // False for chain views in which the x-role node updates after the z-role
  // node within a round. Changes the dual residual and gradient recovery.
  bool x_updates_first = true;
  Termination termination = Termination::kIterationCap;
  std::vector<TraceEntry> entries;  // entries[0] is the initial state
  std::optional<AttackSpec> attack;
  std::shared_ptr<const QuadraticProblem> problem;

  int iterations() const { return static_cast<int>(entries.size()) - 1; }
  bool converged() const { return termination == Termination::kConverged; }
  const TraceEntry& at(int k) const;
  const TraceEntry& last() const { return entries.back(); }
};

// Re-derives u, r and the residual norms from x, z and the link, and checks
// index continuity. Returns an empty string when consistent, else a
// description of the first mismatch.
std::string check_trace(const AdmmTrace& trace);

}  // namespace admmguard

#endif  // ADMMGUARD_TRACE_H_
