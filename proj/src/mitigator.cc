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

#include "admmguard/mitigator.h"

#include <string>

#include "admmguard/attacks.h"
#include "admmguard/errors.h"

namespace admmguard {

BoundCheck check_public_bounds(const Vector& x, const Box& box) {
  if (x.size() != box.dim()) throw StructuralError("bound check: dimension mismatch");
  BoundCheck out;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!(x[j] >= box.lower[j] && x[j] <= box.upper[j])) {
      out.violated.push_back(static_cast<int>(j));
    }
  }
  out.within = out.violated.empty();
  return out;
}

Box feasible_x_box(const LinkingConstraint& link, const PublicBounds& bounds) {
  if (bounds.x.dim() != link.A.cols()) {
    throw StructuralError("public x box dimension mismatch");
  }
  Box box = bounds.x;
  std::vector<LinkedInterval> rows;
  try {
    rows = reachable_intervals(link, bounds.z);
  } catch (const AttackInapplicable&) {
    throw StructuralError("projection needs selector A and B");
  }
  for (const LinkedInterval& iv : rows) {
    box.lower[iv.x_column] = std::max(box.lower[iv.x_column], iv.lower);
    box.upper[iv.x_column] = std::min(box.upper[iv.x_column], iv.upper);
  }
  for (int j = 0; j < box.dim(); ++j) {
    if (box.lower[j] > box.upper[j]) {
      throw MitigationImpossible("feasible set is empty on x coordinate " +
                                 std::to_string(j));
    }
  }
  return box;
}

Vector clamp_to_box(const Vector& x, const Box& box) {
  return x.cwiseMax(box.lower).cwiseMin(box.upper);
}

Vector project_best_response(const Vector& x_received,
                             const LinkingConstraint& link,
                             const PublicBounds& bounds) {
  if (x_received.size() != link.A.cols()) {
    throw StructuralError("projection: dimension mismatch");
  }
  return clamp_to_box(x_received, feasible_x_box(link, bounds));
}

}  // namespace admmguard
