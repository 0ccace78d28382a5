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

#ifndef ADMMGUARD_MITIGATOR_H_
#define ADMMGUARD_MITIGATOR_H_

#include <vector>

#include "admmguard/problem.h"

namespace admmguard {

struct BoundCheck {
  bool within = true;
  std::vector<int> violated;  // 0-based coordinates outside the closed box
};

// Closed-interval membership per coordinate. Infinite bounds never trigger.
BoundCheck check_public_bounds(const Vector& x, const Box& box);

// X_pub intersected, on each linked coordinate, with the interval that some
// z in Z_pub can meet through the constraint. Throws MitigationImpossible
// when a coordinate's interval is empty and StructuralError for non-selector
// links.
Box feasible_x_box(const LinkingConstraint& link, const PublicBounds& bounds);

// Euclidean projection onto feasible_x_box, i.e. per-coordinate clamping.
Vector project_best_response(const Vector& x_received,
                             const LinkingConstraint& link,
                             const PublicBounds& bounds);

Vector clamp_to_box(const Vector& x, const Box& box);

}  // namespace admmguard

#endif  // ADMMGUARD_MITIGATOR_H_
