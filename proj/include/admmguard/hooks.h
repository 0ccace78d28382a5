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

#ifndef ADMMGUARD_HOOKS_H_
#define ADMMGUARD_HOOKS_H_

#include "admmguard/admm.h"
#include "admmguard/attacks.h"
#include "admmguard/generator.h"

namespace admmguard {

// Wraps an attack vector as an engine hook, active from spec.start_iteration.
// `bounds` may be null for attacks that do not depend on bound geometry;
// the infeasibility vectors throw AttackInapplicable without it.
AttackHook make_attack_hook(const AttackSpec& spec,
                            const QuadraticProblem& problem,
                            const BoundSets* bounds, double rho);

// Replaces every received x by its projection onto the public feasible set.
MitigatorHook make_projection_hook(const LinkingConstraint& link,
                                   const PublicBounds& bounds);

}  // namespace admmguard

#endif  // ADMMGUARD_HOOKS_H_
