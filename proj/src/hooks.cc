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

#include "admmguard/hooks.h"

#include "admmguard/mitigator.h"

namespace admmguard {

AttackHook make_attack_hook(const AttackSpec& spec,
                            const QuadraticProblem& problem,
                            const BoundSets* bounds, double rho) {
  spec.validate();
  const int start = spec.start_iteration;
  switch (spec.vector) {
    case AttackVector::kNoiseInjection:
      return [spec, start](const Vector& x, const AdmmState&,
                           int k) -> std::optional<Vector> {
        if (k < start) return std::nullopt;
        return noise_attack(x, spec, k);
      };
    case AttackVector::kLinkingInfeasibility: {
      if (!bounds) throw AttackInapplicable("linking attack needs public bounds");
      // Validate the geometry up front rather than on the first active iterate.
      RandomStream probe(spec.seed);
      linking_infeasibility_attack(Vector::Zero(problem.n()), problem.link,
                                   bounds->pub.z, spec.margin_fraction, probe);
      return [spec, start, link = problem.link, z_pub = bounds->pub.z](
                 const Vector& x, const AdmmState&,
                 int k) -> std::optional<Vector> {
        if (k < start) return std::nullopt;
        RandomStream sides(spec.seed);  // same side every iterate
        return linking_infeasibility_attack(x, link, z_pub,
                                            spec.margin_fraction, sides);
      };
    }
    case AttackVector::kPrivateInfeasibility: {
      if (!bounds) throw AttackInapplicable("private attack needs bound sets");
      private_infeasibility_attack(Vector::Zero(problem.n()), bounds->x_private,
                                   bounds->pub.x, spec.mode);
      return [spec, start, priv = bounds->x_private, pub = bounds->pub.x](
                 const Vector& x, const AdmmState&,
                 int k) -> std::optional<Vector> {
        if (k < start) return std::nullopt;
        return private_infeasibility_attack(x, priv, pub, spec.mode);
      };
    }
    case AttackVector::kObjectiveDistortion: {
      auto update = objective_distortion_attack(problem, spec.scaling, rho);
      return [update, start](const Vector&, const AdmmState& prev,
                             int k) -> std::optional<Vector> {
        if (k < start) return std::nullopt;
        return update(prev.z, prev.u);
      };
    }
  }
  return {};
}

MitigatorHook make_projection_hook(const LinkingConstraint& link,
                                   const PublicBounds& bounds) {
  const Box feasible = feasible_x_box(link, bounds);
  return [feasible](const Vector& x, int) -> std::optional<Vector> {
    return clamp_to_box(x, feasible);
  };
}

}  // namespace admmguard
