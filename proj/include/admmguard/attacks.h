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

#ifndef ADMMGUARD_ATTACKS_H_
#define ADMMGUARD_ATTACKS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "admmguard/problem.h"
#include "admmguard/rng.h"

namespace admmguard {

enum class AttackVector {
  kNoiseInjection,
  kPrivateInfeasibility,
  kLinkingInfeasibility,
  kObjectiveDistortion,
};

enum class NoiseDistribution { kBernoulliSign, kUniform };

enum class PrivateAttackMode { kInsidePublic, kOutsidePublic };

struct AttackSpec {
  AttackVector vector = AttackVector::kNoiseInjection;
  double magnitude = 0.10;
  NoiseDistribution distribution = NoiseDistribution::kBernoulliSign;
  int start_iteration = 1;
  std::uint64_t seed = 0;
  double scaling = 4.0;          // objective distortion: P -> scaling * P
  double margin_fraction = 0.1;  // linking infeasibility: exit margin / width
  PrivateAttackMode mode = PrivateAttackMode::kInsidePublic;

  void validate() const;
};

const char* to_string(AttackVector v);
const char* to_string(NoiseDistribution d);
const char* to_string(PrivateAttackMode m);
AttackVector attack_vector_from_string(const std::string& s);
NoiseDistribution noise_distribution_from_string(const std::string& s);
PrivateAttackMode private_mode_from_string(const std::string& s);

// x_j * (1 + sigma_j * magnitude), sigma_j fair +-1 (Bernoulli) or uniform on
// [-1, 1], drawn independently per entry.
Vector noise_attack(const Vector& x_star, double magnitude,
                    NoiseDistribution distribution, RandomStream& rng);

// Iterate-k form: the stream is derived from (spec.seed, k), so the draw for
// a given iterate is fixed regardless of what ran before.
Vector noise_attack(const Vector& x_star, const AttackSpec& spec, int k);

// Interval of x-values on one linked coordinate for which some z in the box
// satisfies the constraint row.
struct LinkedInterval {
  int row;
  int x_column;
  double lower;
  double upper;
};

// One interval per constraint row, from the z-side box. Requires selector
// A and B; throws AttackInapplicable otherwise.
std::vector<LinkedInterval> reachable_intervals(const LinkingConstraint& link,
                                                const Box& z_box);

// Moves every linked coordinate outside its reachable interval by
// margin_fraction of the interval width (at least margin_fraction when the
// interval is a point). The side per row is drawn from `rng`.
Vector linking_infeasibility_attack(const Vector& x_star,
                                    const LinkingConstraint& link,
                                    const Box& z_public, double margin_fraction,
                                    RandomStream& rng);

// Pushes every coordinate past its private bound on the side with the wider
// private-public gap (upper on ties). Inside mode lands halfway between the
// private and public bound, outside mode lands beyond the public bound by
// half the gap.
Vector private_infeasibility_attack(const Vector& x_star, const Box& x_private,
                                    const Box& x_public, PrivateAttackMode mode);

// x-update of the distorted objective x'(scaling P)x + c'x, evaluated
// against the state the honest update would have seen.
std::function<Vector(const Vector& z, const Vector& u)>
objective_distortion_attack(const QuadraticProblem& problem, double scaling,
                            double rho);

}  // namespace admmguard

#endif  // ADMMGUARD_ATTACKS_H_
