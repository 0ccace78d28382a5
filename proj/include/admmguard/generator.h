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

#ifndef ADMMGUARD_GENERATOR_H_
#define ADMMGUARD_GENERATOR_H_

#include <cstdint>

#include "admmguard/problem.h"
#include "admmguard/rng.h"

namespace admmguard {

struct GeneratorConfig {
  int maxdim = 10;
  double scale = 1.0;  // S: factor entries on [-S, S], linear costs on [-S^2, S^2]
  std::uint64_t seed = 0;
  // Draws whose P or Q has least eigenvalue below floor * S^2 are redrawn.
  // Zero keeps only the PSD tolerance check.
  double curvature_floor = 0.03;

  void validate() const;
};

struct GeneratedProblem {
  QuadraticProblem problem;
  std::uint64_t seed = 0;  // stream seed this instance was drawn from
  int retries = 0;         // draws rejected before this one
};

// L' L.
Matrix gram_matrix(const Matrix& L);

// A picks the last p coordinates of x with +1, B the first p coordinates of
// z with -1, c = 0, so the constraint reads x_last = z_first.
LinkingConstraint build_selectors(int n, int m, int p);

GeneratedProblem generate_problem(const GeneratorConfig& cfg, RandomStream& rng);

// Instance `index` of the population rooted at cfg.seed.
GeneratedProblem generate_instance(const GeneratorConfig& cfg,
                                   std::uint64_t index);

// Private and public boxes around a reference solution: the private box has
// half-width 1.5 * max(1, |sol|_inf), the public box twice that. Only linked
// coordinates are flagged public.
struct BoundSets {
  Box x_private;
  Box z_private;
  PublicBounds pub;
};

BoundSets make_bounds(const QuadraticProblem& problem, const Vector& x_star,
                      const Vector& z_star);

}  // namespace admmguard

#endif  // ADMMGUARD_GENERATOR_H_
