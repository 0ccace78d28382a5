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

#include "admmguard/attacks.h"

#include <cmath>
#include <string>

#include "admmguard/admm.h"
#include "admmguard/errors.h"

namespace admmguard {

void AttackSpec::validate() const {
  if (!(magnitude > 0)) throw ConfigError("attack magnitude must be > 0");
  if (start_iteration < 1) throw ConfigError("start_iteration must be >= 1");
  if (vector == AttackVector::kObjectiveDistortion && !(scaling > 0)) {
    throw ConfigError("distortion scaling must be > 0 to stay convex");
  }
  if (vector == AttackVector::kLinkingInfeasibility && !(margin_fraction > 0)) {
    throw ConfigError("linking margin must be > 0 to leave the reachable set");
  }
}

const char* to_string(AttackVector v) {
  switch (v) {
    case AttackVector::kNoiseInjection: return "noise_injection";
    case AttackVector::kPrivateInfeasibility: return "private_infeasibility";
    case AttackVector::kLinkingInfeasibility: return "linking_infeasibility";
    case AttackVector::kObjectiveDistortion: return "objective_distortion";
  }
  return "?";
}

const char* to_string(NoiseDistribution d) {
  return d == NoiseDistribution::kBernoulliSign ? "bernoulli_sign" : "uniform";
}

const char* to_string(PrivateAttackMode m) {
  return m == PrivateAttackMode::kInsidePublic ? "inside_pub" : "outside_pub";
}

AttackVector attack_vector_from_string(const std::string& s) {
  if (s == "noise_injection" || s == "noise") return AttackVector::kNoiseInjection;
  if (s == "private_infeasibility" || s == "private")
    return AttackVector::kPrivateInfeasibility;
  if (s == "linking_infeasibility" || s == "linking")
    return AttackVector::kLinkingInfeasibility;
  if (s == "objective_distortion" || s == "distortion")
    return AttackVector::kObjectiveDistortion;
  throw ConfigError("unknown attack vector '" + s + "'");
}

NoiseDistribution noise_distribution_from_string(const std::string& s) {
  if (s == "bernoulli_sign") return NoiseDistribution::kBernoulliSign;
  if (s == "uniform") return NoiseDistribution::kUniform;
  throw ConfigError("unknown noise distribution '" + s + "'");
}

PrivateAttackMode private_mode_from_string(const std::string& s) {
  if (s == "inside_pub") return PrivateAttackMode::kInsidePublic;
  if (s == "outside_pub") return PrivateAttackMode::kOutsidePublic;
  throw ConfigError("unknown private attack mode '" + s + "'");
}

Vector noise_attack(const Vector& x_star, double magnitude,
                    NoiseDistribution distribution, RandomStream& rng) {
  Vector out(x_star.size());
  for (Eigen::Index j = 0; j < x_star.size(); ++j) {
    const double sigma = distribution == NoiseDistribution::kBernoulliSign
                             ? rng.sign()
                             : rng.uniform(-1.0, 1.0);
    out[j] = x_star[j] * (1.0 + sigma * magnitude);
  }
  return out;
}

Vector noise_attack(const Vector& x_star, const AttackSpec& spec, int k) {
  RandomStream rng(derive_seed(spec.seed, static_cast<std::uint64_t>(k)));
  return noise_attack(x_star, spec.magnitude, spec.distribution, rng);
}

std::vector<LinkedInterval> reachable_intervals(const LinkingConstraint& link,
                                                const Box& z_box) {
  const auto a_rows = as_selector(link.A);
  const auto b_rows = as_selector(link.B);
  if (!a_rows || !b_rows) {
    throw AttackInapplicable("reachable set needs selector A and B");
  }
  if (z_box.dim() != link.B.cols()) {
    throw StructuralError("z box dimension mismatch");
  }
  std::vector<LinkedInterval> out;
  for (int i = 0; i < link.p(); ++i) {
    const auto [xc, a] = (*a_rows)[i];
    const auto [zc, b] = (*b_rows)[i];
    // a x = c - b z with z in [lo, hi]
    const double e1 = (link.c[i] - b * z_box.lower[zc]) / a;
    const double e2 = (link.c[i] - b * z_box.upper[zc]) / a;
    out.push_back({i, xc, std::min(e1, e2), std::max(e1, e2)});
  }
  return out;
}

Vector linking_infeasibility_attack(const Vector& x_star,
                                    const LinkingConstraint& link,
                                    const Box& z_public, double margin_fraction,
                                    RandomStream& rng) {
  if (!(margin_fraction > 0)) {
    throw AttackInapplicable("margin must be > 0 to leave the reachable set");
  }
  Vector out = x_star;
  for (const LinkedInterval& iv : reachable_intervals(link, z_public)) {
    if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper)) {
      throw AttackInapplicable("public z bound is unbounded on linked row " +
                               std::to_string(iv.row));
    }
    const double width = iv.upper - iv.lower;
    const double margin = margin_fraction * (width > 0 ? width : 1.0);
    out[iv.x_column] = rng.sign() > 0 ? iv.upper + margin : iv.lower - margin;
  }
  return out;
}

Vector private_infeasibility_attack(const Vector& x_star, const Box& x_private,
                                    const Box& x_public,
                                    PrivateAttackMode mode) {
  if (x_private.dim() != x_star.size() || x_public.dim() != x_star.size()) {
    throw StructuralError("private attack: box dimension mismatch");
  }
  Vector out = x_star;
  bool any_gap = false;
  for (Eigen::Index j = 0; j < x_star.size(); ++j) {
    // Exit on the side with the wider gap, independent of x_star, so the
    // forged point stays put across iterations. Ties go up.
    const double up_gap = x_public.upper[j] - x_private.upper[j];
    const double down_gap = x_private.lower[j] - x_public.lower[j];
    const bool up = !(down_gap > up_gap);
    const double inner = up ? x_private.upper[j] : x_private.lower[j];
    const double outer = up ? x_public.upper[j] : x_public.lower[j];
    if (!std::isfinite(inner) || !std::isfinite(outer)) continue;
    const double gap = outer - inner;  // signed toward the exit side
    if (gap == 0) continue;
    any_gap = true;
    out[j] = mode == PrivateAttackMode::kInsidePublic ? inner + gap / 2
                                                      : outer + gap / 2;
  }
  if (!any_gap) {
    throw AttackInapplicable("private and public boxes coincide; no gap to use");
  }
  return out;
}

std::function<Vector(const Vector& z, const Vector& u)>
objective_distortion_attack(const QuadraticProblem& problem, double scaling,
                            double rho) {
  if (!(scaling > 0)) {
    throw ConfigError("distortion scaling must be > 0 to stay convex");
  }
  QuadraticProblem distorted = problem;
  distorted.P = scaling * problem.P;
  auto solver = std::make_shared<AdmmSolver>(distorted, rho);
  return [solver](const Vector& z, const Vector& u) {
    return solver->x_update(z, u);
  };
}

}  // namespace admmguard
