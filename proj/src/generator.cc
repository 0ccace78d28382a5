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

#include "admmguard/generator.h"

#include <string>

#include "admmguard/errors.h"

namespace admmguard {
namespace {

Matrix uniform_matrix(RandomStream& rng, int rows, int cols, double bound) {
  Matrix M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) M(i, j) = rng.uniform(-bound, bound);
  return M;
}

Vector uniform_vector(RandomStream& rng, int size, double bound) {
  Vector v(size);
  for (int i = 0; i < size; ++i) v[i] = rng.uniform(-bound, bound);
  return v;
}

bool curvature_ok(const Matrix& M, double floor) {
  if (floor <= 0) return is_psd(M);
  return min_eigenvalue(M) >= floor;
}

}  // namespace

void GeneratorConfig::validate() const {
  if (maxdim < 1) throw ConfigError("maxdim must be >= 1");
  if (!(scale > 0)) throw ConfigError("scale must be > 0");
  if (!(curvature_floor >= 0)) throw ConfigError("curvature_floor must be >= 0");
}

Matrix gram_matrix(const Matrix& L) {
  Matrix G = L.transpose() * L;
  // The product is symmetric in exact arithmetic; make it so bitwise.
  return 0.5 * (G + G.transpose());
}

LinkingConstraint build_selectors(int n, int m, int p) {
  if (n < 1 || m < 1 || p < 1 || p > std::min(n, m)) {
    throw StructuralError("build_selectors: need 1 <= p <= min(n, m), got n=" +
                          std::to_string(n) + " m=" + std::to_string(m) +
                          " p=" + std::to_string(p));
  }
  LinkingConstraint link{Matrix::Zero(p, n), Matrix::Zero(p, m),
                         Vector::Zero(p)};
  for (int i = 0; i < p; ++i) {
    link.A(i, n - p + i) = 1.0;
    link.B(i, i) = -1.0;
  }
  return link;
}

GeneratedProblem generate_problem(const GeneratorConfig& cfg,
                                  RandomStream& rng) {
  cfg.validate();
  const double S = cfg.scale;
  const double floor = cfg.curvature_floor * S * S;
  GeneratedProblem out;
  QuadraticProblem& q = out.problem;
  // Dimensions are drawn once; only the factors are redrawn, otherwise the
  // floor would bias n and m toward small sizes.
  const int n = static_cast<int>(rng.uniform_int(1, cfg.maxdim));
  const int m = static_cast<int>(rng.uniform_int(1, cfg.maxdim));
  const int p = static_cast<int>(rng.uniform_int(1, std::min(n, m)));
  for (;;) {
    q.P = gram_matrix(uniform_matrix(rng, n, n, S));
    q.Q = gram_matrix(uniform_matrix(rng, m, m, S));
    if (curvature_ok(q.P, floor) && curvature_ok(q.Q, floor)) break;
    ++out.retries;
  }
  q.c_cost = uniform_vector(rng, n, S * S);
  q.d_cost = uniform_vector(rng, m, S * S);
  q.link = build_selectors(n, m, p);
  validate_problem(out.problem);
  return out;
}

GeneratedProblem generate_instance(const GeneratorConfig& cfg,
                                   std::uint64_t index) {
  const std::uint64_t seed = derive_seed(cfg.seed, index);
  RandomStream rng(seed);
  GeneratedProblem g = generate_problem(cfg, rng);
  g.seed = seed;
  return g;
}

BoundSets make_bounds(const QuadraticProblem& problem, const Vector& x_star,
                      const Vector& z_star) {
  const double extent = std::max(
      {1.0, x_star.cwiseAbs().maxCoeff(), z_star.cwiseAbs().maxCoeff()});
  const double r_private = 1.5 * extent;
  BoundSets b;
  b.x_private = Box::symmetric(problem.n(), r_private);
  b.z_private = Box::symmetric(problem.m(), r_private);
  b.pub.x = Box::symmetric(problem.n(), 2 * r_private);
  b.pub.z = Box::symmetric(problem.m(), 2 * r_private);
  b.pub.x_public.assign(problem.n(), false);
  b.pub.z_public.assign(problem.m(), false);
  for (Eigen::Index i = 0; i < problem.link.A.rows(); ++i) {
    for (Eigen::Index j = 0; j < problem.link.A.cols(); ++j)
      if (problem.link.A(i, j) != 0) b.pub.x_public[j] = true;
    for (Eigen::Index j = 0; j < problem.link.B.cols(); ++j)
      if (problem.link.B(i, j) != 0) b.pub.z_public[j] = true;
  }
  return b;
}

}  // namespace admmguard
