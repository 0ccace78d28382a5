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

#include <array>

#include <gtest/gtest.h>

#include "admmguard/errors.h"

namespace admmguard {
namespace {

TEST(GramMatrix, HandMultipliedExample) {
  Matrix L(2, 2);
  L << 1, 2, 3, 4;
  Matrix expected(2, 2);
  expected << 10, 14, 14, 20;
  EXPECT_EQ(gram_matrix(L), expected);
  // trace 30, det 4: both roots of t^2 - 30t + 4 are positive
  EXPECT_GT(min_eigenvalue(gram_matrix(L)), 0);
}

TEST(BuildSelectors, SmallestCase) {
  const LinkingConstraint l = build_selectors(1, 1, 1);
  EXPECT_EQ(l.A.rows(), 1);
  EXPECT_EQ(std::abs(l.A(0, 0)), 1.0);
  EXPECT_EQ(std::abs(l.B(0, 0)), 1.0);
  EXPECT_EQ(l.c, Vector::Zero(1));
}

TEST(BuildSelectors, PicksTrailingXAndLeadingZ) {
  const LinkingConstraint l = build_selectors(3, 2, 2);
  Matrix A(2, 3), B(2, 2);
  A << 0, 1, 0, 0, 0, 1;
  B << -1, 0, 0, -1;
  EXPECT_EQ(l.A, A);
  EXPECT_EQ(l.B, B);
}

TEST(BuildSelectors, RejectsTooManyLinks) {
  EXPECT_THROW(build_selectors(2, 3, 3), StructuralError);
  EXPECT_THROW(build_selectors(2, 2, 0), StructuralError);
}

TEST(Generator, MaxdimOneForcesScalars) {
  GeneratorConfig cfg;
  cfg.maxdim = 1;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const QuadraticProblem q = generate_instance(cfg, i).problem;
    EXPECT_EQ(q.n(), 1);
    EXPECT_EQ(q.m(), 1);
    EXPECT_EQ(q.p(), 1);
  }
}

TEST(Generator, SameSeedSameProblem) {
  GeneratorConfig cfg;
  cfg.seed = 99;
  const GeneratedProblem a = generate_instance(cfg, 5);
  const GeneratedProblem b = generate_instance(cfg, 5);
  EXPECT_EQ(a.problem.P, b.problem.P);
  EXPECT_EQ(a.problem.Q, b.problem.Q);
  EXPECT_EQ(a.problem.c_cost, b.problem.c_cost);
  EXPECT_EQ(a.problem.d_cost, b.problem.d_cost);
  EXPECT_EQ(a.problem.link.A, b.problem.link.A);
  EXPECT_EQ(a.problem.link.B, b.problem.link.B);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(a.retries, b.retries);
  EXPECT_NE(generate_instance(cfg, 6).problem.c_cost, a.problem.c_cost);
}

TEST(Generator, StructureOnSeedSweep) {
  GeneratorConfig cfg;
  cfg.scale = 2.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const QuadraticProblem q = generate_instance(cfg, i).problem;
    ASSERT_NO_THROW(validate_problem(q));
    ASSERT_TRUE(is_psd(q.P));
    ASSERT_TRUE(is_psd(q.Q));
    ASSERT_GE(min_eigenvalue(q.P), cfg.curvature_floor * 4 - 1e-12);
    ASSERT_LE(q.p(), std::min(q.n(), q.m()));
    ASSERT_TRUE(as_selector(q.link.A).has_value());
    ASSERT_TRUE(as_selector(q.link.B).has_value());
    ASSERT_EQ(q.link.c, Vector::Zero(q.p()));
    ASSERT_LE(q.c_cost.cwiseAbs().maxCoeff(), 4.0);
    ASSERT_LE(q.d_cost.cwiseAbs().maxCoeff(), 4.0);
  }
}

TEST(Generator, DimensionFrequencies) {
  GeneratorConfig cfg;
  cfg.seed = 12;
  std::array<int, 11> count{};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++count[generate_instance(cfg, i).problem.n()];
  for (int n = 1; n <= 10; ++n) {
    EXPECT_NEAR(count[n] / double(draws), 0.1, 0.02) << "n = " << n;
  }
}

TEST(Generator, ZeroFloorKeepsFirstPsdDraw) {
  GeneratorConfig cfg;
  cfg.curvature_floor = 0;
  int retries = 0;
  for (std::uint64_t i = 0; i < 200; ++i) retries += generate_instance(cfg, i).retries;
  EXPECT_EQ(retries, 0);
}

TEST(Generator, RejectsBadConfig) {
  GeneratorConfig cfg;
  cfg.maxdim = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.maxdim = 3;
  cfg.scale = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(MakeBounds, PrivateInsidePublicAndHoldsOptimum) {
  GeneratorConfig cfg;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const QuadraticProblem q = generate_instance(cfg, i).problem;
    const Vector x = Vector::LinSpaced(q.n(), -1, 2);
    const Vector z = Vector::LinSpaced(q.m(), 0.5, -3);
    const BoundSets b = make_bounds(q, x, z);
    EXPECT_TRUE(b.x_private.contains(x));
    EXPECT_TRUE(b.z_private.contains(z));
    for (int j = 0; j < q.n(); ++j) {
      EXPECT_LT(b.pub.x.lower[j], b.x_private.lower[j]);
      EXPECT_GT(b.pub.x.upper[j], b.x_private.upper[j]);
    }
  }
}

}  // namespace
}  // namespace admmguard
