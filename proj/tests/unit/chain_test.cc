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

#include "admmguard/chain.h"

#include <cstdlib>

#include <gtest/gtest.h>

#include "admmguard/errors.h"
#include "admmguard/generator.h"

namespace admmguard {
namespace {

ChainProblem make_chain(std::uint64_t index) {
  RandomStream rng(derive_seed(61, index));
  return generate_chain(ChainGeneratorConfig{}, rng);
}

AttackSpec attack_of(AttackVector v, std::uint64_t seed) {
  AttackSpec spec;
  spec.vector = v;
  spec.seed = seed;
  return spec;
}

// Joint optimum by eliminating the linking equalities through a null-space
// basis, independent of the library's KKT assembly.
std::vector<Vector> nullspace_optimum(const ChainProblem& chain) {
  const int N = chain.size();
  std::vector<int> off(N + 1, 0);
  for (int j = 0; j < N; ++j) off[j + 1] = off[j] + chain.nodes[j].dim();
  int rows = 0;
  for (const auto& l : chain.links) rows += l.p();
  Matrix H = Matrix::Zero(off[N], off[N]);
  Vector g(off[N]);
  for (int j = 0; j < N; ++j) {
    H.block(off[j], off[j], chain.nodes[j].dim(), chain.nodes[j].dim()) = 2 * chain.nodes[j].P;
    g.segment(off[j], chain.nodes[j].dim()) = chain.nodes[j].c;
  }
  Matrix C = Matrix::Zero(rows, off[N]);
  Vector d(rows);
  int r = 0;
  for (int i = 0; i + 1 < N; ++i) {
    const auto& l = chain.links[i];
    C.block(r, off[i], l.p(), l.A.cols()) = l.A;
    C.block(r, off[i + 1], l.p(), l.B.cols()) = l.B;
    d.segment(r, l.p()) = l.c;
    r += l.p();
  }
  Eigen::FullPivLU<Matrix> lu(C);
  const Matrix Z = lu.kernel();
  const Vector v0 = C.completeOrthogonalDecomposition().solve(d);
  const Vector w = (Z.transpose() * H * Z).ldlt().solve(-Z.transpose() * (H * v0 + g));
  const Vector v = v0 + Z * w;
  std::vector<Vector> out;
  for (int j = 0; j < N; ++j) out.push_back(v.segment(off[j], chain.nodes[j].dim()));
  return out;
}

TEST(Chain, TwoNodesReproduceAggregatorRun) {
  GeneratorConfig cfg;
  cfg.seed = 62;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const QuadraticProblem q = generate_instance(cfg, i).problem;
    const AdmmTrace agg = run_admm(q, AdmmConfig{});
    const ChainResult res = run_decentralized(two_node_chain(q), ChainConfig{});
    ASSERT_EQ(res.rounds, agg.iterations());
    EXPECT_EQ(res.termination, agg.termination);
    const AdmmTrace& zv = res.view(1, 0).trace;
    const AdmmTrace& xv = res.view(0, 1).trace;
    for (int k = 0; k <= agg.iterations(); ++k) {
      EXPECT_LE((zv.at(k).x - agg.at(k).x).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LE((zv.at(k).z - agg.at(k).z).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_EQ(zv.at(k).u, xv.at(k).u);
    }
  }
}

TEST(Chain, ThreeNodesReachJointOptimum) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const ChainProblem chain = make_chain(i);
    ChainConfig cfg;
    cfg.admm.max_iterations = 5000;
    const ChainResult res = run_decentralized(chain, cfg);
    ASSERT_TRUE(res.converged()) << "chain " << i;
    const std::vector<Vector> best = nullspace_optimum(chain);
    const std::vector<Vector> lib = chain_kkt_solution(chain);
    for (int j = 0; j < chain.size(); ++j) {
      EXPECT_LT((res.values.back()[j] - best[j]).norm(), 1e-6) << "chain " << i;
      EXPECT_LT((lib[j] - best[j]).norm(), 1e-9);
    }
  }
}

TEST(Chain, MessagesOnlyReachNeighbors) {
  const ChainProblem chain = make_chain(3);
  const ChainResult res = run_decentralized(chain, ChainConfig{});
  ASSERT_FALSE(res.messages.empty());
  for (const Message& m : res.messages) {
    EXPECT_EQ(std::abs(m.sender - m.receiver), 1);
    EXPECT_EQ(m.value, res.values[m.round][m.sender]);
  }
  // One message per link direction per round.
  EXPECT_EQ(res.messages.size(), static_cast<size_t>(res.rounds) * 4);
}

TEST(Chain, HonestChainRaisesNothing) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const ChainProblem chain = make_chain(i);
    const ChainResult res = run_decentralized(chain, ChainConfig{});
    EXPECT_TRUE(res.alarms.empty());
    for (const NodeView& v : res.views) {
      EXPECT_FALSE(node_audit(res, v.owner, v.neighbor, DetectorConfig{}).detected());
    }
  }
}

TEST(Chain, NoiseAtMiddleStallsAndFlagsBothSides) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    ChainProblem chain = make_chain(i);
    chain.nodes[1].attack = attack_of(AttackVector::kNoiseInjection, i);
    const ChainResult res = run_decentralized(chain, ChainConfig{});
    EXPECT_FALSE(res.converged());
    EXPECT_FALSE(res.node_converged[0]);
    EXPECT_FALSE(res.node_converged[2]);
    const DetectionReport left = node_audit(res, 0, 1, DetectorConfig{});
    const DetectionReport right = node_audit(res, 2, 1, DetectorConfig{});
    EXPECT_TRUE(left.detected());
    EXPECT_TRUE(right.detected());
    EXPECT_NE(left.note.find("beyond"), std::string::npos);
  }
}

TEST(Chain, LinkingAttackLocalizedByReceiver) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    ChainProblem chain = make_chain(i);
    chain.nodes[1].attack = attack_of(AttackVector::kLinkingInfeasibility, i);
    chain.nodes[1].attack_link = 1;
    const ChainResult res = run_decentralized(chain, ChainConfig{});
    ASSERT_FALSE(res.alarms.empty());
    bool targeted = false;
    for (const BoundAlarm& a : res.alarms) {
      EXPECT_EQ(a.sender, 1);
      targeted |= a.receiver == 2;
    }
    EXPECT_TRUE(targeted);
  }
}

TEST(Chain, PrivateAttackInsidePublicBoxGoesUnnoticed) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    ChainProblem chain = make_chain(i);
    chain.nodes[1].attack = attack_of(AttackVector::kPrivateInfeasibility, i);
    const SecurityAssessment s = assess_chain_security(chain, ChainConfig{}, DetectorConfig{});
    EXPECT_FALSE(s.detect);
    EXPECT_FALSE(s.localize);
    EXPECT_FALSE(s.mitigate);
    chain.nodes[1].attack->mode = PrivateAttackMode::kOutsidePublic;
    const SecurityAssessment out =
        assess_chain_security(chain, ChainConfig{}, DetectorConfig{});
    EXPECT_TRUE(out.detect);
    ASSERT_TRUE(out.blamed_node.has_value());
    EXPECT_EQ(*out.blamed_node, 1);
  }
}

TEST(Chain, DesynchronizedDualsDiverge) {
  ChainProblem chain = make_chain(4);
  chain.nodes[1].attack = attack_of(AttackVector::kNoiseInjection, 4);
  chain.nodes[1].desync_dual = true;
  const ChainResult res = run_decentralized(chain, ChainConfig{});
  const AdmmTrace& mine = res.view(1, 2).trace;
  const AdmmTrace& theirs = res.view(2, 1).trace;
  bool differ = false;
  for (int k = 1; k <= res.rounds; ++k) differ |= mine.at(k).u != theirs.at(k).u;
  EXPECT_TRUE(differ);
}

TEST(Chain, ValidationErrors) {
  ChainProblem chain = make_chain(5);
  chain.links.pop_back();
  EXPECT_THROW(chain.validate(), StructuralError);
  chain = make_chain(5);
  chain.nodes[0].attack = attack_of(AttackVector::kLinkingInfeasibility, 0);
  chain.nodes[0].attack_link = 1;
  EXPECT_THROW(chain.validate(), StructuralError);
  chain = make_chain(5);
  chain.nodes[2].P(0, 0) = -100;
  EXPECT_THROW(chain.validate(), StructuralError);
}

TEST(Chain, GeneratedBoundsNest) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const ChainProblem chain = make_chain(i);
    const std::vector<Vector> best = chain_kkt_solution(chain);
    for (int j = 0; j < chain.size(); ++j) {
      const NodeSpec& n = chain.nodes[j];
      EXPECT_TRUE(n.private_box.contains(best[j]));
      EXPECT_TRUE((n.public_box.lower.array() < n.private_box.lower.array()).all());
      EXPECT_TRUE((n.public_box.upper.array() > n.private_box.upper.array()).all());
    }
  }
}

}  // namespace
}  // namespace admmguard
