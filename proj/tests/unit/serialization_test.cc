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

#include "admmguard/serialization.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "admmguard/errors.h"
#include "admmguard/generator.h"
#include "admmguard/hooks.h"

namespace admmguard {
namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "admmguard_serialization_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Serialization, ProblemRoundTripIsExact) {
  GeneratorConfig cfg;
  cfg.seed = 71;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const GeneratedProblem g = generate_instance(cfg, i);
    const Json j = problem_to_json(g.problem, g.seed, g.retries);
    const QuadraticProblem back = problem_from_json(Json::parse(j.dump()));
    EXPECT_EQ(back.P, g.problem.P);
    EXPECT_EQ(back.Q, g.problem.Q);
    EXPECT_EQ(back.c_cost, g.problem.c_cost);
    EXPECT_EQ(back.d_cost, g.problem.d_cost);
    EXPECT_EQ(back.link.A, g.problem.link.A);
    EXPECT_EQ(back.link.B, g.problem.link.B);
    EXPECT_EQ(back.link.c, g.problem.link.c);
  }
}

TEST(Serialization, DenseLinkSurvives) {
  QuadraticProblem q{Matrix::Identity(2, 2), Vector::Ones(2), Matrix::Identity(1, 1),
                     Vector::Zero(1),
                     {Matrix::Constant(1, 2, 0.5), Matrix::Constant(1, 1, -2),
                      Vector::Constant(1, 0.25)}};
  const QuadraticProblem back = problem_from_json(problem_to_json(q));
  EXPECT_EQ(back.link.A, q.link.A);
  EXPECT_EQ(back.link.B, q.link.B);
  EXPECT_EQ(back.link.c, q.link.c);
}

TEST(Serialization, MalformedProblemRejected) {
  GeneratorConfig cfg;
  Json j = problem_to_json(generate_instance(cfg, 0).problem);
  j["P"] = Json::array({Json::array({1.0, 2.0})});
  EXPECT_ANY_THROW(problem_from_json(j));
}

TEST(Serialization, TraceRoundTripPreservesEverything) {
  GeneratorConfig cfg;
  cfg.seed = 72;
  const QuadraticProblem q = generate_instance(cfg, 3).problem;
  const CentralSolution c = central_solution(q);
  const BoundSets b = make_bounds(q, c.x, c.z);
  AttackSpec spec;
  spec.vector = AttackVector::kLinkingInfeasibility;
  AdmmHooks hooks;
  hooks.attack = make_attack_hook(spec, q, &b, 1.0);
  hooks.mitigator = make_projection_hook(q.link, b.pub);
  AdmmConfig admm;
  admm.max_iterations = 40;
  AdmmTrace t = run_admm(q, admm, hooks);
  t.attack = spec;

  const auto path = scratch("trace.jsonl").string();
  write_trace(t, path);
  ASSERT_TRUE(std::filesystem::exists(path + ".meta.json"));
  const AdmmTrace back = read_trace(path);
  EXPECT_EQ(back.termination, t.termination);
  EXPECT_EQ(back.rho, t.rho);
  EXPECT_EQ(back.eps_pri, t.eps_pri);
  ASSERT_EQ(back.iterations(), t.iterations());
  ASSERT_TRUE(back.attack.has_value());
  EXPECT_EQ(back.attack->vector, spec.vector);
  for (int k = 0; k <= t.iterations(); ++k) {
    EXPECT_EQ(back.at(k).x, t.at(k).x);
    EXPECT_EQ(back.at(k).z, t.at(k).z);
    EXPECT_EQ(back.at(k).u, t.at(k).u);
    EXPECT_EQ(back.at(k).r_norm, t.at(k).r_norm);
    EXPECT_EQ(back.at(k).s_norm, t.at(k).s_norm);
    EXPECT_EQ(back.at(k).attacked, t.at(k).attacked);
    EXPECT_EQ(back.at(k).mitigated, t.at(k).mitigated);
    EXPECT_EQ(back.at(k).x_received.has_value(), t.at(k).x_received.has_value());
  }
  EXPECT_EQ(check_trace(back), "");
}

TEST(Serialization, TraceLineFieldOrder) {
  TraceEntry e;
  e.k = 2;
  e.x = Vector::Ones(1);
  e.z = Vector::Zero(1);
  e.u = Vector::Zero(1);
  e.r_norm = 0.5;
  e.s_norm = 0.25;
  e.attacked = true;
  e.x_honest = Vector::Zero(1);
  const Json j = Json::parse(trace_entry_line(e));
  std::vector<std::string> keys;
  for (const auto& [key, value] : j.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"k", "x", "z", "u", "r_norm", "s_norm",
                                            "attacked", "mitigated", "x_honest"}));
}

TEST(Serialization, ReportFields) {
  DetectionReport r;
  r.verdict = Verdict::kNoAttackDetected;
  r.audits_total = 3;
  const Json j = detection_report_to_json(r);
  EXPECT_EQ(j["verdict"], "no_attack_detected");
  EXPECT_TRUE(j["first_detection_iterate"].is_null());
  EXPECT_TRUE(j["min_lambda_seen"].is_null());
  EXPECT_EQ(j["audits_total"], 3);
}

TEST(Serialization, AttackSpecRoundTrip) {
  AttackSpec spec;
  spec.vector = AttackVector::kPrivateInfeasibility;
  spec.mode = PrivateAttackMode::kOutsidePublic;
  spec.magnitude = 0.2;
  spec.seed = 123456789012345ULL;
  const AttackSpec back = attack_spec_from_json(attack_spec_to_json(spec));
  EXPECT_EQ(back.vector, spec.vector);
  EXPECT_EQ(back.mode, spec.mode);
  EXPECT_EQ(back.magnitude, spec.magnitude);
  EXPECT_EQ(back.seed, spec.seed);
}

TEST(Serialization, UnwritablePathNamed) {
  try {
    write_file("/nonexistent_dir_for_test/x.txt", "x");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent_dir_for_test/x.txt"),
              std::string::npos);
  }
}

}  // namespace
}  // namespace admmguard
