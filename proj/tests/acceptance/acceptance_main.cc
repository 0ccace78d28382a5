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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. `--only N` runs a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "admmguard/admm.h"
#include "admmguard/batch.h"
#include "admmguard/chain.h"
#include "admmguard/detector.h"
#include "admmguard/generator.h"
#include "admmguard/hooks.h"
#include "admmguard/mitigator.h"

namespace {

using namespace admmguard;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GeneratorConfig population(std::uint64_t seed) {
  GeneratorConfig g;
  g.seed = seed;
  return g;
}

// Equality-constrained KKT solve, independent of the elimination used by
// central_solution.
Vector kkt_optimum(const QuadraticProblem& q) {
  const int n = q.n(), m = q.m(), p = q.p();
  Matrix K = Matrix::Zero(n + m + p, n + m + p);
  K.topLeftCorner(n, n) = 2 * q.P;
  K.block(n, n, m, m) = 2 * q.Q;
  K.block(n + m, 0, p, n) = q.link.A;
  K.block(n + m, n, p, m) = q.link.B;
  K.block(0, n + m, n, p) = q.link.A.transpose();
  K.block(n, n + m, m, p) = q.link.B.transpose();
  Vector rhs(n + m + p);
  rhs << -q.c_cost, -q.d_cost, q.link.c;
  return K.fullPivLu().solve(rhs).head(n + m);
}

// Hessian of phi(y) = min { x'Px + c'x : Ax = y } for a selector A.
Matrix effective_hessian(const QuadraticProblem& q) {
  const Matrix inv = (2 * q.P).inverse();
  return (q.link.A * inv * q.link.A.transpose()).inverse();
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const AdmmConfig cfg;
  double worst = 0, worst_kkt = 0;
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const QuadraticProblem q = generate_instance(population(101), i).problem;
    const AdmmTrace t = run_admm(q, cfg);
    const CentralSolution c = central_solution(q);
    Vector ours(q.n() + q.m()), ref(q.n() + q.m());
    ours << t.last().x, t.last().z;
    ref << c.x, c.z;
    const double d = (ours - ref).norm();
    worst = std::max(worst, d);
    worst_kkt = std::max(worst_kkt, (ref - kkt_optimum(q)).norm());
    if (!t.converged() || d > 10 * cfg.eps_pri) ++failures;
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && worst_kkt < 1e-9 && secs < 30,
          fmt("100 problems, worst |ADMM - central| = %.3g (limit %.1g), "
              "central vs KKT %.3g, %.1f s",
              worst, 10 * cfg.eps_pri, worst_kkt, secs)};
}

std::vector<int> honest_iterations;

Outcome criterion2() {
  const AdmmConfig cfg;
  honest_iterations.clear();
  int unconverged = 0;
  for (int i = 0; i < 1000; ++i) {
    const QuadraticProblem q = generate_instance(population(202), i).problem;
    const AdmmTrace t = run_admm(q, cfg);
    if (!t.converged() || t.iterations() > 300) ++unconverged;
    honest_iterations.push_back(t.iterations());
  }
  std::vector<int> s = honest_iterations;
  std::sort(s.begin(), s.end());
  const double median = 0.5 * (s[499] + s[500]);
  return {unconverged == 0 && median >= 30 && median <= 120,
          fmt("1000 problems, %.0f not converged within 300, median %.1f, max %.0f",
              unconverged, median, s.back())};
}

Outcome criterion3() {
  const AdmmConfig cfg;
  int stuck = 0;
  for (int i = 0; i < 1000; ++i) {
    const QuadraticProblem q = generate_instance(population(202), i).problem;
    AttackSpec spec;
    spec.seed = derive_seed(7, i);
    AdmmHooks hooks;
    hooks.attack = make_attack_hook(spec, q, nullptr, cfg.rho);
    if (!run_admm(q, cfg, hooks).converged()) ++stuck;
  }
  return {stuck >= 800, fmt("%.0f / 1000 attacked runs did not converge in 500 "
                            "iterations (floor 800)", stuck)};
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  BatchConfig cfg = BatchConfig::confusion_study();
  cfg.generator.seed = 303;
  const BatchResults r = run_batch(cfg);
  const double secs = seconds_since(t0);
  const double tpr = static_cast<double>(r.attacked.detected) / r.attacked.total();
  const double fpr = static_cast<double>(r.unattacked.detected) / r.unattacked.total();
  return {r.attacked.total() == 500 && r.unattacked.total() == 500 && tpr >= 0.90 &&
              r.unattacked.detected == 0 && secs < 600,
          fmt("detected %.0f/500 attacked (rate %.3f), %.0f/500 unattacked "
              "(rate %.3f), ", r.attacked.detected, tpr, r.unattacked.detected, fpr) +
              fmt("%.1f s", secs)};
}

Outcome criterion5() {
  double worst = 0;
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    const QuadraticProblem q = generate_instance(population(505), i).problem;
    const AdmmTrace t = run_admm(q, AdmmConfig{});
    for (int k = 2; k <= t.iterations(); ++k) {
      const GradientSample g = recover_gradient(t, k, DetectorMode::kFull);
      const Vector exact = 2 * q.P * t.at(k).x + q.c_cost;
      worst = std::max(worst, (g.gradient - exact).lpNorm<Eigen::Infinity>());
      ++checked;
    }
  }
  return {worst <= 1e-8 && checked > 0,
          fmt("%.0f audited iterates over 50 runs, worst inf-norm error %.3g",
              checked, worst)};
}

Outcome criterion6() {
  DetectorConfig cfg;
  cfg.stop_on_detection = false;
  double worst = 0, lowest_margin = INFINITY;
  int accepted = 0, bad = 0;
  for (int i = 0; i < 200; ++i) {
    const QuadraticProblem q = generate_instance(population(606), i).problem;
    const AdmmTrace t = run_admm(q, AdmmConfig{});
    const Matrix ref = effective_hessian(q);
    const DetectionReport rep = detect(t, cfg);
    for (const AuditRecord& a : rep.audits) {
      if (!a.estimate) continue;
      ++accepted;
      const double err = (a.estimate->H - ref).norm() / ref.norm();
      const double tau = cfg.psd_tolerance * std::max(1.0, a.estimate->H.norm());
      worst = std::max(worst, err);
      lowest_margin = std::min(lowest_margin, a.estimate->lambda_min + tau);
      if (err > 1e-4 || a.estimate->lambda_min < -tau) ++bad;
    }
  }
  // Full mode on problems where every x coordinate is linked, so the
  // reference is 2P itself.
  DetectorConfig full = cfg;
  full.mode = DetectorMode::kFull;
  double worst_full = 0;
  int accepted_full = 0, runs_full = 0;
  for (int i = 0; runs_full < 50 && i < 5000; ++i) {
    const QuadraticProblem q = generate_instance(population(616), i).problem;
    if (q.n() != q.p()) continue;
    ++runs_full;
    const Matrix ref = 2 * q.P;
    for (const AuditRecord& a : detect(run_admm(q, AdmmConfig{}), full).audits) {
      if (!a.estimate) continue;
      ++accepted_full;
      const double err = (a.estimate->H - ref).norm() / ref.norm();
      const double tau = full.psd_tolerance * std::max(1.0, a.estimate->H.norm());
      worst_full = std::max(worst_full, err);
      if (err > 1e-4 || a.estimate->lambda_min < -tau) ++bad;
    }
  }
  return {bad == 0 && accepted > 0 && accepted_full > 0,
          fmt("linked-only: %.0f accepted audits on 200 honest runs, worst "
              "relative error %.3g, min(lambda_min + tau) %.3g; ",
              accepted, worst, lowest_margin) +
              fmt("full mode vs 2P: %.0f audits on %.0f runs with n = p, worst %.3g",
                  accepted_full, runs_full, worst_full)};
}

Outcome criterion7() {
  const DetectorConfig recent = DetectorConfig::single_set(PointStrategy::kMostRecent);
  const DetectorConfig even = DetectorConfig::single_set(PointStrategy::kEvenlySpaced);
  int fp_recent = 0, fp_even = 0;
  for (int i = 0; i < 500; ++i) {
    const QuadraticProblem q = generate_instance(population(707), i).problem;
    const AdmmTrace t = run_admm(q, AdmmConfig{});
    fp_recent += detect(t, recent).detected();
    fp_even += detect(t, even).detected();
  }
  return {fp_recent > fp_even,
          fmt("500 unattacked: most_recent %.0f false positives, evenly_spaced %.0f",
              fp_recent, fp_even)};
}

Outcome criterion8() {
  const AdmmConfig cfg;
  int reached = 0;
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const QuadraticProblem q = generate_instance(population(808), i).problem;
    const CentralSolution c = central_solution(q);
    const BoundSets b = make_bounds(q, c.x, c.z);
    AttackSpec spec;
    spec.vector = AttackVector::kLinkingInfeasibility;
    spec.seed = i;
    AdmmHooks hooks;
    hooks.attack = make_attack_hook(spec, q, &b, cfg.rho);
    hooks.mitigator = make_projection_hook(q.link, b.pub);
    const AdmmTrace t = run_admm(q, cfg, hooks);
    double best = INFINITY;
    for (int k = 1; k <= t.iterations(); ++k) best = std::min(best, t.at(k).r_norm);
    worst = std::max(worst, best);
    if (best <= cfg.eps_pri) ++reached;
  }
  return {reached == 100,
          fmt("%.0f / 100 mitigated runs reached |r| <= %.0e within 500 "
              "iterations (worst best-|r| %.3g)", reached, cfg.eps_pri, worst)};
}

Outcome criterion9() {
  double worst = 0;
  int dual_mismatch = 0, round_mismatch = 0;
  for (int i = 0; i < 100; ++i) {
    const QuadraticProblem q = generate_instance(population(909), i).problem;
    const AdmmTrace agg = run_admm(q, AdmmConfig{});
    ChainConfig cc;
    const ChainResult res = run_decentralized(two_node_chain(q), cc);
    const AdmmTrace& zv = res.view(1, 0).trace;  // z-node's view of x
    const AdmmTrace& xv = res.view(0, 1).trace;  // x-node's view of z
    if (res.rounds != agg.iterations() || res.termination != agg.termination) {
      ++round_mismatch;
      continue;
    }
    for (int k = 0; k <= agg.iterations(); ++k) {
      const TraceEntry& a = agg.at(k);
      worst = std::max({worst, (zv.at(k).x - a.x).cwiseAbs().maxCoeff(),
                        (zv.at(k).z - a.z).cwiseAbs().maxCoeff(),
                        (zv.at(k).u - a.u).cwiseAbs().maxCoeff()});
      if (zv.at(k).u != xv.at(k).u) ++dual_mismatch;
    }
  }
  return {worst <= 1e-12 && dual_mismatch == 0 && round_mismatch == 0,
          fmt("100 problems: max iterate difference %.3g, rounds mismatched %.0f, "
              "rounds with u_x != u_z %.0f", worst, round_mismatch, dual_mismatch)};
}

Outcome criterion10() {
  const int kChains = 20;
  int rows_ok[3] = {0, 0, 0};
  int honest_clean = 0;
  std::string first_bad;
  for (int i = 0; i < kChains; ++i) {
    ChainGeneratorConfig gc;
    RandomStream rng(derive_seed(1010, i));
    const ChainProblem base = generate_chain(gc, rng);
    ChainConfig cc;
    const DetectorConfig dc;

    const SecurityAssessment honest = assess_chain_security(base, cc, dc);
    honest_clean += !honest.detect;

    const AttackVector vectors[3] = {AttackVector::kPrivateInfeasibility,
                                     AttackVector::kLinkingInfeasibility,
                                     AttackVector::kNoiseInjection};
    // expected (detect, localize, mitigate)
    const bool expect[3][3] = {{false, false, false},
                               {true, true, false},
                               {true, false, false}};
    for (int v = 0; v < 3; ++v) {
      ChainProblem chain = base;
      AttackSpec spec;
      spec.vector = vectors[v];
      spec.seed = derive_seed(11, i);
      spec.mode = PrivateAttackMode::kInsidePublic;
      chain.nodes[1].attack = spec;
      chain.nodes[1].attack_link = 1;
      const SecurityAssessment s = assess_chain_security(chain, cc, dc);
      const bool ok = s.detect == expect[v][0] && s.localize == expect[v][1] &&
                      s.mitigate == expect[v][2] &&
                      (!s.localize || s.blamed_node == 1);
      rows_ok[v] += ok;
      if (!ok && first_bad.empty()) {
        first_bad = std::string(", first mismatch: chain ") + std::to_string(i) +
                    " " + to_string(vectors[v]) + " got " + fmt("(%.0f,%.0f,%.0f)",
                    s.detect, s.localize, s.mitigate);
      }
    }
  }
  const bool pass = rows_ok[0] == kChains && rows_ok[1] == kChains &&
                    rows_ok[2] == kChains && honest_clean == kChains;
  return {pass, fmt("%.0f chains: private row %.0f ok, linking row %.0f ok, ",
                    kChains, rows_ok[0], rows_ok[1]) +
                    fmt("noise row %.0f ok, honest chains clean %.0f", rows_ok[2],
                        honest_clean) + first_bad};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--only") only = std::atoi(argv[i + 1]);
  }
  const std::vector<Criterion> all = {
      {1, "oracle equivalence", criterion1},
      {2, "unattacked convergence", criterion2},
      {3, "attacked non-convergence", criterion3},
      {4, "confusion matrix", criterion4},
      {5, "gradient recovery exactness", criterion5},
      {6, "Hessian recovery exactness", criterion6},
      {7, "point-selection ablation", criterion7},
      {8, "mitigation by projection", criterion8},
      {9, "decentralized equivalence", criterion9},
      {10, "security feasibility matrix", criterion10},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    if (only && c.id != only) continue;
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
