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

#ifndef ADMMGUARD_ADMM_H_
#define ADMMGUARD_ADMM_H_

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "admmguard/errors.h"
#include "admmguard/problem.h"
#include "admmguard/trace.h"

namespace admmguard {

struct AdmmConfig {
  double rho = 1.0;
  double eps_pri = 1e-10;
  double eps_dual = 1e-10;
  int max_iterations = 500;
  double z0 = 1.0;  // every entry of z^0
  double u0 = 0.0;  // every entry of u^0

  void validate() const;
};

// Returns the value actually sent in place of the honest minimizer, or
// nullopt when the attack is inactive at iterate k. `previous` is the state
// after iterate k-1.
using AttackHook = std::function<std::optional<Vector>(
    const Vector& x_star, const AdmmState& previous, int k)>;

// Returns a replacement for the received value, or nullopt to pass it on.
using MitigatorHook =
    std::function<std::optional<Vector>(const Vector& x_received, int k)>;

// Sees the trace after each recorded iterate; returning true aborts the run.
using DetectorHook = std::function<bool(const AdmmTrace& prefix)>;

struct AdmmHooks {
  AttackHook attack;
  MitigatorHook mitigator;
  DetectorHook detector;
};

// A subproblem solve failed mid-run. Carries the iterates recorded so far.
class AdmmFailure : public NumericalError {
 public:
  AdmmFailure(const std::string& what, double condition, AdmmTrace partial)
      : NumericalError(what, condition), partial_(std::move(partial)) {}
  const AdmmTrace& partial_trace() const { return partial_; }

 private:
  AdmmTrace partial_;
};

// Factorizes the two iterate-independent subproblem matrices once.
class AdmmSolver {
 public:
  AdmmSolver(const QuadraticProblem& problem, double rho);

  // argmin_x x'Px + c'x + rho/2 |Ax + Bz - c_link + u|^2
  Vector x_update(const Vector& z, const Vector& u) const;
  // argmin_z z'Qz + d'z + rho/2 |Ax + Bz - c_link + u|^2
  Vector z_update(const Vector& x, const Vector& u) const;

  double rho() const { return rho_; }

 private:
  QuadraticProblem problem_;
  double rho_;
  Eigen::LDLT<Matrix> x_system_;
  Eigen::LDLT<Matrix> z_system_;
};

Vector x_update(const QuadraticProblem& problem, const Vector& z,
                const Vector& u, double rho);
Vector z_update(const QuadraticProblem& problem, const Vector& x,
                const Vector& u, double rho);
Vector u_update(const Vector& u, const Vector& x, const Vector& z,
                const LinkingConstraint& link);

// Factorizes `M` (symmetric) and rejects it when singular or when the
// reciprocal condition estimate is below 1e-14.
Eigen::LDLT<Matrix> factorize_checked(const Matrix& M, const char* what);

AdmmTrace run_admm(const QuadraticProblem& problem, const AdmmConfig& cfg,
                   const AdmmHooks& hooks = {});
AdmmTrace run_admm(std::shared_ptr<const QuadraticProblem> problem,
                   const AdmmConfig& cfg, const AdmmHooks& hooks = {});

// The linking constraint eliminated: (x, z) = M w + offset, where w keeps
// every x coordinate and the z coordinates B does not select. For the
// generated selectors this orders w as (x unlinked, shared, z unlinked).
// The objective becomes w' Pi w + kappa' w + constant.
struct CentralQP {
  Matrix Pi;
  Vector kappa;
  double constant = 0;
  Matrix M;       // (n + m) x (n + m - p)
  Vector offset;  // n + m
};

CentralQP compose_central(const QuadraticProblem& problem);

struct CentralSolution {
  Vector w;
  Vector x;
  Vector z;
};

// w* = -1/2 Pi^{-1} kappa. Requires B to be a selector with distinct
// columns; throws NumericalError when Pi is singular.
CentralSolution central_solution(const QuadraticProblem& problem);

}  // namespace admmguard

#endif  // ADMMGUARD_ADMM_H_
