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

#include "admmguard/admm.h"

#include <cmath>
#include <string>
#include <utility>

namespace admmguard {

void AdmmConfig::validate() const {
  if (!(rho > 0)) throw ConfigError("rho must be > 0");
  if (!(eps_pri > 0) || !(eps_dual > 0)) {
    throw ConfigError("convergence thresholds must be > 0");
  }
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!std::isfinite(z0) || !std::isfinite(u0)) {
    throw ConfigError("initial values must be finite");
  }
}

Eigen::LDLT<Matrix> factorize_checked(const Matrix& M, const char* what) {
  Eigen::LDLT<Matrix> ldlt(M);
  double rcond = ldlt.info() == Eigen::Success ? ldlt.rcond() : 0.0;
  // LDLT::rcond skips exactly zero pivots, so look at D as well. The
  // systems here are PSD, so every pivot should be positive.
  const Vector& d = ldlt.vectorD();
  const double d_max = d.cwiseAbs().maxCoeff();
  if (d.size() > 0 && d_max > 0) rcond = std::min(rcond, d.minCoeff() / d_max);
  if (!(rcond >= 1e-14)) {
    throw NumericalError(std::string(what) + " is singular or ill-conditioned",
                         rcond > 0 ? 1.0 / rcond
                                   : std::numeric_limits<double>::infinity());
  }
  return ldlt;
}

AdmmSolver::AdmmSolver(const QuadraticProblem& problem, double rho)
    : problem_(problem), rho_(rho) {
  validate_link(problem.link, problem.n(), problem.m());
  const Matrix& A = problem.link.A;
  const Matrix& B = problem.link.B;
  x_system_ = factorize_checked(2 * problem.P + rho * A.transpose() * A,
                                "x-update system 2P + rho A'A");
  z_system_ = factorize_checked(2 * problem.Q + rho * B.transpose() * B,
                                "z-update system 2Q + rho B'B");
}

Vector AdmmSolver::x_update(const Vector& z, const Vector& u) const {
  const LinkingConstraint& l = problem_.link;
  const Vector gamma = l.B * z + u - l.c;
  return x_system_.solve(-problem_.c_cost - rho_ * l.A.transpose() * gamma);
}

Vector AdmmSolver::z_update(const Vector& x, const Vector& u) const {
  const LinkingConstraint& l = problem_.link;
  const Vector mu = l.A * x + u - l.c;
  return z_system_.solve(-problem_.d_cost - rho_ * l.B.transpose() * mu);
}

Vector x_update(const QuadraticProblem& problem, const Vector& z,
                const Vector& u, double rho) {
  if (z.size() != problem.m() || u.size() != problem.p()) {
    throw StructuralError("x_update: dimension mismatch");
  }
  return AdmmSolver(problem, rho).x_update(z, u);
}

Vector z_update(const QuadraticProblem& problem, const Vector& x,
                const Vector& u, double rho) {
  if (x.size() != problem.n() || u.size() != problem.p()) {
    throw StructuralError("z_update: dimension mismatch");
  }
  return AdmmSolver(problem, rho).z_update(x, u);
}

Vector u_update(const Vector& u, const Vector& x, const Vector& z,
                const LinkingConstraint& link) {
  if (u.size() != link.A.rows()) {
    throw StructuralError("u_update: dimension mismatch");
  }
  return u + primal_residual(x, z, link);
}

AdmmTrace run_admm(const QuadraticProblem& problem, const AdmmConfig& cfg,
                   const AdmmHooks& hooks) {
  return run_admm(std::make_shared<const QuadraticProblem>(problem), cfg,
                  hooks);
}

AdmmTrace run_admm(std::shared_ptr<const QuadraticProblem> problem,
                   const AdmmConfig& cfg, const AdmmHooks& hooks) {
  cfg.validate();
  validate_problem(*problem);
  const LinkingConstraint& link = problem->link;

  AdmmTrace trace;
  trace.rho = cfg.rho;
  trace.eps_pri = cfg.eps_pri;
  trace.eps_dual = cfg.eps_dual;
  trace.problem = problem;

  AdmmState state{Vector::Zero(problem->n()),
                  Vector::Constant(problem->m(), cfg.z0),
                  Vector::Constant(problem->p(), cfg.u0), 0};
  {
    TraceEntry e;
    e.x = state.x;
    e.z = state.z;
    e.u = state.u;
    e.r = primal_residual(state, link);
    e.r_norm = e.r.norm();
    trace.entries.push_back(std::move(e));
  }

  std::optional<AdmmSolver> solver;
  try {
    solver.emplace(*problem, cfg.rho);
  } catch (const NumericalError& err) {
    trace.termination = Termination::kNumericalFailure;
    throw AdmmFailure(err.what(), err.condition_estimate(), std::move(trace));
  }

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    TraceEntry e;
    e.k = k;
    const Vector x_star = solver->x_update(state.z, state.u);
    Vector x_sent = x_star;
    if (hooks.attack) {
      if (std::optional<Vector> tampered = hooks.attack(x_star, state, k)) {
        if (tampered->size() != x_star.size()) {
          throw StructuralError("attack hook changed the x dimension");
        }
        e.attacked = true;
        x_sent = std::move(*tampered);
      }
    }
    Vector x_used = x_sent;
    if (hooks.mitigator) {
      if (std::optional<Vector> fixed = hooks.mitigator(x_sent, k)) {
        if (*fixed != x_sent) {
          e.mitigated = true;
          x_used = std::move(*fixed);
        }
      }
    }
    const Vector z_new = solver->z_update(x_used, state.u);
    e.r = primal_residual(x_used, z_new, link);
    e.u = state.u + e.r;
    e.r_norm = e.r.norm();
    e.s_norm = dual_residual(z_new, state.z, link, cfg.rho).norm();
    if (!x_used.allFinite() || !z_new.allFinite() || !e.u.allFinite()) {
      trace.termination = Termination::kNumericalFailure;
      throw AdmmFailure("non-finite iterate at k=" + std::to_string(k),
                        std::numeric_limits<double>::infinity(),
                        std::move(trace));
    }
    if (e.attacked) e.x_honest = x_star;
    if (e.mitigated) e.x_received = x_sent;
    e.x = x_used;
    e.z = z_new;
    state = {x_used, z_new, e.u, k};
    const bool done = e.r_norm <= cfg.eps_pri && e.s_norm <= cfg.eps_dual;
    trace.entries.push_back(std::move(e));

    if (hooks.detector && hooks.detector(trace)) {
      trace.termination = Termination::kDetectorAbort;
      return trace;
    }
    if (done) {
      trace.termination = Termination::kConverged;
      return trace;
    }
  }
  trace.termination = Termination::kIterationCap;
  return trace;
}

CentralQP compose_central(const QuadraticProblem& problem) {
  validate_problem(problem);
  const int n = problem.n();
  const int m = problem.m();
  const LinkingConstraint& link = problem.link;
  const auto rows = as_selector(link.B);
  if (!rows) throw StructuralError("central oracle needs a selector B");

  // z column -> constraint row that determines it.
  std::vector<int> owner(m, -1);
  for (int i = 0; i < link.p(); ++i) {
    const int col = (*rows)[i].column;
    if (owner[col] >= 0) throw StructuralError("B selects a z column twice");
    owner[col] = i;
  }

  const int w_dim = n + m - link.p();
  CentralQP qp;
  qp.M = Matrix::Zero(n + m, w_dim);
  qp.offset = Vector::Zero(n + m);
  qp.M.topLeftCorner(n, n).setIdentity();
  int next = n;
  for (int j = 0; j < m; ++j) {
    if (owner[j] < 0) {
      qp.M(n + j, next++) = 1.0;
      continue;
    }
    // b z_j = c_i - A_i x
    const int i = owner[j];
    const double b = (*rows)[i].coefficient;
    qp.M.block(n + j, 0, 1, n) = -link.A.row(i) / b;
    qp.offset[n + j] = link.c[i] / b;
  }

  Matrix H = Matrix::Zero(n + m, n + m);
  H.topLeftCorner(n, n) = problem.P;
  H.bottomRightCorner(m, m) = problem.Q;
  Vector lin(n + m);
  lin << problem.c_cost, problem.d_cost;

  const Matrix Pi = qp.M.transpose() * H * qp.M;
  qp.Pi = 0.5 * (Pi + Pi.transpose());
  qp.kappa = qp.M.transpose() * (2 * H * qp.offset + lin);
  qp.constant = qp.offset.dot(H * qp.offset) + lin.dot(qp.offset);
  return qp;
}

CentralSolution central_solution(const QuadraticProblem& problem) {
  const CentralQP qp = compose_central(problem);
  const auto ldlt = factorize_checked(qp.Pi, "central matrix Pi");
  CentralSolution s;
  s.w = -0.5 * ldlt.solve(qp.kappa);
  const Vector xz = qp.M * s.w + qp.offset;
  s.x = xz.head(problem.n());
  s.z = xz.tail(problem.m());
  return s;
}

}  // namespace admmguard
