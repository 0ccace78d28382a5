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

#include "admmguard/problem.h"

#include <cmath>
#include <limits>
#include <string>

#include "admmguard/errors.h"

namespace admmguard {
namespace {

std::string dims(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

void require_symmetric(const Matrix& M, const char* name) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw StructuralError(std::string(name) + " is not symmetric");
  }
}

}  // namespace

Box Box::unbounded(int dim) {
  const double inf = std::numeric_limits<double>::infinity();
  return {Vector::Constant(dim, -inf), Vector::Constant(dim, inf)};
}

Box Box::symmetric(int dim, double half_width) {
  return {Vector::Constant(dim, -half_width), Vector::Constant(dim, half_width)};
}

bool Box::contains(const Vector& v) const {
  if (v.size() != lower.size()) {
    throw StructuralError("box dimension mismatch");
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] >= lower[i] && v[i] <= upper[i])) return false;
  }
  return true;
}

PublicBounds PublicBounds::unbounded(int n, int m) {
  return {Box::unbounded(n), Box::unbounded(m), std::vector<bool>(n, true),
          std::vector<bool>(m, true)};
}

void validate_link(const LinkingConstraint& link, int n, int m) {
  if (link.A.cols() != n || link.B.cols() != m ||
      link.A.rows() != link.B.rows() || link.c.size() != link.A.rows()) {
    throw StructuralError("linking constraint shape mismatch: A " +
                          dims(link.A) + ", B " + dims(link.B) + ", c " +
                          std::to_string(link.c.size()) + " for n=" +
                          std::to_string(n) + ", m=" + std::to_string(m));
  }
}

void validate_problem(const QuadraticProblem& problem) {
  const int n = problem.n();
  const int m = problem.m();
  if (n < 1 || m < 1) throw StructuralError("empty problem");
  if (problem.P.cols() != n || problem.Q.cols() != m) {
    throw StructuralError("P is " + dims(problem.P) + ", Q is " +
                          dims(problem.Q) + "; both must be square");
  }
  if (problem.c_cost.size() != n || problem.d_cost.size() != m) {
    throw StructuralError("linear cost length mismatch");
  }
  validate_link(problem.link, n, m);
  const int p = problem.p();
  if (p < 1 || p > std::min(n, m)) {
    throw StructuralError("p=" + std::to_string(p) + " outside [1, min(n,m)]");
  }
  require_symmetric(problem.P, "P");
  require_symmetric(problem.Q, "Q");
  if (!is_psd(problem.P)) throw StructuralError("P is not PSD");
  if (!is_psd(problem.Q)) throw StructuralError("Q is not PSD");
}

Vector primal_residual(const Vector& x, const Vector& z,
                       const LinkingConstraint& link) {
  if (x.size() != link.A.cols() || z.size() != link.B.cols() ||
      link.c.size() != link.A.rows() || link.B.rows() != link.A.rows()) {
    throw StructuralError("primal_residual: dimension mismatch");
  }
  return link.A * x + link.B * z - link.c;
}

Vector primal_residual(const AdmmState& state, const LinkingConstraint& link) {
  return primal_residual(state.x, state.z, link);
}

Vector dual_residual(const Vector& z_new, const Vector& z_old,
                     const LinkingConstraint& link, double rho) {
  if (!(rho > 0)) throw StructuralError("rho must be positive");
  if (z_new.size() != link.B.cols() || z_old.size() != link.B.cols()) {
    throw StructuralError("dual_residual: dimension mismatch");
  }
  return rho * (link.A.transpose() * (link.B * (z_new - z_old)));
}

Vector dual_residual_x_second(const Vector& x_new, const Vector& x_old,
                              const LinkingConstraint& link, double rho) {
  if (!(rho > 0)) throw StructuralError("rho must be positive");
  if (x_new.size() != link.A.cols() || x_old.size() != link.A.cols()) {
    throw StructuralError("dual_residual: dimension mismatch");
  }
  return rho * (link.B.transpose() * (link.A * (x_new - x_old)));
}

double objective(const QuadraticProblem& problem, const Vector& x,
                 const Vector& z) {
  return x.dot(problem.P * x) + problem.c_cost.dot(x) + z.dot(problem.Q * z) +
         problem.d_cost.dot(z);
}

double min_eigenvalue(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool is_psd(const Matrix& symmetric, double relative_tolerance) {
  if (symmetric.size() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetric, Eigen::EigenvaluesOnly);
  const Vector& ev = es.eigenvalues();
  const double largest = ev.cwiseAbs().maxCoeff();
  return ev(0) >= -relative_tolerance * largest;
}

std::optional<std::vector<SelectorRow>> as_selector(const Matrix& M) {
  std::vector<SelectorRow> rows;
  rows.reserve(M.rows());
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    int column = -1;
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (M(i, j) == 0.0) continue;
      if (column >= 0) return std::nullopt;
      column = static_cast<int>(j);
    }
    if (column < 0) return std::nullopt;
    rows.push_back({column, M(i, column)});
  }
  return rows;
}

}  // namespace admmguard
