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

#ifndef ADMMGUARD_PROBLEM_H_
#define ADMMGUARD_PROBLEM_H_

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace admmguard {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Relative tolerance on the least eigenvalue of P and Q.
inline constexpr double kPsdTolerance = 1e-9;

// Ax + Bz = c.
struct LinkingConstraint {
  Matrix A;  // p x n
  Matrix B;  // p x m
  Vector c;  // p

  int p() const { return static_cast<int>(A.rows()); }
};

// minimize x'Px + c'x + z'Qz + d'z  subject to  Ax + Bz = c_link.
struct QuadraticProblem {
  Matrix P;
  Vector c_cost;
  Matrix Q;
  Vector d_cost;
  LinkingConstraint link;

  int n() const { return static_cast<int>(P.rows()); }
  int m() const { return static_cast<int>(Q.rows()); }
  int p() const { return link.p(); }
};

// Axis-aligned interval set. Infinite entries mean unbounded.
struct Box {
  Vector lower;
  Vector upper;

  static Box unbounded(int dim);
  static Box symmetric(int dim, double half_width);

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& v) const;
};

// Publicly known supersets of each actor's private feasible set. The flags
// mark coordinates whose value is visible to the other side; coordinates
// that are not flagged are treated as private and are not audited.
struct PublicBounds {
  Box x;
  Box z;
  std::vector<bool> x_public;
  std::vector<bool> z_public;

  static PublicBounds unbounded(int n, int m);
};

struct AdmmState {
  Vector x;
  Vector z;
  Vector u;  // scaled dual; the unscaled dual is rho * u
  int k = 0;
};

// Checks sizes, symmetry and the PSD tolerance. Throws StructuralError.
void validate_problem(const QuadraticProblem& problem);
void validate_link(const LinkingConstraint& link, int n, int m);

Vector primal_residual(const Vector& x, const Vector& z,
                       const LinkingConstraint& link);
Vector primal_residual(const AdmmState& state, const LinkingConstraint& link);

// rho * A' B (z_new - z_old).
Vector dual_residual(const Vector& z_new, const Vector& z_old,
                     const LinkingConstraint& link, double rho);

// rho * B' A (x_new - x_old), for the order in which x updates second.
Vector dual_residual_x_second(const Vector& x_new, const Vector& x_old,
                              const LinkingConstraint& link, double rho);

// x'Px + c'x + z'Qz + d'z.
double objective(const QuadraticProblem& problem, const Vector& x,
                 const Vector& z);

double min_eigenvalue(const Matrix& symmetric);

// Least eigenvalue >= -tau * max(|eigenvalues|).
bool is_psd(const Matrix& symmetric, double relative_tolerance = kPsdTolerance);

// One nonzero per row.
struct SelectorRow {
  int column;
  double coefficient;
};

// Returns the selector rows of `M`, or nullopt when some row does not have
// exactly one nonzero entry.
std::optional<std::vector<SelectorRow>> as_selector(const Matrix& M);

}  // namespace admmguard

#endif  // ADMMGUARD_PROBLEM_H_
