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

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "admmguard/errors.h"
#include "admmguard/generator.h"
#include "admmguard/mitigator.h"

namespace admmguard {
namespace {

// The link oriented with `sender` as the x-role (A side).
LinkingConstraint oriented(const ChainProblem& chain, int link, int sender) {
  const LinkingConstraint& l = chain.links[link];
  if (sender == link) return l;
  return {l.B, l.A, l.c};
}

// Values of `sender` that some value in the receiver's public box can match.
Box acceptable_box(const ChainProblem& chain, int link, int sender,
                   int receiver) {
  PublicBounds pb;
  pb.x = chain.nodes[sender].public_box;
  pb.z = chain.nodes[receiver].public_box;
  return feasible_x_box(oriented(chain, link, sender), pb);
}

// Node-local state. A node reads only its own spec, its dual copies and the
// last values delivered to its inbox.
class ChainNode {
 public:
  ChainNode(const ChainProblem& chain, int index, double rho)
      : spec_(chain.nodes[index]), index_(index), rho_(rho) {
    const int n = spec_.dim();
    if (index > 0) left_ = chain.links[index - 1];
    if (index + 1 < chain.size()) right_ = chain.links[index];
    solver_ = factorize(spec_.P, "node " + std::to_string(index));
    if (spec_.attack &&
        spec_.attack->vector == AttackVector::kObjectiveDistortion) {
      distorted_ = factorize(spec_.attack->scaling * spec_.P,
                             "distorted node " + std::to_string(index));
    }
    if (left_) u_left = Vector::Zero(left_->p());
    if (right_) u_right = Vector::Zero(right_->p());
    value = Vector::Zero(n);
  }

  // argmin v'Pv + c'v + rho/2 |A w + B v - c + u_left|^2
  //                   + rho/2 |A v + B z - c + u_right|^2
  Vector solve(bool distorted) const {
    Vector rhs = -spec_.c;
    if (left_) {
      const Vector gamma = left_->A * inbox.at(index_ - 1) + u_left - left_->c;
      rhs = rhs - rho_ * left_->B.transpose() * gamma;
    }
    if (right_) {
      const Vector gamma = right_->B * inbox.at(index_ + 1) + u_right - right_->c;
      rhs = rhs - rho_ * right_->A.transpose() * gamma;
    }
    return distorted ? distorted_.solve(rhs) : solver_.solve(rhs);
  }

  void update_duals(const Vector& own) {
    if (left_) u_left = u_left + (left_->A * inbox.at(index_ - 1) + left_->B * own - left_->c);
    if (right_) u_right = u_right + (right_->A * own + right_->B * inbox.at(index_ + 1) - right_->c);
  }

  const NodeSpec& spec() const { return spec_; }

  std::map<int, Vector> inbox;  // neighbor -> value used
  Vector u_left;
  Vector u_right;
  Vector value;       // last value sent
  Vector dual_value;  // value fed to own dual copies

 private:
  Eigen::LDLT<Matrix> factorize(const Matrix& P, const std::string& who) {
    Matrix M = 2 * P;
    if (left_) M += rho_ * left_->B.transpose() * left_->B;
    if (right_) M += rho_ * right_->A.transpose() * right_->A;
    return factorize_checked(M, (who + " update system").c_str());
  }

  const NodeSpec& spec_;
  int index_;
  double rho_;
  std::optional<LinkingConstraint> left_;
  std::optional<LinkingConstraint> right_;
  Eigen::LDLT<Matrix> solver_;
  Eigen::LDLT<Matrix> distorted_;
};

Vector apply_attack(const ChainProblem& chain, int j, const ChainNode& node,
                    const Vector& x_star, int k) {
  const NodeSpec& spec = node.spec();
  const AttackSpec& a = *spec.attack;
  switch (a.vector) {
    case AttackVector::kNoiseInjection:
      return noise_attack(x_star, a, k);
    case AttackVector::kLinkingInfeasibility: {
      const int link = spec.attack_link;
      const int receiver = link == j ? j + 1 : j;
      RandomStream sides(a.seed);
      return linking_infeasibility_attack(x_star, oriented(chain, link, j),
                                          chain.nodes[receiver].public_box,
                                          a.margin_fraction, sides);
    }
    case AttackVector::kPrivateInfeasibility:
      return private_infeasibility_attack(x_star, spec.private_box,
                                          spec.public_box, a.mode);
    case AttackVector::kObjectiveDistortion:
      return node.solve(true);
  }
  return x_star;
}

TraceEntry view_entry(int k, const Vector& x, const Vector& z, const Vector& u,
                      const LinkingConstraint& link) {
  TraceEntry e;
  e.k = k;
  e.x = x;
  e.z = z;
  e.u = u;
  e.r = primal_residual(x, z, link);
  e.r_norm = e.r.norm();
  return e;
}

}  // namespace

void ChainProblem::validate() const {
  if (nodes.size() < 2) throw StructuralError("a chain needs at least two nodes");
  if (links.size() + 1 != nodes.size()) {
    throw StructuralError("a chain of N nodes needs N-1 links");
  }
  for (const NodeSpec& node : nodes) {
    const int n = node.dim();
    if (n < 1 || node.P.cols() != n || node.c.size() != n ||
        node.private_box.dim() != n || node.public_box.dim() != n) {
      throw StructuralError("node " + std::to_string(node.id) +
                            " has inconsistent dimensions");
    }
    if (!is_psd(node.P)) {
      throw StructuralError("node " + std::to_string(node.id) + " cost is not PSD");
    }
  }
  for (size_t i = 0; i < links.size(); ++i) {
    validate_link(links[i], nodes[i].dim(), nodes[i + 1].dim());
  }
  for (size_t j = 0; j < nodes.size(); ++j) {
    const NodeSpec& node = nodes[j];
    if (node.attack && node.attack->vector == AttackVector::kLinkingInfeasibility &&
        node.attack_link != static_cast<int>(j) &&
        node.attack_link != static_cast<int>(j) - 1) {
      throw StructuralError("attack_link must be adjacent to the attacker");
    }
  }
}

const NodeView& ChainResult::view(int owner, int neighbor) const {
  for (const NodeView& v : views) {
    if (v.owner == owner && v.neighbor == neighbor) return v;
  }
  throw StructuralError("no view of node " + std::to_string(neighbor) +
                        " from node " + std::to_string(owner));
}

ChainResult run_decentralized(const ChainProblem& chain, const ChainConfig& cfg) {
  chain.validate();
  cfg.admm.validate();
  const int N = chain.size();
  const double rho = cfg.admm.rho;
  auto first_color = [&](int j) { return j % 2 == cfg.first_parity % 2; };

  std::vector<std::unique_ptr<ChainNode>> nodes;
  for (int j = 0; j < N; ++j) {
    nodes.push_back(std::make_unique<ChainNode>(chain, j, rho));
    nodes[j]->value = first_color(j)
                          ? Vector::Zero(chain.nodes[j].dim())
                          : Vector::Constant(chain.nodes[j].dim(), cfg.admm.z0);
    nodes[j]->dual_value = nodes[j]->value;
    if (nodes[j]->u_left.size()) nodes[j]->u_left.setConstant(cfg.admm.u0);
    if (nodes[j]->u_right.size()) nodes[j]->u_right.setConstant(cfg.admm.u0);
  }
  for (int j = 0; j < N; ++j) {
    if (j > 0) nodes[j]->inbox[j - 1] = nodes[j - 1]->value;
    if (j + 1 < N) nodes[j]->inbox[j + 1] = nodes[j + 1]->value;
  }

  // Acceptance boxes, one per (link, sender).
  std::map<std::pair<int, int>, Box> accept;
  for (int i = 0; i + 1 < N; ++i) {
    accept[{i, i}] = acceptable_box(chain, i, i, i + 1);
    accept[{i, i + 1}] = acceptable_box(chain, i, i + 1, i);
  }

  ChainResult result;
  result.values.push_back({});
  for (int j = 0; j < N; ++j) result.values[0].push_back(nodes[j]->value);
  for (int j = 0; j < N; ++j) {
    for (int q : {j - 1, j + 1}) {
      if (q < 0 || q >= N) continue;
      const int link = std::min(j, q);
      NodeView v{j, q, link, {}};
      auto prob = std::make_shared<QuadraticProblem>();
      prob->P = Matrix::Zero(chain.nodes[q].dim(), chain.nodes[q].dim());
      prob->c_cost = Vector::Zero(chain.nodes[q].dim());
      prob->Q = chain.nodes[j].P;
      prob->d_cost = chain.nodes[j].c;
      prob->link = oriented(chain, link, q);
      v.trace.problem = prob;
      v.trace.rho = rho;
      v.trace.eps_pri = cfg.admm.eps_pri;
      v.trace.eps_dual = cfg.admm.eps_dual;
      v.trace.x_updates_first = first_color(q);
      const Vector& u = q < j ? nodes[j]->u_left : nodes[j]->u_right;
      v.trace.entries.push_back(
          view_entry(0, nodes[q]->value, nodes[j]->value, u, prob->link));
      result.views.push_back(std::move(v));
    }
  }

  std::vector<std::map<int, bool>> projected(N);
  std::vector<std::map<int, Vector>> raw(N);
  for (int k = 1; k <= cfg.admm.max_iterations; ++k) {
    for (int phase = 0; phase < 2; ++phase) {
      for (int j = 0; j < N; ++j) {
        if (first_color(j) != (phase == 0)) continue;
        ChainNode& node = *nodes[j];
        const Vector x_star = node.solve(false);
        Vector sent = x_star;
        const auto& attack = chain.nodes[j].attack;
        const bool attacking = attack && k >= attack->start_iteration;
        if (attacking) {
          sent = apply_attack(chain, j, node, x_star, k);
        } else if (cfg.enforce_public_feasibility) {
          if (j > 0) sent = clamp_to_box(sent, accept.at({j - 1, j}));
          if (j + 1 < N) sent = clamp_to_box(sent, accept.at({j, j}));
        }
        node.value = sent;
        node.dual_value =
            attacking && chain.nodes[j].desync_dual ? x_star : sent;
        for (int q : {j - 1, j + 1}) {
          if (q < 0 || q >= N) continue;
          result.messages.push_back({k, j, q, sent});
          const Box& box = accept.at({std::min(j, q), j});
          Vector used = sent;
          bool fixed = false;
          if (cfg.check_bounds) {
            const BoundCheck check = check_public_bounds(sent, box);
            if (!check.within) {
              result.alarms.push_back({k, q, j, check.violated});
              if (cfg.project_received) {
                used = clamp_to_box(sent, box);
                fixed = true;
              }
            }
          }
          nodes[q]->inbox[j] = used;
          projected[q][j] = fixed;
          raw[q][j] = sent;
        }
      }
    }
    for (int j = 0; j < N; ++j) nodes[j]->update_duals(nodes[j]->dual_value);

    result.values.push_back({});
    for (int j = 0; j < N; ++j) result.values.back().push_back(nodes[j]->value);

    std::vector<bool> ok(N, true);
    for (NodeView& v : result.views) {
      const ChainNode& owner = *nodes[v.owner];
      const Vector& u = v.neighbor < v.owner ? owner.u_left : owner.u_right;
      const LinkingConstraint& link = v.trace.problem->link;
      TraceEntry e = view_entry(k, owner.inbox.at(v.neighbor), owner.dual_value,
                                u, link);
      const TraceEntry& prev = v.trace.entries.back();
      e.s_norm = v.trace.x_updates_first
                     ? dual_residual(e.z, prev.z, link, rho).norm()
                     : dual_residual_x_second(e.x, prev.x, link, rho).norm();
      if (projected[v.owner][v.neighbor]) {
        e.mitigated = true;
        e.x_received = raw[v.owner][v.neighbor];
      }
      if (e.r_norm > cfg.admm.eps_pri || e.s_norm > cfg.admm.eps_dual) {
        ok[v.owner] = false;
      }
      v.trace.entries.push_back(std::move(e));
    }
    result.rounds = k;
    result.node_converged = ok;
    if (std::all_of(ok.begin(), ok.end(), [](bool b) { return b; })) {
      result.termination = Termination::kConverged;
      break;
    }
  }
  for (NodeView& v : result.views) v.trace.termination = result.termination;
  return result;
}

DetectionReport node_audit(const ChainResult& result, int owner, int neighbor,
                           const DetectorConfig& cfg) {
  DetectorConfig local = cfg;
  local.mode = DetectorMode::kLinkedOnly;
  DetectionReport report = detect(result.view(owner, neighbor).trace, local);
  const std::string caveat =
      "source may be node " + std::to_string(neighbor) + " or a node beyond it";
  report.note = report.note.empty() ? caveat : report.note + "; " + caveat;
  return report;
}

std::vector<Vector> chain_kkt_solution(const ChainProblem& chain) {
  chain.validate();
  const int N = chain.size();
  std::vector<int> offset(N + 1, 0);
  for (int j = 0; j < N; ++j) offset[j + 1] = offset[j] + chain.nodes[j].dim();
  int rows = 0;
  for (const auto& l : chain.links) rows += l.p();
  const int total = offset[N];
  Matrix K = Matrix::Zero(total + rows, total + rows);
  Vector rhs = Vector::Zero(total + rows);
  for (int j = 0; j < N; ++j) {
    const int n = chain.nodes[j].dim();
    K.block(offset[j], offset[j], n, n) = 2 * chain.nodes[j].P;
    rhs.segment(offset[j], n) = -chain.nodes[j].c;
  }
  int r = total;
  for (int i = 0; i + 1 < N; ++i) {
    const LinkingConstraint& l = chain.links[i];
    const int p = l.p();
    K.block(r, offset[i], p, l.A.cols()) = l.A;
    K.block(r, offset[i + 1], p, l.B.cols()) = l.B;
    K.block(offset[i], r, l.A.cols(), p) = l.A.transpose();
    K.block(offset[i + 1], r, l.B.cols(), p) = l.B.transpose();
    rhs.segment(r, p) = l.c;
    r += p;
  }
  Eigen::FullPivLU<Matrix> lu(K);
  if (!lu.isInvertible()) throw NumericalError("chain KKT system is singular");
  const Vector sol = lu.solve(rhs);
  std::vector<Vector> out;
  for (int j = 0; j < N; ++j) {
    out.push_back(sol.segment(offset[j], chain.nodes[j].dim()));
  }
  return out;
}

ChainProblem two_node_chain(const QuadraticProblem& problem) {
  validate_problem(problem);
  ChainProblem chain;
  NodeSpec x{0, problem.P, problem.c_cost, Box::unbounded(problem.n()),
             Box::unbounded(problem.n()), std::nullopt, 0, false};
  NodeSpec z{1, problem.Q, problem.d_cost, Box::unbounded(problem.m()),
             Box::unbounded(problem.m()), std::nullopt, 0, false};
  chain.nodes = {x, z};
  chain.links = {problem.link};
  return chain;
}

ChainProblem generate_chain(const ChainGeneratorConfig& cfg, RandomStream& rng) {
  if (cfg.nodes < 2 || cfg.max_link < 1 || cfg.max_extra < 0 || !(cfg.scale > 0)) {
    throw ConfigError("invalid chain generator config");
  }
  const double S = cfg.scale;
  const double floor = cfg.curvature_floor * S * S;
  auto block = [&](int n) {
    for (;;) {
      Matrix L(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) L(a, b) = rng.uniform(-S, S);
      Matrix P = gram_matrix(L);
      if (floor <= 0 ? is_psd(P) : min_eigenvalue(P) >= floor) return P;
    }
  };

  std::vector<int> p(cfg.nodes - 1);
  for (int& pi : p) pi = static_cast<int>(rng.uniform_int(1, cfg.max_link));

  ChainProblem chain;
  for (int j = 0; j < cfg.nodes; ++j) {
    const int left = j > 0 ? p[j - 1] : 0;
    const int right = j + 1 < cfg.nodes ? p[j] : 0;
    const int extra = static_cast<int>(rng.uniform_int(0, cfg.max_extra));
    const int n = left + extra + right;
    NodeSpec node;
    node.id = j;
    node.P = Matrix::Zero(n, n);
    if (left + extra > 0) {
      node.P.topLeftCorner(left + extra, left + extra) = block(left + extra);
    }
    if (right > 0) node.P.bottomRightCorner(right, right) = block(right);
    node.c.resize(n);
    for (int a = 0; a < n; ++a) node.c[a] = rng.uniform(-S * S, S * S);
    chain.nodes.push_back(std::move(node));
  }
  for (int i = 0; i + 1 < cfg.nodes; ++i) {
    const int nl = chain.nodes[i].dim();
    const int nr = chain.nodes[i + 1].dim();
    LinkingConstraint l{Matrix::Zero(p[i], nl), Matrix::Zero(p[i], nr),
                        Vector::Zero(p[i])};
    for (int r = 0; r < p[i]; ++r) {
      l.A(r, nl - p[i] + r) = 1.0;
      l.B(r, r) = -1.0;
    }
    chain.links.push_back(std::move(l));
  }
  for (NodeSpec& node : chain.nodes) {
    node.private_box = Box::unbounded(node.dim());
    node.public_box = Box::unbounded(node.dim());
  }
  double extent = 1.0;
  for (const Vector& v : chain_kkt_solution(chain)) {
    extent = std::max(extent, v.cwiseAbs().maxCoeff());
  }
  for (NodeSpec& node : chain.nodes) {
    node.private_box = Box::symmetric(node.dim(), 1.5 * extent);
    node.public_box = Box::symmetric(node.dim(), 3.0 * extent);
  }
  return chain;
}

SecurityAssessment assess_chain_security(const ChainProblem& chain,
                                         const ChainConfig& cfg,
                                         const DetectorConfig& detector) {
  ChainConfig observe = cfg;
  observe.check_bounds = true;
  observe.project_received = false;
  const ChainResult run = run_decentralized(chain, observe);

  // Only honest nodes report; an attacker has no reason to raise alarms.
  auto honest = [&](int j) { return !chain.nodes[j].attack.has_value(); };
  SecurityAssessment out;
  std::set<int> senders;
  for (const BoundAlarm& a : run.alarms) {
    if (!honest(a.receiver)) continue;
    ++out.alarms;
    senders.insert(a.sender);
  }
  for (const NodeView& v : run.views) {
    if (!honest(v.owner)) continue;
    if (node_audit(run, v.owner, v.neighbor, detector).detected()) {
      ++out.audit_detections;
    }
  }
  out.detect = out.alarms > 0 || out.audit_detections > 0;
  if (senders.size() == 1) {
    out.localize = true;
    out.blamed_node = *senders.begin();
  }
  if (out.detect) {
    ChainConfig repair = cfg;
    repair.check_bounds = true;
    repair.project_received = true;
    const ChainResult fixed = run_decentralized(chain, repair);
    if (fixed.converged()) {
      const std::vector<Vector> best = chain_kkt_solution(chain);
      out.mitigate = true;
      for (int j = 0; j < chain.size(); ++j) {
        const double tol =
            kOptimumTolerance * std::max(1.0, best[j].lpNorm<Eigen::Infinity>());
        if ((fixed.values.back()[j] - best[j]).lpNorm<Eigen::Infinity>() > tol) {
          out.mitigate = false;
        }
      }
    }
  }
  return out;
}

}  // namespace admmguard
