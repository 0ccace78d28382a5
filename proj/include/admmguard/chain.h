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

#ifndef ADMMGUARD_CHAIN_H_
#define ADMMGUARD_CHAIN_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "admmguard/admm.h"
#include "admmguard/attacks.h"
#include "admmguard/detector.h"
#include "admmguard/problem.h"
#include "admmguard/rng.h"
#include "admmguard/trace.h"

namespace admmguard {

// One node of a path graph. Node i's cost is v'Pv + c'v.
struct NodeSpec {
  int id = 0;
  Matrix P;
  Vector c;
  Box private_box;
  Box public_box;
  std::optional<AttackSpec> attack;
  // With a linking attack: the link whose receiver the displacement targets.
  int attack_link = 0;
  // Attacker feeds its own dual copies the honest value instead of the one
  // it sent, so its copies drift from the neighbors'.
  bool desync_dual = false;

  int dim() const { return static_cast<int>(P.rows()); }
};

// links[i] couples nodes i and i+1: A acts on node i, B on node i+1.
struct ChainProblem {
  std::vector<NodeSpec> nodes;
  std::vector<LinkingConstraint> links;

  int size() const { return static_cast<int>(nodes.size()); }
  void validate() const;
};

struct ChainConfig {
  AdmmConfig admm;
  // Honest senders clamp outgoing linked coordinates into what the
  // receiver's public box can match, so honest traffic never trips a bound
  // check.
  bool enforce_public_feasibility = true;
  bool check_bounds = true;
  // Receivers replace out-of-bounds values with their projection.
  bool project_received = false;
  // Nodes at positions of this parity update first in each round.
  int first_parity = 0;
};

struct Message {
  int round;
  int sender;
  int receiver;
  Vector value;
};

struct BoundAlarm {
  int round;
  int receiver;
  int sender;  // the neighbor that sent the offending value
  std::vector<int> violated;
};

// What `owner` sees of the link to `neighbor`, oriented so the neighbor is
// the x-role and the owner the z-role: x is the value received, z the
// owner's own value, u the owner's dual copy.
struct NodeView {
  int owner;
  int neighbor;
  int link;
  AdmmTrace trace;
};

struct ChainResult {
  Termination termination = Termination::kIterationCap;
  int rounds = 0;
  std::vector<std::vector<Vector>> values;  // [round][node], as sent
  std::vector<Message> messages;
  std::vector<BoundAlarm> alarms;
  std::vector<NodeView> views;
  std::vector<bool> node_converged;

  bool converged() const { return termination == Termination::kConverged; }
  const NodeView& view(int owner, int neighbor) const;
};

ChainResult run_decentralized(const ChainProblem& chain, const ChainConfig& cfg);

// Runs the detector on the owner's view of one neighbor, in linked-only
// mode. A detection does not say whether the neighbor or a node beyond it
// is the source.
DetectionReport node_audit(const ChainResult& result, int owner, int neighbor,
                           const DetectorConfig& cfg);

struct ChainGeneratorConfig {
  int nodes = 3;
  int max_link = 3;   // p per link on [1, max_link]
  int max_extra = 2;  // unlinked coordinates per node on [0, max_extra]
  double scale = 1.0;
  double curvature_floor = 0.03;
  std::uint64_t seed = 0;
};

// Interior node costs are block-diagonal: the left-linked and unlinked
// coordinates form one block, the right-linked coordinates another.
// Bounds follow the same rule as make_bounds, around the joint optimum.
ChainProblem generate_chain(const ChainGeneratorConfig& cfg, RandomStream& rng);

// Joint optimum by a dense KKT solve over all nodes.
std::vector<Vector> chain_kkt_solution(const ChainProblem& chain);

// Wraps a two-actor problem as a two-node chain with unbounded boxes.
ChainProblem two_node_chain(const QuadraticProblem& problem);

struct SecurityAssessment {
  bool detect = false;
  bool localize = false;
  bool mitigate = false;
  std::optional<int> blamed_node;
  int alarms = 0;
  int audit_detections = 0;
};

// Distance (relative to max(1, |x*|_inf)) at which a repaired run counts as
// back on the joint optimum.
inline constexpr double kOptimumTolerance = 1e-6;

// Runs the chain once with bound checks and neighbor audits. Only nodes
// without an attack report alarms or audit flags. Localization requires bound
// alarms that all blame one sender. Mitigation is tried only after a
// detection, by rerunning with receiver projection; it counts when every node
// converges and lands on the joint optimum.
SecurityAssessment assess_chain_security(const ChainProblem& chain,
                                         const ChainConfig& cfg,
                                         const DetectorConfig& detector);

}  // namespace admmguard

#endif  // ADMMGUARD_CHAIN_H_
