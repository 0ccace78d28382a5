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

#ifndef ADMMGUARD_DETECTOR_H_
#define ADMMGUARD_DETECTOR_H_

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "admmguard/problem.h"
#include "admmguard/trace.h"

namespace admmguard {

// kFull audits the n x n Hessian of f over x. kLinkedOnly audits the p x p
// Hessian of phi(y) = min { f(x) : Ax = y }, which only needs the linked
// coordinates; the remaining n - p directions go unaudited.
enum class DetectorMode { kFull, kLinkedOnly };
enum class PointStrategy { kEvenlySpaced, kMostRecent, kCustom };
enum class AuditCadence { kEveryIteration, kAtHorizon };
enum class Verdict { kAttackDetected, kNoAttackDetected, kInconclusive };
enum class AuditStatus { kAccepted, kRejectedCollinear, kRejectedConditioning };

const char* to_string(DetectorMode v);
const char* to_string(PointStrategy v);
const char* to_string(AuditCadence v);
const char* to_string(Verdict v);
const char* to_string(AuditStatus v);
DetectorMode detector_mode_from_string(const std::string& s);
PointStrategy point_strategy_from_string(const std::string& s);
AuditCadence audit_cadence_from_string(const std::string& s);
Verdict verdict_from_string(const std::string& s);

struct DetectorConfig {
  DetectorMode mode = DetectorMode::kLinkedOnly;
  // Flag when lambda_min < -psd_tolerance * max(1, |H|_F).
  double psd_tolerance = 1e-6;
  // Reject audits whose difference system has 2-norm condition above this.
  double condition_cap = 1e8;
  // Two difference vectors with |cos| >= 1 - threshold count as collinear.
  double collinearity_threshold = 1e-12;
  // Reject audits whose smallest singular value of the difference matrix,
  // relative to max(1, largest point or gradient entry), is below this.
  // The differences would then be at rounding level.
  double min_relative_separation = 1e-10;
  PointStrategy strategy = PointStrategy::kEvenlySpaced;
  std::vector<int> custom_indices;
  // Evenly spaced only: also audit a set spread over [floor(k/2), k].
  bool half_window = true;
  AuditCadence cadence = AuditCadence::kEveryIteration;
  bool stop_on_detection = true;

  void validate() const;

  // Single point set per audit, no conditioning or resolution gate; only
  // the collinearity gate and finiteness of H remain.
  static DetectorConfig single_set(PointStrategy strategy);
};

// Gradient of the audited objective at `point`, recovered from iterate i.
struct GradientSample {
  int index = 0;
  Vector point;
  Vector gradient;
};

struct HessianEstimate {
  Matrix H;
  double lambda_min = 0;  // of (H + H') / 2
  double condition = 0;   // 2-norm condition of the difference system
  std::vector<int> indices;
};

struct AuditRecord {
  int k = 0;
  std::vector<int> indices;  // comparison points, reference last
  AuditStatus status = AuditStatus::kAccepted;
  double condition = std::numeric_limits<double>::infinity();
  double separation = 0;  // sigma_min of the differences over the data scale
  std::optional<HessianEstimate> estimate;
  bool flagged = false;
  std::string note;
};

struct DetectionReport {
  Verdict verdict = Verdict::kInconclusive;
  DetectorMode mode = DetectorMode::kLinkedOnly;
  std::vector<AuditRecord> audits;
  std::optional<int> first_detection;
  int audits_total = 0;
  int rejected_conditioning = 0;
  int rejected_collinearity = 0;
  double min_lambda_seen = std::numeric_limits<double>::infinity();
  int unaudited_dimensions = 0;  // n - p in linked-only mode
  std::string note;

  bool detected() const { return verdict == Verdict::kAttackDetected; }
};

class InsufficientIterates : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CollinearityRejection : public std::runtime_error {
 public:
  CollinearityRejection(const std::string& what, int first, int second)
      : std::runtime_error(what), first_(first), second_(second) {}
  // Positions (in the comparison list) of the offending pair.
  int first() const { return first_; }
  int second() const { return second_; }

 private:
  int first_;
  int second_;
};

class ConditioningRejection : public std::runtime_error {
 public:
  ConditioningRejection(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// -rho A'(u^i - B(z^i - z^{i-1})), or -rho A' u^i when the trace records
// that x updates second. Linked-only mode returns the point Ax^i and the
// p-vector inside the A' product. Needs 1 <= i <= iterations.
GradientSample recover_gradient(const AdmmTrace& trace, int i,
                                DetectorMode mode = DetectorMode::kFull);

// `count` indices ending at k. Evenly spaced ones are
// round(lower + j (k - lower) / (count - 1)); they are distinct only when
// k - lower + 1 >= count, otherwise InsufficientIterates.
std::vector<int> select_points(int k, int count, PointStrategy strategy,
                               int lower = 2,
                               const std::vector<int>& custom = {});

struct AssembledSystem {
  Matrix D;      // l^2 x l^2, rows (comparison point, dimension)
  Vector G;      // l^2
  Matrix Delta;  // l x l, row a = reference.point - samples[a].point
  Matrix dG;     // l x l, row a = reference.gradient - samples[a].gradient
  double data_scale = 1;
};

// D vec(H) = G with vec row-major, i.e. H (x_ref - x_a) = g_ref - g_a.
// Throws CollinearityRejection for a zero or parallel pair of differences.
AssembledSystem assemble_system(const std::vector<GradientSample>& samples,
                                const GradientSample& reference,
                                double collinearity_threshold = 1e-12);

// Dense solve of D vec(H) = G. Throws ConditioningRejection when the
// condition of D exceeds the cap or the solution is not finite.
HessianEstimate solve_hessian(const Matrix& D, const Vector& G,
                              double condition_cap = 1e8);

// Same result from the l x l blocks: D is a row permutation of
// I kron Delta, so cond(D) = cond(Delta) and Delta H' = dG.
HessianEstimate solve_hessian_blocks(const Matrix& Delta, const Matrix& dG,
                                     double condition_cap = 1e8);

// Audits of iterate k under cfg (one or two point sets).
std::vector<AuditRecord> audit_iterate(const AdmmTrace& trace, int k,
                                       const DetectorConfig& cfg);

DetectionReport detect(const AdmmTrace& trace, const DetectorConfig& cfg);

// Incremental form for use as an engine hook: each call audits the newest
// iterate only, so the at-horizon cadence does nothing here. With
// abort_on_detection the hook stops the run at the first flag.
class OnlineDetector {
 public:
  OnlineDetector(DetectorConfig cfg, bool abort_on_detection)
      : cfg_(std::move(cfg)), abort_(abort_on_detection) {}

  bool operator()(const AdmmTrace& prefix);
  const DetectionReport& report() const { return report_; }
  // Applies the inconclusive rule once the run is over.
  DetectionReport finish() const;

 private:
  DetectorConfig cfg_;
  bool abort_;
  bool started_ = false;
  DetectionReport report_;
};

}  // namespace admmguard

#endif  // ADMMGUARD_DETECTOR_H_
