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

#include "admmguard/detector.h"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "admmguard/errors.h"

namespace admmguard {
namespace {

int audited_dimension(const AdmmTrace& trace, DetectorMode mode) {
  return mode == DetectorMode::kFull ? trace.problem->n() : trace.problem->p();
}

double max_abs(const Vector& v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

// Fills condition, separation and (on acceptance) the estimate.
void evaluate(const AssembledSystem& sys, const std::vector<int>& indices,
              const DetectorConfig& cfg, AuditRecord& rec) {
  Eigen::JacobiSVD<Matrix> svd(sys.Delta);
  const Vector& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  rec.condition = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  rec.separation = smin / sys.data_scale;
  if (rec.separation < cfg.min_relative_separation) {
    rec.status = AuditStatus::kRejectedConditioning;
    rec.note = "differences at rounding level";
    return;
  }
  if (rec.condition > cfg.condition_cap) {
    rec.status = AuditStatus::kRejectedConditioning;
    rec.note = "condition above cap";
    return;
  }
  const Matrix Ht = sys.Delta.partialPivLu().solve(sys.dG);
  if (!Ht.allFinite()) {
    rec.status = AuditStatus::kRejectedConditioning;
    rec.note = "non-finite Hessian";
    return;
  }
  HessianEstimate est;
  est.H = Ht.transpose();
  est.lambda_min = min_eigenvalue(0.5 * (est.H + est.H.transpose()));
  est.condition = rec.condition;
  est.indices = indices;
  const double tau = cfg.psd_tolerance * std::max(1.0, est.H.norm());
  rec.status = AuditStatus::kAccepted;
  rec.flagged = est.lambda_min < -tau;
  rec.estimate = std::move(est);
}

AuditRecord audit_points(const AdmmTrace& trace, int k,
                         const std::vector<int>& indices,
                         const DetectorConfig& cfg) {
  AuditRecord rec;
  rec.k = k;
  rec.indices = indices;
  std::vector<GradientSample> samples;
  for (int i : indices) {
    samples.push_back(
        recover_gradient(trace, i, cfg.mode));
  }
  const GradientSample reference = samples.back();
  samples.pop_back();
  try {
    const AssembledSystem sys =
        assemble_system(samples, reference, cfg.collinearity_threshold);
    evaluate(sys, indices, cfg, rec);
  } catch (const CollinearityRejection& e) {
    rec.status = AuditStatus::kRejectedCollinear;
    rec.note = e.what();
  }
  return rec;
}

void tally(DetectionReport& report, const AuditRecord& rec) {
  ++report.audits_total;
  if (rec.status == AuditStatus::kRejectedCollinear) ++report.rejected_collinearity;
  if (rec.status == AuditStatus::kRejectedConditioning) ++report.rejected_conditioning;
  if (rec.estimate) {
    report.min_lambda_seen = std::min(report.min_lambda_seen, rec.estimate->lambda_min);
  }
  if (rec.flagged) {
    report.verdict = Verdict::kAttackDetected;
    if (!report.first_detection) report.first_detection = rec.k;
  }
  report.audits.push_back(rec);
}

void conclude(DetectionReport& report) {
  if (report.verdict == Verdict::kAttackDetected) return;
  const int accepted = report.audits_total - report.rejected_collinearity -
                       report.rejected_conditioning;
  report.verdict = accepted > 0 ? Verdict::kNoAttackDetected : Verdict::kInconclusive;
}

DetectionReport empty_report(const AdmmTrace& trace, const DetectorConfig& cfg) {
  DetectionReport report;
  report.mode = cfg.mode;
  report.verdict = Verdict::kNoAttackDetected;
  if (cfg.mode == DetectorMode::kLinkedOnly) {
    report.unaudited_dimensions = trace.problem->n() - trace.problem->p();
    if (report.unaudited_dimensions > 0) {
      report.note = "linked-only audit: " +
                    std::to_string(report.unaudited_dimensions) +
                    " private dimension(s) not audited";
    }
  }
  return report;
}

}  // namespace

const char* to_string(DetectorMode v) {
  return v == DetectorMode::kFull ? "full" : "linked_only";
}
const char* to_string(PointStrategy v) {
  switch (v) {
    case PointStrategy::kEvenlySpaced: return "evenly_spaced";
    case PointStrategy::kMostRecent: return "most_recent";
    case PointStrategy::kCustom: return "custom";
  }
  return "?";
}
const char* to_string(AuditCadence v) {
  return v == AuditCadence::kEveryIteration ? "every_iteration" : "at_horizon";
}
const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kAttackDetected: return "attack_detected";
    case Verdict::kNoAttackDetected: return "no_attack_detected";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "?";
}
const char* to_string(AuditStatus v) {
  switch (v) {
    case AuditStatus::kAccepted: return "accepted";
    case AuditStatus::kRejectedCollinear: return "rejected_collinear";
    case AuditStatus::kRejectedConditioning: return "rejected_conditioning";
  }
  return "?";
}

DetectorMode detector_mode_from_string(const std::string& s) {
  if (s == "full") return DetectorMode::kFull;
  if (s == "linked_only") return DetectorMode::kLinkedOnly;
  throw ConfigError("unknown detector mode '" + s + "'");
}
PointStrategy point_strategy_from_string(const std::string& s) {
  if (s == "evenly_spaced") return PointStrategy::kEvenlySpaced;
  if (s == "most_recent") return PointStrategy::kMostRecent;
  if (s == "custom") return PointStrategy::kCustom;
  throw ConfigError("unknown point strategy '" + s + "'");
}
AuditCadence audit_cadence_from_string(const std::string& s) {
  if (s == "every_iteration") return AuditCadence::kEveryIteration;
  if (s == "at_horizon") return AuditCadence::kAtHorizon;
  throw ConfigError("unknown audit cadence '" + s + "'");
}
Verdict verdict_from_string(const std::string& s) {
  if (s == "attack_detected") return Verdict::kAttackDetected;
  if (s == "no_attack_detected") return Verdict::kNoAttackDetected;
  if (s == "inconclusive") return Verdict::kInconclusive;
  throw ConfigError("unknown verdict '" + s + "'");
}

void DetectorConfig::validate() const {
  if (!(psd_tolerance >= 0)) throw ConfigError("psd_tolerance must be >= 0");
  if (!(condition_cap > 1)) throw ConfigError("condition_cap must be > 1");
  if (!(collinearity_threshold >= 0 && collinearity_threshold < 1)) {
    throw ConfigError("collinearity_threshold must be in [0, 1)");
  }
  if (!(min_relative_separation >= 0)) {
    throw ConfigError("min_relative_separation must be >= 0");
  }
  if (strategy == PointStrategy::kCustom && custom_indices.empty()) {
    throw ConfigError("custom strategy needs indices");
  }
}

DetectorConfig DetectorConfig::single_set(PointStrategy strategy) {
  DetectorConfig cfg;
  cfg.strategy = strategy;
  cfg.condition_cap = std::numeric_limits<double>::infinity();
  cfg.min_relative_separation = 0;
  cfg.half_window = false;
  return cfg;
}

GradientSample recover_gradient(const AdmmTrace& trace, int i,
                                DetectorMode mode) {
  if (!trace.problem) throw StructuralError("trace has no problem");
  if (i < 1 || i > trace.iterations()) {
    throw StructuralError("gradient recovery needs iterates " +
                          std::to_string(i - 1) + " and " + std::to_string(i));
  }
  const LinkingConstraint& link = trace.problem->link;
  const TraceEntry& cur = trace.at(i);
  Vector inner = cur.u;
  if (trace.x_updates_first) inner -= link.B * (cur.z - trace.at(i - 1).z);
  GradientSample s;
  s.index = i;
  if (mode == DetectorMode::kFull) {
    s.point = cur.x;
    s.gradient = -trace.rho * (link.A.transpose() * inner);
  } else {
    s.point = link.A * cur.x;
    s.gradient = -trace.rho * inner;
  }
  return s;
}

std::vector<int> select_points(int k, int count, PointStrategy strategy,
                               int lower, const std::vector<int>& custom) {
  if (count < 2) throw StructuralError("need at least two points");
  std::vector<int> out;
  switch (strategy) {
    case PointStrategy::kEvenlySpaced:
      if (k - lower + 1 < count) {
        throw InsufficientIterates("iterate " + std::to_string(k) +
                                   " is too early for " + std::to_string(count) +
                                   " points from " + std::to_string(lower));
      }
      for (int j = 0; j < count; ++j) {
        const double t = lower + static_cast<double>(j) * (k - lower) / (count - 1);
        out.push_back(static_cast<int>(std::floor(t + 0.5)));
      }
      return out;
    case PointStrategy::kMostRecent:
      if (k - count + 1 < lower) {
        throw InsufficientIterates("iterate " + std::to_string(k) +
                                   " is too early for " + std::to_string(count) +
                                   " recent points");
      }
      for (int i = k - count + 1; i <= k; ++i) out.push_back(i);
      return out;
    case PointStrategy::kCustom:
      if (static_cast<int>(custom.size()) != count) {
        throw ConfigError("custom strategy needs exactly " +
                          std::to_string(count) + " indices");
      }
      for (size_t j = 0; j < custom.size(); ++j) {
        if (custom[j] < 1 || custom[j] > k || (j && custom[j] == custom[j - 1])) {
          throw InsufficientIterates("custom index " + std::to_string(custom[j]) +
                                     " unusable at iterate " + std::to_string(k));
        }
      }
      return custom;
  }
  return out;
}

AssembledSystem assemble_system(const std::vector<GradientSample>& samples,
                                const GradientSample& reference,
                                double collinearity_threshold) {
  const int l = static_cast<int>(reference.point.size());
  if (static_cast<int>(samples.size()) != l ||
      reference.gradient.size() != l) {
    throw StructuralError("assemble_system: need l comparison points for an "
                          "l-dimensional Hessian");
  }
  AssembledSystem sys;
  sys.Delta.resize(l, l);
  sys.dG.resize(l, l);
  sys.data_scale = std::max({1.0, max_abs(reference.point),
                             max_abs(reference.gradient)});
  for (int a = 0; a < l; ++a) {
    if (samples[a].point.size() != l || samples[a].gradient.size() != l) {
      throw StructuralError("assemble_system: sample dimension mismatch");
    }
    sys.Delta.row(a) = (reference.point - samples[a].point).transpose();
    sys.dG.row(a) = (reference.gradient - samples[a].gradient).transpose();
    sys.data_scale = std::max({sys.data_scale, max_abs(samples[a].point),
                               max_abs(samples[a].gradient)});
  }
  std::vector<double> norms(l);
  for (int a = 0; a < l; ++a) {
    norms[a] = sys.Delta.row(a).norm();
    if (norms[a] == 0) {
      throw CollinearityRejection("difference " + std::to_string(a) +
                                  " is zero", a, a);
    }
  }
  for (int a = 0; a < l; ++a) {
    for (int b = a + 1; b < l; ++b) {
      const double cosine =
          sys.Delta.row(a).dot(sys.Delta.row(b)) / (norms[a] * norms[b]);
      if (std::abs(cosine) >= 1.0 - collinearity_threshold) {
        throw CollinearityRejection("differences " + std::to_string(a) +
                                    " and " + std::to_string(b) +
                                    " are collinear", a, b);
      }
    }
  }
  sys.D = Matrix::Zero(l * l, l * l);
  sys.G.resize(l * l);
  for (int a = 0; a < l; ++a) {
    for (int r = 0; r < l; ++r) {
      sys.D.block(a * l + r, r * l, 1, l) = sys.Delta.row(a);
      sys.G[a * l + r] = sys.dG(a, r);
    }
  }
  return sys;
}

HessianEstimate solve_hessian(const Matrix& D, const Vector& G,
                              double condition_cap) {
  const Eigen::Index n2 = D.rows();
  const int l = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n2))));
  if (D.cols() != n2 || G.size() != n2 || static_cast<Eigen::Index>(l) * l != n2) {
    throw StructuralError("solve_hessian: D must be l^2 x l^2");
  }
  Eigen::JacobiSVD<Matrix> svd(D);
  const Vector& sv = svd.singularValues();
  const double cond = sv(n2 - 1) > 0 ? sv(0) / sv(n2 - 1)
                                     : std::numeric_limits<double>::infinity();
  if (cond > condition_cap) {
    throw ConditioningRejection("difference system condition above cap", cond);
  }
  const Vector h = D.partialPivLu().solve(G);
  if (!h.allFinite()) throw ConditioningRejection("non-finite Hessian", cond);
  HessianEstimate est;
  est.H.resize(l, l);
  for (int r = 0; r < l; ++r)
    for (int c = 0; c < l; ++c) est.H(r, c) = h[r * l + c];
  est.lambda_min = min_eigenvalue(0.5 * (est.H + est.H.transpose()));
  est.condition = cond;
  return est;
}

HessianEstimate solve_hessian_blocks(const Matrix& Delta, const Matrix& dG,
                                     double condition_cap) {
  AssembledSystem sys;
  sys.Delta = Delta;
  sys.dG = dG;
  DetectorConfig cfg;
  cfg.condition_cap = condition_cap;
  cfg.min_relative_separation = 0;
  AuditRecord rec;
  evaluate(sys, {}, cfg, rec);
  if (!rec.estimate) throw ConditioningRejection(rec.note, rec.condition);
  return *rec.estimate;
}

std::vector<AuditRecord> audit_iterate(const AdmmTrace& trace, int k,
                                       const DetectorConfig& cfg) {
  const int l = audited_dimension(trace, cfg.mode);
  const int count = l + 1;
  std::vector<std::vector<int>> sets;
  sets.push_back(select_points(k, count, cfg.strategy, 2, cfg.custom_indices));
  if (cfg.strategy == PointStrategy::kEvenlySpaced && cfg.half_window &&
      k - k / 2 + 1 >= count) {
    auto half = select_points(k, count, cfg.strategy, k / 2);
    if (half != sets.front()) sets.push_back(std::move(half));
  }
  std::vector<AuditRecord> out;
  for (const auto& s : sets) out.push_back(audit_points(trace, k, s, cfg));
  return out;
}

DetectionReport detect(const AdmmTrace& trace, const DetectorConfig& cfg) {
  cfg.validate();
  if (!trace.problem) throw StructuralError("trace has no problem");
  DetectionReport report = empty_report(trace, cfg);
  const int l = audited_dimension(trace, cfg.mode);
  const int K = trace.iterations();
  const int first = cfg.cadence == AuditCadence::kAtHorizon ? K : l + 2;
  if (K < l + 2) {
    report.verdict = Verdict::kInconclusive;
    report.note = "need " + std::to_string(l + 2) + " iterates, trace has " +
                  std::to_string(K);
    return report;
  }
  for (int k = first; k <= K; ++k) {
    for (const AuditRecord& rec : audit_iterate(trace, k, cfg)) {
      tally(report, rec);
      if (rec.flagged && cfg.stop_on_detection) return report;
    }
  }
  conclude(report);
  return report;
}

bool OnlineDetector::operator()(const AdmmTrace& prefix) {
  if (!started_) {
    cfg_.validate();
    report_ = empty_report(prefix, cfg_);
    started_ = true;
  }
  const int k = prefix.iterations();
  const int l = audited_dimension(prefix, cfg_.mode);
  if (cfg_.cadence == AuditCadence::kAtHorizon || k < l + 2) return false;
  if (report_.detected() && cfg_.stop_on_detection) return abort_;
  for (const AuditRecord& rec : audit_iterate(prefix, k, cfg_)) {
    tally(report_, rec);
    if (rec.flagged && cfg_.stop_on_detection) break;
  }
  return abort_ && report_.detected();
}

DetectionReport OnlineDetector::finish() const {
  DetectionReport out = report_;
  conclude(out);
  return out;
}

}  // namespace admmguard
