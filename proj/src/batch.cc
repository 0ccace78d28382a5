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

#include "admmguard/batch.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <thread>

#include "admmguard/errors.h"
#include "admmguard/hooks.h"

namespace admmguard {
namespace {

bool needs_bounds(const BatchConfig& cfg) {
  return cfg.mitigation ||
         (cfg.attack && (cfg.attack->vector == AttackVector::kLinkingInfeasibility ||
                         cfg.attack->vector == AttackVector::kPrivateInfeasibility));
}

AttackSpec instance_attack(const AttackSpec& spec, std::uint64_t index) {
  AttackSpec s = spec;
  s.seed = derive_seed(spec.seed, index);
  return s;
}

void fill_verdict(BatchRow& row, const std::optional<DetectionReport>& report) {
  if (!report) {
    row.verdict = "not_run";
    return;
  }
  row.verdict = to_string(report->verdict);
  row.first_detection = report->first_detection;
}

std::vector<BatchRow> aggregator_instance(const BatchConfig& cfg, int i) {
  const GeneratedProblem g = generate_instance(cfg.generator, i);
  auto problem = std::make_shared<const QuadraticProblem>(g.problem);
  BatchRow base;
  base.seed = g.seed;
  base.n = problem->n();
  base.m = problem->m();
  base.p = problem->p();

  std::optional<BoundSets> bounds;
  if (needs_bounds(cfg)) {
    const CentralSolution sol = central_solution(*problem);
    bounds = make_bounds(*problem, sol.x, sol.z);
  }
  AdmmHooks hooks;
  if (cfg.mitigation) hooks.mitigator = make_projection_hook(problem->link, bounds->pub);

  auto solve = [&](BatchRow row, const AdmmHooks& h,
                   const std::optional<AttackSpec>& spec) {
    try {
      AdmmTrace trace = run_admm(problem, cfg.admm, h);
      trace.attack = spec;
      row.converged = trace.converged();
      row.iterations = trace.iterations();
      std::optional<DetectionReport> report;
      if (cfg.detect) report = detect(trace, cfg.detector);
      fill_verdict(row, report);
    } catch (const std::exception& e) {
      row.verdict = "error";
      row.error = e.what();
      row.iterations = cfg.admm.max_iterations;
    }
    return row;
  };

  std::vector<BatchRow> out;
  BatchRow honest = base;
  honest.id = i;
  out.push_back(solve(honest, hooks, std::nullopt));
  if (cfg.attack) {
    BatchRow attacked = base;
    attacked.id = cfg.count + i;
    attacked.attacked = true;
    const AttackSpec spec = instance_attack(*cfg.attack, i);
    AdmmHooks h = hooks;
    try {
      h.attack = make_attack_hook(spec, *problem, bounds ? &*bounds : nullptr,
                                  cfg.admm.rho);
      out.push_back(solve(attacked, h, spec));
    } catch (const std::exception& e) {
      attacked.verdict = "error";
      attacked.error = e.what();
      attacked.iterations = cfg.admm.max_iterations;
      out.push_back(attacked);
    }
  }
  return out;
}

std::vector<BatchRow> chain_instance(const BatchConfig& cfg, int i) {
  ChainGeneratorConfig gc = cfg.chain;
  gc.seed = derive_seed(cfg.generator.seed, i);
  gc.scale = cfg.generator.scale;
  gc.curvature_floor = cfg.generator.curvature_floor;
  RandomStream rng(gc.seed);
  ChainProblem chain = generate_chain(gc, rng);
  BatchRow base;
  base.seed = gc.seed;
  base.n = chain.nodes[0].dim();
  base.m = chain.nodes[1].dim();
  base.p = chain.links[0].p();

  ChainConfig cc;
  cc.admm = cfg.admm;
  cc.project_received = cfg.mitigation;

  auto solve = [&](BatchRow row, const ChainProblem& ch) {
    try {
      const ChainResult res = run_decentralized(ch, cc);
      row.converged = res.converged();
      row.iterations = res.rounds;
      if (cfg.detect) {
        bool hit = !res.alarms.empty();
        std::optional<int> first;
        if (hit) first = res.alarms.front().round;
        bool any_accepted = hit;
        for (const NodeView& v : res.views) {
          const DetectionReport rep = node_audit(res, v.owner, v.neighbor, cfg.detector);
          if (rep.verdict != Verdict::kInconclusive) any_accepted = true;
          if (rep.detected()) {
            hit = true;
            if (!first || *rep.first_detection < *first) first = rep.first_detection;
          }
        }
        row.verdict = to_string(hit ? Verdict::kAttackDetected
                                    : any_accepted ? Verdict::kNoAttackDetected
                                                   : Verdict::kInconclusive);
        row.first_detection = first;
      } else {
        row.verdict = "not_run";
      }
    } catch (const std::exception& e) {
      row.verdict = "error";
      row.error = e.what();
      row.iterations = cfg.admm.max_iterations;
    }
    return row;
  };

  std::vector<BatchRow> out;
  BatchRow honest = base;
  honest.id = i;
  out.push_back(solve(honest, chain));
  if (cfg.attack) {
    BatchRow attacked = base;
    attacked.id = cfg.count + i;
    attacked.attacked = true;
    ChainProblem hostile = chain;
    const int target = chain.size() > 2 ? 1 : 0;
    hostile.nodes[target].attack = instance_attack(*cfg.attack, i);
    hostile.nodes[target].attack_link = target;
    out.push_back(solve(attacked, hostile));
  }
  return out;
}

std::string fmt_rate(int num, int den) {
  if (den == 0) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(num) / den);
  return buf;
}

}  // namespace

const char* to_string(Topology t) {
  return t == Topology::kAggregator ? "aggregator" : "chain";
}

Topology topology_from_string(const std::string& s) {
  if (s == "aggregator") return Topology::kAggregator;
  if (s == "chain") return Topology::kChain;
  throw ConfigError("unknown topology '" + s + "'");
}

void BatchConfig::validate() const {
  if (count < 1) throw ConfigError("count must be >= 1");
  if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
  generator.validate();
  admm.validate();
  if (attack) attack->validate();
  if (detect) detector.validate();
}

BatchConfig BatchConfig::confusion_study() {
  BatchConfig cfg;
  cfg.count = 500;
  cfg.attack = AttackSpec{};
  return cfg;
}

BatchConfig BatchConfig::long_convergence() {
  BatchConfig cfg;
  cfg.count = 10000;
  cfg.detect = false;
  return cfg;
}

Json batch_config_to_json(const BatchConfig& c) {
  const AttackSpec a = c.attack.value_or(AttackSpec{});
  const DetectorConfig& d = c.detector;
  Json j;
  j["count"] = c.count;
  j["seed"] = c.generator.seed;
  j["maxdim"] = c.generator.maxdim;
  j["scale"] = c.generator.scale;
  j["curvature_floor"] = c.generator.curvature_floor;
  j["rho"] = c.admm.rho;
  j["eps_pri"] = c.admm.eps_pri;
  j["eps_dual"] = c.admm.eps_dual;
  j["max_iterations"] = c.admm.max_iterations;
  j["z0"] = c.admm.z0;
  j["u0"] = c.admm.u0;
  j["attack"] = c.attack ? to_string(a.vector) : "none";
  j["magnitude"] = a.magnitude;
  j["distribution"] = to_string(a.distribution);
  j["start_iteration"] = a.start_iteration;
  j["attack_seed"] = a.seed;
  j["scaling"] = a.scaling;
  j["margin_fraction"] = a.margin_fraction;
  j["private_mode"] = to_string(a.mode);
  j["detect"] = c.detect;
  const Json detector = detector_config_to_json(d);
  for (const auto& [k, v] : detector.items()) j[k] = v;
  j["mitigation"] = c.mitigation;
  j["topology"] = to_string(c.topology);
  j["chain_nodes"] = c.chain.nodes;
  j["chain_max_link"] = c.chain.max_link;
  j["chain_max_extra"] = c.chain.max_extra;
  j["parallelism"] = c.parallelism;
  j["output_dir"] = c.output_dir;
  return j;
}

BatchConfig batch_config_from_json(const Json& j, BatchConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (j.contains("preset")) {
    const std::string p = j["preset"].get<std::string>();
    if (p == "confusion") base = BatchConfig::confusion_study();
    else if (p == "long") base = BatchConfig::long_convergence();
    else throw ConfigError("unknown preset '" + p + "'");
  }
  if (j.contains("detector_preset")) {
    const std::string p = j["detector_preset"].get<std::string>();
    if (p != "single_set") throw ConfigError("unknown detector_preset '" + p + "'");
    base.detector = DetectorConfig::single_set(base.detector.strategy);
  }
  BatchConfig c = base;
  AttackSpec a = base.attack.value_or(AttackSpec{});
  bool has_attack = base.attack.has_value();
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "preset" || key == "detector_preset") continue;
      else if (key == "count") c.count = v.get<int>();
      else if (key == "seed") c.generator.seed = v.get<std::uint64_t>();
      else if (key == "maxdim") c.generator.maxdim = v.get<int>();
      else if (key == "scale") c.generator.scale = v.get<double>();
      else if (key == "curvature_floor") c.generator.curvature_floor = v.get<double>();
      else if (key == "rho") c.admm.rho = v.get<double>();
      else if (key == "eps_pri") c.admm.eps_pri = v.get<double>();
      else if (key == "eps_dual") c.admm.eps_dual = v.get<double>();
      else if (key == "max_iterations") c.admm.max_iterations = v.get<int>();
      else if (key == "z0") c.admm.z0 = v.get<double>();
      else if (key == "u0") c.admm.u0 = v.get<double>();
      else if (key == "attack") {
        const std::string name = v.get<std::string>();
        has_attack = name != "none";
        if (has_attack) a.vector = attack_vector_from_string(name);
      }
      else if (key == "magnitude") a.magnitude = v.get<double>();
      else if (key == "distribution") a.distribution = noise_distribution_from_string(v.get<std::string>());
      else if (key == "start_iteration") a.start_iteration = v.get<int>();
      else if (key == "attack_seed") a.seed = v.get<std::uint64_t>();
      else if (key == "scaling") a.scaling = v.get<double>();
      else if (key == "margin_fraction") a.margin_fraction = v.get<double>();
      else if (key == "private_mode") a.mode = private_mode_from_string(v.get<std::string>());
      else if (key == "detect") c.detect = v.get<bool>();
      else if (key == "detector_mode") c.detector.mode = detector_mode_from_string(v.get<std::string>());
      else if (key == "psd_tolerance") c.detector.psd_tolerance = v.get<double>();
      else if (key == "condition_cap")
        c.detector.condition_cap = v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>();
      else if (key == "collinearity_threshold") c.detector.collinearity_threshold = v.get<double>();
      else if (key == "min_relative_separation") c.detector.min_relative_separation = v.get<double>();
      else if (key == "strategy") c.detector.strategy = point_strategy_from_string(v.get<std::string>());
      else if (key == "custom_indices") c.detector.custom_indices = v.get<std::vector<int>>();
      else if (key == "half_window") c.detector.half_window = v.get<bool>();
      else if (key == "cadence") c.detector.cadence = audit_cadence_from_string(v.get<std::string>());
      else if (key == "stop_on_detection") c.detector.stop_on_detection = v.get<bool>();
      else if (key == "mitigation") c.mitigation = v.get<bool>();
      else if (key == "topology") c.topology = topology_from_string(v.get<std::string>());
      else if (key == "chain_nodes") c.chain.nodes = v.get<int>();
      else if (key == "chain_max_link") c.chain.max_link = v.get<int>();
      else if (key == "chain_max_extra") c.chain.max_extra = v.get<int>();
      else if (key == "parallelism") c.parallelism = v.get<int>();
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.attack = has_attack ? std::optional<AttackSpec>(a) : std::nullopt;
  c.validate();
  return c;
}

BatchResults run_batch(const BatchConfig& cfg) {
  cfg.validate();
  BatchResults results;
  results.config = cfg;
  std::vector<std::vector<BatchRow>> slots(cfg.count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.count; i = next++) {
      try {
        slots[i] = cfg.topology == Topology::kAggregator ? aggregator_instance(cfg, i)
                                                         : chain_instance(cfg, i);
      } catch (const std::exception& e) {
        // Generation itself failed; record both cohorts as errors.
        BatchRow row;
        row.id = i;
        row.verdict = "error";
        row.error = e.what();
        row.iterations = cfg.admm.max_iterations;
        slots[i].push_back(row);
        if (cfg.attack) {
          row.id = cfg.count + i;
          row.attacked = true;
          slots[i].push_back(row);
        }
      }
    }
  };
  const int workers = std::min(cfg.parallelism, cfg.count);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& s : slots)
    for (auto& row : s) results.rows.push_back(std::move(row));
  std::sort(results.rows.begin(), results.rows.end(),
            [](const BatchRow& a, const BatchRow& b) { return a.id < b.id; });
  for (const BatchRow& row : results.rows) {
    CohortCounts& cohort = row.attacked ? results.attacked : results.unattacked;
    if (row.verdict == to_string(Verdict::kAttackDetected)) ++cohort.detected;
    else ++cohort.not_detected;
    auto& bin = results.histogram[row.iterations];
    (row.attacked ? bin.second : bin.first)++;
    if (row.verdict == "error") ++results.failed;
    else ++results.completed;
  }
  return results;
}

std::string confusion_csv(const BatchResults& r) {
  std::ostringstream out;
  out << "cohort,detected,not_detected,total\n";
  out << "attacked," << r.attacked.detected << ',' << r.attacked.not_detected << ','
      << r.attacked.total() << '\n';
  out << "unattacked," << r.unattacked.detected << ',' << r.unattacked.not_detected
      << ',' << r.unattacked.total() << '\n';
  return out.str();
}

std::string rates_csv(const BatchResults& r) {
  std::ostringstream out;
  out << "cohort,detected_rate,not_detected_rate\n";
  for (const auto& [name, c] : {std::pair{"attacked", r.attacked},
                                std::pair{"unattacked", r.unattacked}}) {
    out << name << ',' << fmt_rate(c.detected, c.total()) << ','
        << fmt_rate(c.not_detected, c.total()) << '\n';
  }
  return out.str();
}

std::string rows_csv(const BatchResults& r) {
  std::ostringstream out;
  out << "id,seed,n,m,p,attacked,converged,iterations,verdict,first_detection\n";
  for (const BatchRow& row : r.rows) {
    out << row.id << ',' << row.seed << ',' << row.n << ',' << row.m << ','
        << row.p << ',' << (row.attacked ? "true" : "false") << ','
        << (row.converged ? "true" : "false") << ',' << row.iterations << ','
        << row.verdict << ',';
    if (row.first_detection) out << *row.first_detection;
    out << '\n';
  }
  return out.str();
}

std::string histogram_csv(const BatchResults& r) {
  std::ostringstream out;
  out << "iterations,count_unattacked,count_attacked\n";
  for (const auto& [it, counts] : r.histogram) {
    out << it << ',' << counts.first << ',' << counts.second << '\n';
  }
  return out.str();
}

void emit_report(const BatchResults& results, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  write_file((base / "confusion.csv").string(), confusion_csv(results));
  write_file((base / "rates.csv").string(), rates_csv(results));
  write_file((base / "rows.csv").string(), rows_csv(results));
  write_file((base / "histogram.csv").string(), histogram_csv(results));
  write_file((base / "config_echo.json").string(),
             batch_config_to_json(results.config).dump(2) + "\n");
}

}  // namespace admmguard
