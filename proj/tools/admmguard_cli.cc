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

// Command-line front end: generate, solve, batch, audit.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "admmguard/admm.h"
#include "admmguard/batch.h"
#include "admmguard/detector.h"
#include "admmguard/errors.h"
#include "admmguard/generator.h"
#include "admmguard/hooks.h"
#include "admmguard/mitigator.h"
#include "admmguard/serialization.h"

namespace {

using namespace admmguard;

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::optional<std::string> env_output_dir() {
  const char* v = std::getenv("ADMMGUARD_OUTPUT_DIR");
  if (v && *v) return std::string(v);
  return std::nullopt;
}

// "key=value" with the value read as JSON when it parses, else as a string.
void apply_setting(Json& into, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects key=value, got '" + kv + "'");
  }
  const std::string key = kv.substr(0, eq);
  const std::string raw = kv.substr(eq + 1);
  Json value = Json::parse(raw, nullptr, false);
  into[key] = value.is_discarded() ? Json(raw) : value;
}

struct SolveOptions {
  std::string problem_file;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  int maxdim = 10;
  double scale = 1.0;
  AdmmConfig admm;
  std::string attack = "none";
  AttackSpec spec;
  std::string distribution = "bernoulli_sign";
  std::string private_mode = "inside_pub";
  bool mitigate = false;
  bool detect = false;
  bool abort_on_detection = false;
  std::string strategy = "evenly_spaced";
  std::string trace_out;
};

int run_generate(std::uint64_t seed, int count, GeneratorConfig gen,
                 std::string out_dir) {
  if (auto env = env_output_dir()) out_dir = *env;
  gen.seed = seed;
  if (count < 1) throw ConfigError("count must be >= 1");
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    const GeneratedProblem g = generate_instance(gen, i);
    const std::string text = problem_to_json(g.problem, g.seed, g.retries).dump();
    if (out_dir.empty()) {
      std::cout << text << '\n';
    } else {
      const auto path = std::filesystem::path(out_dir) /
                        ("problem_" + std::to_string(i) + ".json");
      write_file(path.string(), text + "\n");
    }
  }
  return 0;
}

int run_solve(SolveOptions o) {
  QuadraticProblem problem;
  if (!o.problem_file.empty()) {
    problem = problem_from_json(Json::parse(read_file(o.problem_file)));
  } else {
    GeneratorConfig gen;
    gen.seed = o.seed;
    gen.maxdim = o.maxdim;
    gen.scale = o.scale;
    problem = generate_instance(gen, o.index).problem;
  }
  auto shared = std::make_shared<const QuadraticProblem>(problem);
  const CentralSolution central = central_solution(problem);
  const BoundSets bounds = make_bounds(problem, central.x, central.z);

  AdmmHooks hooks;
  std::optional<AttackSpec> spec;
  if (o.attack != "none") {
    o.spec.vector = attack_vector_from_string(o.attack);
    o.spec.distribution = noise_distribution_from_string(o.distribution);
    o.spec.mode = private_mode_from_string(o.private_mode);
    spec = o.spec;
    hooks.attack = make_attack_hook(o.spec, problem, &bounds, o.admm.rho);
  }
  if (o.mitigate) hooks.mitigator = make_projection_hook(problem.link, bounds.pub);
  DetectorConfig dcfg;
  dcfg.strategy = point_strategy_from_string(o.strategy);
  auto online = std::make_shared<OnlineDetector>(dcfg, o.abort_on_detection);
  if (o.detect) hooks.detector = [online](const AdmmTrace& t) { return (*online)(t); };

  AdmmTrace trace = run_admm(shared, o.admm, hooks);
  trace.attack = spec;
  if (!o.trace_out.empty()) write_trace(trace, o.trace_out);

  Vector ours(problem.n() + problem.m());
  ours << trace.last().x, trace.last().z;
  Vector ref(problem.n() + problem.m());
  ref << central.x, central.z;

  Json out;
  out["termination"] = to_string(trace.termination);
  out["iterations"] = trace.iterations();
  out["r_norm"] = trace.last().r_norm;
  out["s_norm"] = trace.last().s_norm;
  out["objective"] = objective(problem, trace.last().x, trace.last().z);
  out["central_objective"] = objective(problem, central.x, central.z);
  out["distance_to_central"] = (ours - ref).norm();
  out["attack"] = spec ? attack_spec_to_json(*spec) : Json(nullptr);
  if (o.detect) out["detection"] = detection_report_to_json(online->finish());
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_batch_cmd(const std::string& config_file, const Json& overrides) {
  Json merged = Json::object();
  if (!config_file.empty()) {
    Json file = Json::parse(read_file(config_file), nullptr, false);
    if (file.is_discarded()) throw ConfigError("config file is not valid JSON");
    merged = file;
  }
  for (const auto& [k, v] : overrides.items()) merged[k] = v;
  BatchConfig cfg = batch_config_from_json(merged);
  if (auto env = env_output_dir()) cfg.output_dir = *env;
  const BatchResults results = run_batch(cfg);
  emit_report(results, cfg.output_dir);
  std::cout << confusion_csv(results) << rates_csv(results)
            << "completed=" << results.completed << " failed=" << results.failed
            << " output=" << cfg.output_dir << '\n';
  return 0;
}

int run_audit(const std::string& trace_file, const Json& overrides, bool verbose) {
  const AdmmTrace trace = read_trace(trace_file);
  const std::string problem_check = check_trace(trace);
  if (!problem_check.empty()) {
    throw std::runtime_error("trace is inconsistent: " + problem_check);
  }
  BatchConfig base;
  if (overrides.contains("detector_preset")) {
    base.detector = DetectorConfig::single_set(base.detector.strategy);
  }
  Json keys = overrides;
  keys.erase("detector_preset");
  const DetectorConfig cfg = batch_config_from_json(keys, base).detector;
  const DetectionReport report = detect(trace, cfg);
  Json out = detection_report_to_json(report);
  if (verbose) {
    Json audits = Json::array();
    for (const AuditRecord& a : report.audits) {
      Json j{{"k", a.k}, {"indices", a.indices}, {"status", to_string(a.status)}};
      if (a.estimate) j["lambda_min"] = a.estimate->lambda_min;
      j["flagged"] = a.flagged;
      audits.push_back(j);
    }
    out["audits"] = audits;
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADMM attack simulation, detection and mitigation"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "emit random problems as JSON");
  std::uint64_t gen_seed = 0;
  int gen_count = 1;
  GeneratorConfig gen_cfg;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--count", gen_count, "number of problems");
  gen->add_option("--maxdim", gen_cfg.maxdim, "upper bound for n and m");
  gen->add_option("--scale", gen_cfg.scale, "factor entry bound S");
  gen->add_option("--curvature-floor", gen_cfg.curvature_floor,
                  "redraw when least eigenvalue < floor * S^2");
  gen->add_option("--out-dir", gen_out, "write problem_<i>.json here (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "run ADMM on one problem");
  SolveOptions so;
  solve->add_option("--problem", so.problem_file, "problem JSON from generate");
  solve->add_option("--seed", so.seed, "generate instance from this master seed");
  solve->add_option("--index", so.index, "instance index under --seed");
  solve->add_option("--maxdim", so.maxdim);
  solve->add_option("--scale", so.scale);
  solve->add_option("--rho", so.admm.rho);
  solve->add_option("--eps-pri", so.admm.eps_pri);
  solve->add_option("--eps-dual", so.admm.eps_dual);
  solve->add_option("--max-iterations", so.admm.max_iterations);
  solve->add_option("--attack", so.attack,
                    "none|noise_injection|private_infeasibility|"
                    "linking_infeasibility|objective_distortion");
  solve->add_option("--magnitude", so.spec.magnitude);
  solve->add_option("--distribution", so.distribution, "bernoulli_sign|uniform");
  solve->add_option("--start-iteration", so.spec.start_iteration);
  solve->add_option("--attack-seed", so.spec.seed);
  solve->add_option("--scaling", so.spec.scaling);
  solve->add_option("--margin-fraction", so.spec.margin_fraction);
  solve->add_option("--private-mode", so.private_mode, "inside_pub|outside_pub");
  solve->add_flag("--mitigate", so.mitigate, "project received x onto the public feasible set");
  solve->add_flag("--detect", so.detect, "audit every iterate");
  solve->add_flag("--abort-on-detection", so.abort_on_detection);
  solve->add_option("--strategy", so.strategy, "evenly_spaced|most_recent");
  solve->add_option("--trace", so.trace_out, "write the trace (JSONL + .meta.json)");

  // batch
  auto* batch = app.add_subcommand("batch", "run a population and write reports");
  std::string batch_config;
  std::vector<std::string> batch_sets;
  Json batch_flags = Json::object();
  batch->add_option("--config", batch_config, "flat JSON config file");
  batch->add_option("--set", batch_sets, "key=value override, repeatable");
  auto flag_to = [&](CLI::App* sub, const std::string& name, const std::string& key,
                     const std::string& help) {
    sub->add_option_function<std::string>(
        name, [&batch_flags, key](const std::string& v) {
          Json parsed = Json::parse(v, nullptr, false);
          batch_flags[key] = parsed.is_discarded() ? Json(v) : parsed;
        },
        help);
  };
  flag_to(batch, "--preset", "preset", "confusion|long");
  flag_to(batch, "--count", "count", "problems per cohort");
  flag_to(batch, "--seed", "seed", "master seed");
  flag_to(batch, "--attack", "attack", "none or an attack vector");
  flag_to(batch, "--strategy", "strategy", "evenly_spaced|most_recent|custom");
  flag_to(batch, "--detector-preset", "detector_preset", "single_set");
  flag_to(batch, "--topology", "topology", "aggregator|chain");
  flag_to(batch, "--parallelism", "parallelism", "worker threads");
  flag_to(batch, "--output-dir", "output_dir", "report directory");
  flag_to(batch, "--mitigation", "mitigation", "true|false");

  // audit
  auto* audit = app.add_subcommand("audit", "run the detector on a saved trace");
  std::string audit_trace;
  std::vector<std::string> audit_sets;
  bool audit_verbose = false;
  bool audit_single = false;
  audit->add_option("--trace", audit_trace, "trace JSONL written by solve")->required();
  audit->add_option("--set", audit_sets, "detector key=value override, repeatable");
  audit->add_flag("--single-set", audit_single, "single point set, no conditioning gates");
  audit->add_flag("--verbose", audit_verbose, "list every audit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*gen) return run_generate(gen_seed, gen_count, gen_cfg, gen_out);
    if (*solve) return run_solve(so);
    if (*batch) {
      Json overrides = batch_flags;
      for (const auto& kv : batch_sets) apply_setting(overrides, kv);
      return run_batch_cmd(batch_config, overrides);
    }
    if (*audit) {
      Json overrides = Json::object();
      if (audit_single) overrides["detector_preset"] = "single_set";
      for (const auto& kv : audit_sets) apply_setting(overrides, kv);
      return run_audit(audit_trace, overrides, audit_verbose);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
