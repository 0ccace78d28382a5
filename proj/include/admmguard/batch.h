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

#ifndef ADMMGUARD_BATCH_H_
#define ADMMGUARD_BATCH_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "admmguard/admm.h"
#include "admmguard/attacks.h"
#include "admmguard/chain.h"
#include "admmguard/detector.h"
#include "admmguard/generator.h"
#include "admmguard/serialization.h"

namespace admmguard {

enum class Topology { kAggregator, kChain };

const char* to_string(Topology t);
Topology topology_from_string(const std::string& s);

// With an attack, every generated problem is solved twice: once honestly
// (the unattacked cohort) and once under attack. Row ids 0..count-1 are
// unattacked, count..2count-1 attacked on the same problems.
struct BatchConfig {
  int count = 500;
  GeneratorConfig generator;
  AdmmConfig admm;
  std::optional<AttackSpec> attack;
  DetectorConfig detector;
  bool detect = true;
  bool mitigation = false;
  Topology topology = Topology::kAggregator;
  ChainGeneratorConfig chain;
  int parallelism = 1;
  std::string output_dir = "admmguard_out";

  void validate() const;

  // 500 + 500 under the +-10% Bernoulli multiplicative attack.
  static BatchConfig confusion_study();
  // 10,000 unattacked problems, convergence statistics only.
  static BatchConfig long_convergence();
};

// Flat key/value form, used for config files and the replay echo.
Json batch_config_to_json(const BatchConfig& cfg);
// Applies keys onto `base`. Unknown keys throw ConfigError. A "preset" key
// (confusion | long) replaces the base before the other keys apply.
BatchConfig batch_config_from_json(const Json& j, BatchConfig base = {});

struct BatchRow {
  int id = 0;
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  int p = 0;
  bool attacked = false;
  bool converged = false;
  int iterations = 0;
  std::string verdict;  // detector verdict, "not_run" or "error"
  std::optional<int> first_detection;
  std::string error;
};

struct CohortCounts {
  int detected = 0;
  int not_detected = 0;
  int total() const { return detected + not_detected; }
};

struct BatchResults {
  BatchConfig config;
  std::vector<BatchRow> rows;  // sorted by id
  CohortCounts unattacked;
  CohortCounts attacked;
  // iterations -> (unattacked count, attacked count)
  std::map<int, std::pair<int, int>> histogram;
  int completed = 0;
  int failed = 0;
};

BatchResults run_batch(const BatchConfig& cfg);

std::string confusion_csv(const BatchResults& r);
std::string rates_csv(const BatchResults& r);
std::string rows_csv(const BatchResults& r);
std::string histogram_csv(const BatchResults& r);

// Writes confusion.csv, rates.csv, rows.csv, histogram.csv and
// config_echo.json into `dir`, creating it if needed.
void emit_report(const BatchResults& results, const std::string& dir);

}  // namespace admmguard

#endif  // ADMMGUARD_BATCH_H_
