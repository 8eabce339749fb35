// Copyright 2026 The Authors.
//
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

// Multi-seed experiment orchestration and CSV export.

#ifndef AOI_EXPERIMENT_H_
#define AOI_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "aoi/model.h"
#include "aoi/policies.h"
#include "aoi/scenario.h"

namespace aoi {

// One line of results.csv. Missing numbers are written as NA.
struct ResultRow {
  std::string scenario_id;
  std::string policy;
  uint64_t seed = 0;
  int k = 0;
  int n = 0;
  double eta = 0.0;
  std::optional<double> avg_weighted_aoi_slots;
  std::optional<double> avg_weighted_aoi_ms;
  std::optional<double> lower_bound;
  std::optional<double> srp_closed_form;
  std::optional<double> mean_decision_time_us;
  std::optional<int64_t> frames;
  std::optional<int64_t> deliveries;
};

struct FailureRow {
  std::string scenario_id;
  std::string policy;
  uint64_t seed = 0;
  std::string status;  // "skipped", "not computed" or "failed"
  std::string message;
};

struct TimingRow {
  std::string scenario_id;
  uint64_t seed = 0;
  std::string program;  // "srp" or "lower_bound"
  uint64_t columns = 0;
  double objective = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  double wall_time_seconds = 0.0;
};

struct SuiteOptions {
  std::filesystem::path out_dir = "results";
  int workers = 0;  // 0 = hardware concurrency
  bool dump_trace = false;
  bool force_mw = false;
  bool write_files = true;
};

struct SuiteResult {
  std::vector<ResultRow> rows;
  std::vector<FailureRow> failures;
  std::vector<TimingRow> timings;
};

// Exact exhaustive search is skipped above this many APs unless forced.
inline constexpr int kMaxWeightApLimit = 6;

// Runs every (point, policy, seed) cell. Rows come back sorted by point,
// seed and policy order, independent of the worker count.
SuiteResult RunSuite(const ScenarioSpec& spec, const SuiteOptions& options);

extern const char* const kResultsHeader;
void WriteResultsCsv(std::ostream& out, const std::vector<ResultRow>& rows);
void WriteFailuresCsv(std::ostream& out, const std::vector<FailureRow>& rows);
void WriteTimingCsv(std::ostream& out, const std::vector<TimingRow>& rows);

struct DecisionTiming {
  int samples = 0;
  double mean_us = 0.0;
  double median_us = 0.0;
  double max_us = 0.0;
};

// Times `policy` on `num_states` random age vectors (ages uniform on
// 0..200 slots) after 10 discarded warm-up calls.
DecisionTiming BenchDecisionTime(const NetworkInstance& instance,
                                 const Scheduler& policy, int num_states,
                                 uint64_t seed);

// Built-in study definitions.
ScenarioSpec EtaSweepScenario();
ScenarioSpec KSweepScenario();

}  // namespace aoi

#endif  // AOI_EXPERIMENT_H_
