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

#include "aoi/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "aoi/analysis.h"
#include "aoi/error.h"
#include "aoi/io.h"
#include "aoi/optimizer.h"
#include "aoi/simulator.h"

namespace aoi {

namespace fs = std::filesystem;

namespace {

struct JobOutput {
  std::vector<ResultRow> rows;
  std::vector<FailureRow> failures;
  std::vector<TimingRow> timings;
};

std::string SeedTag(const std::string& id, uint64_t seed) {
  return id + "_seed" + std::to_string(seed);
}

JobOutput RunJob(const ScenarioSpec& spec, const ScenarioPoint& point,
                 uint64_t seed, const SuiteOptions& options) {
  JobOutput out;
  auto fail_all = [&](const std::string& status, const std::string& message) {
    for (const auto& policy : spec.policies) {
      ResultRow row;
      row.scenario_id = point.id;
      row.policy = policy;
      row.seed = seed;
      row.eta = point.eta;
      out.rows.push_back(row);
      out.failures.push_back({point.id, policy, seed, status, message});
    }
  };

  std::unique_ptr<NetworkInstance> instance;
  try {
    instance = std::make_unique<NetworkInstance>(spec.Instantiate(point, seed));
    instance->CheckGeometry();
  } catch (const std::exception& e) {
    fail_all("failed", e.what());
    return out;
  }
  const NetworkInstance& inst = *instance;
  const double slot_ms = inst.physics().slot_seconds * 1000.0;

  std::optional<LowerBoundSolution> lb;
  std::optional<ScheduleDistribution> srp;
  std::optional<double> srp_closed;
  std::string optimizer_note;
  const uint64_t columns = CountFeasibleSets(inst);
  if (columns > spec.column_budget) {
    optimizer_note = "not computed: " + std::to_string(columns) +
                     " feasible sets exceed the budget of " +
                     std::to_string(spec.column_budget);
  } else {
    try {
      ConvexProgramData program = BuildProgram(inst, spec.column_budget);
      lb = SolveLowerBound(program);
      out.timings.push_back({point.id, seed, "lower_bound", columns,
                             lb->report.objective, lb->report.iterations,
                             lb->report.kkt_residual,
                             lb->report.wall_time_seconds});
      auto [dist, report] = SolveSrp(program);
      out.timings.push_back({point.id, seed, "srp", columns, report.objective,
                             report.iterations, report.kkt_residual,
                             report.wall_time_seconds});
      srp_closed = SrpExpectedAoi(inst, dist);
      srp = std::move(dist);
    } catch (const std::exception& e) {
      optimizer_note = e.what();
    }
  }

  std::map<std::string, SimTrace> traces;
  for (const auto& policy : spec.policies) {
    ResultRow row;
    row.scenario_id = point.id;
    row.policy = policy;
    row.seed = seed;
    row.k = inst.num_aps();
    row.n = inst.num_users();
    row.eta = point.eta;
    if (lb) row.lower_bound = lb->value;
    row.srp_closed_form = srp_closed;

    SimConfig config;
    config.horizon_slots = spec.horizon_slots;
    config.seed = seed;
    try {
      std::optional<SimTrace> trace;
      if (policy == "baseline") {
        trace = RunAsynchronousBaseline(inst, config);
      } else if (policy == "srp") {
        if (srp) {
          trace = RunFrameSynchronous(inst, RandomizedScheduler(inst, *srp), config);
        } else {
          out.failures.push_back({point.id, policy, seed,
                                  lb ? "failed" : "not computed", optimizer_note});
        }
      } else if (policy == "mw") {
        if (inst.num_aps() > kMaxWeightApLimit && !options.force_mw) {
          out.failures.push_back({point.id, policy, seed, "skipped",
                                  "exhaustive search above " +
                                      std::to_string(kMaxWeightApLimit) +
                                      " APs needs --force-mw"});
        } else {
          trace = RunFrameSynchronous(inst, MaxWeightScheduler(inst), config);
        }
      } else if (policy == "amw") {
        trace = RunFrameSynchronous(
            inst, ApproxMaxWeightScheduler(inst, spec.epsilon), config);
      }
      if (trace) {
        double aoi = WeightedAverageAoi(*trace);
        row.avg_weighted_aoi_slots = aoi;
        row.avg_weighted_aoi_ms = aoi * slot_ms;
        row.mean_decision_time_us = trace->MeanDecisionSeconds() * 1e6;
        row.frames = trace->CompleteFrames();
        row.deliveries = trace->TotalDeliveries();
        if (options.dump_trace && options.write_files) {
          WriteTraceJsonl(*trace, options.out_dir / "traces" /
                                      (SeedTag(point.id, seed) + "_" + policy +
                                       ".jsonl"));
        }
        traces.emplace(policy, std::move(*trace));
      }
    } catch (const std::exception& e) {
      out.failures.push_back({point.id, policy, seed, "failed", e.what()});
    }
    out.rows.push_back(std::move(row));
  }

  if (lb && srp && options.write_files) {
    try {
      std::map<std::string, const SimTrace*> views;
      for (const auto& [name, trace] : traces) views[name] = &trace;
      RatioReport report = BuildRatioReport(inst, *lb, *srp, views, spec.epsilon);
      nlohmann::json doc = RatioReportToJson(report);
      doc["scenario_id"] = point.id;
      doc["seed"] = seed;
      WriteJsonFile(options.out_dir / "reports" / (SeedTag(point.id, seed) + ".json"),
                    doc);
    } catch (const std::exception& e) {
      out.failures.push_back({point.id, "report", seed, "failed", e.what()});
    }
  }
  return out;
}

std::string Num(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", *v);
  return buf;
}

std::string Num(const std::optional<int64_t>& v) {
  return v ? std::to_string(*v) : "NA";
}

std::string CsvText(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

SuiteResult RunSuite(const ScenarioSpec& spec, const SuiteOptions& options) {
  const std::vector<ScenarioPoint> points = spec.Points();
  struct Job {
    const ScenarioPoint* point;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& p : points) {
    for (uint64_t s : spec.seeds) jobs.push_back({&p, s});
  }
  std::vector<JobOutput> outputs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      outputs[j] = RunJob(spec, *jobs[j].point, jobs[j].seed, options);
    }
  };
  int workers = options.workers > 0
                    ? options.workers
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min<int>(workers, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SuiteResult result;
  for (auto& o : outputs) {
    for (auto& r : o.rows) result.rows.push_back(std::move(r));
    for (auto& f : o.failures) result.failures.push_back(std::move(f));
    for (auto& t : o.timings) result.timings.push_back(std::move(t));
  }
  if (options.write_files) {
    fs::create_directories(options.out_dir);
    std::ofstream results(options.out_dir / "results.csv");
    WriteResultsCsv(results, result.rows);
    std::ofstream failures(options.out_dir / "failures.csv");
    WriteFailuresCsv(failures, result.failures);
    std::ofstream timing(options.out_dir / "timing.csv");
    WriteTimingCsv(timing, result.timings);
    WriteJsonFile(options.out_dir / "scenario.json", ScenarioToJson(spec));
  }
  return result;
}

const char* const kResultsHeader =
    "scenario_id,policy,seed,K,N,eta,avg_weighted_aoi_slots,"
    "avg_weighted_aoi_ms,lower_bound,srp_closed_form,mean_decision_time_us,"
    "frames,deliveries";

void WriteResultsCsv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << CsvText(r.scenario_id) << ',' << r.policy << ',' << r.seed << ','
        << r.k << ',' << r.n << ',' << Num(std::optional<double>(r.eta)) << ','
        << Num(r.avg_weighted_aoi_slots) << ',' << Num(r.avg_weighted_aoi_ms)
        << ',' << Num(r.lower_bound) << ',' << Num(r.srp_closed_form) << ','
        << Num(r.mean_decision_time_us) << ',' << Num(r.frames) << ','
        << Num(r.deliveries) << '\n';
  }
}

void WriteFailuresCsv(std::ostream& out, const std::vector<FailureRow>& rows) {
  out << "scenario_id,policy,seed,status,message\n";
  for (const auto& r : rows) {
    out << CsvText(r.scenario_id) << ',' << r.policy << ',' << r.seed << ','
        << r.status << ',' << CsvText(r.message) << '\n';
  }
}

void WriteTimingCsv(std::ostream& out, const std::vector<TimingRow>& rows) {
  out << "scenario_id,seed,program,columns,objective,iterations,kkt_residual,"
         "wall_time_seconds\n";
  for (const auto& r : rows) {
    out << CsvText(r.scenario_id) << ',' << r.seed << ',' << r.program << ','
        << r.columns << ',' << Num(std::optional<double>(r.objective)) << ','
        << r.iterations << ',' << Num(std::optional<double>(r.kkt_residual))
        << ',' << Num(std::optional<double>(r.wall_time_seconds)) << '\n';
  }
}

DecisionTiming BenchDecisionTime(const NetworkInstance& instance,
                                 const Scheduler& policy, int num_states,
                                 uint64_t seed) {
  if (num_states < 1) {
    throw Error(ErrorCode::kInvalidArgument, "num_states must be >= 1");
  }
  RngStream ages_rng(seed, "bench-ages");
  RngStream policy_rng(seed, "bench-policy");
  auto random_state = [&] {
    AgeState s;
    s.ages.resize(instance.num_users());
    for (auto& a : s.ages) a = static_cast<int64_t>(ages_rng.Below(201));
    return s;
  };
  for (int w = 0; w < 10; ++w) policy.Select(random_state(), policy_rng);

  std::vector<double> samples;
  samples.reserve(num_states);
  for (int k = 0; k < num_states; ++k) {
    AgeState s = random_state();
    auto t0 = std::chrono::steady_clock::now();
    PolicyDecision d = policy.Select(s, policy_rng);
    auto t1 = std::chrono::steady_clock::now();
    samples.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
    if (d.frame_len < 1) throw Error(ErrorCode::kContractViolation, "bad decision");
  }
  DecisionTiming t;
  t.samples = num_states;
  for (double v : samples) t.mean_us += v;
  t.mean_us /= num_states;
  t.max_us = *std::max_element(samples.begin(), samples.end());
  std::sort(samples.begin(), samples.end());
  t.median_us = (num_states % 2 == 1)
                    ? samples[num_states / 2]
                    : 0.5 * (samples[num_states / 2 - 1] + samples[num_states / 2]);
  return t;
}

ScenarioSpec EtaSweepScenario() {
  ScenarioSpec s;
  s.name = "eta_sweep";
  s.layout = TwoApLayout{};
  s.policies = KnownPolicies();
  for (uint64_t k = 1; k <= 10; ++k) s.seeds.push_back(k);
  std::vector<double> etas;
  for (int k = 0; k < 10; ++k) etas.push_back(0.5 * k / 9.0);
  s.sweep["eta"] = etas;
  s.sweep["users_per_ap"] = {5, 10};
  return s;
}

ScenarioSpec KSweepScenario() {
  ScenarioSpec s;
  s.name = "k_sweep";
  s.layout = HexLayout{};
  s.policies = KnownPolicies();
  for (uint64_t k = 1; k <= 10; ++k) s.seeds.push_back(k);
  s.sweep["num_aps"] = {3, 6, 9};
  return s;
}

}  // namespace aoi
