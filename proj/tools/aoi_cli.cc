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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoi/analysis.h"
#include "aoi/error.h"
#include "aoi/experiment.h"
#include "aoi/io.h"
#include "aoi/optimizer.h"
#include "aoi/scenario.h"

namespace {

struct SuiteFlags {
  std::string out = "results";
  int workers = 0;
  bool dump_trace = false;
  bool force_mw = false;
  std::vector<uint64_t> seeds;
  int64_t horizon = 0;
};

void AddSuiteFlags(CLI::App* cmd, SuiteFlags& f) {
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--workers", f.workers, "Parallel workers (0 = all cores)");
  cmd->add_flag("--dump-trace", f.dump_trace, "Write per-run JSONL frame traces");
  cmd->add_flag("--force-mw", f.force_mw, "Run exhaustive Max-Weight at any K");
}

void AddOverrideFlags(CLI::App* cmd, SuiteFlags& f) {
  cmd->add_option("--seeds", f.seeds, "Override the seed list");
  cmd->add_option("--horizon", f.horizon, "Override the horizon in slots");
}

int RunSpec(aoi::ScenarioSpec spec, const SuiteFlags& f) {
  if (!f.seeds.empty()) spec.seeds = f.seeds;
  if (f.horizon > 0) spec.horizon_slots = f.horizon;
  aoi::SuiteOptions options;
  options.out_dir = f.out;
  options.workers = f.workers;
  options.dump_trace = f.dump_trace;
  options.force_mw = f.force_mw;
  aoi::SuiteResult result = aoi::RunSuite(spec, options);
  std::printf("%zu rows, %zu flagged cells -> %s\n", result.rows.size(),
              result.failures.size(), f.out.c_str());
  return 0;
}

void PrintReport(const char* what, const aoi::SolveReport& r) {
  std::printf("%s: objective=%.9g iterations=%d kkt_residual=%.3g time=%.3fs\n",
              what, r.objective, r.iterations, r.kkt_residual,
              r.wall_time_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information scheduling experiments for multi-AP WLANs"};
  app.require_subcommand(1);

  SuiteFlags run_flags;
  std::string scenario_path;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario JSON")->required();
  AddSuiteFlags(run, run_flags);
  AddOverrideFlags(run, run_flags);

  SuiteFlags eta_flags;
  eta_flags.out = "results/eta_sweep";
  auto* sweep_eta = app.add_subcommand("sweep-eta", "Two-AP overlap sweep");
  AddSuiteFlags(sweep_eta, eta_flags);
  AddOverrideFlags(sweep_eta, eta_flags);

  SuiteFlags k_flags;
  k_flags.out = "results/k_sweep";
  int bench_states = 100;
  auto* sweep_k = app.add_subcommand("sweep-k", "Hexagonal network-size sweep");
  AddSuiteFlags(sweep_k, k_flags);
  AddOverrideFlags(sweep_k, k_flags);
  sweep_k->add_option("--bench-states", bench_states,
                      "Random states per decision-time measurement");

  std::string instance_path;
  std::string dist_out;
  double tolerance = aoi::kDefaultSolverTolerance;
  auto* solve = app.add_subcommand("solve-srp", "Solve the optimal randomized policy");
  solve->add_option("instance", instance_path, "Instance JSON")->required();
  solve->add_option("--out", dist_out, "Write the distribution JSON here");
  solve->add_option("--tolerance", tolerance, "Relative duality-gap tolerance");

  auto* lower = app.add_subcommand("lower-bound", "Compute the lower bound");
  lower->add_option("instance", instance_path, "Instance JSON")->required();
  lower->add_option("--tolerance", tolerance, "Relative duality-gap tolerance");

  std::string policy_name = "amw";
  int states = 100;
  uint64_t seed = 1;
  auto* bench = app.add_subcommand("bench", "Time policy decisions");
  bench->add_option("instance", instance_path, "Instance JSON")->required();
  bench->add_option("--policy", policy_name, "mw or amw")
      ->check(CLI::IsMember({"mw", "amw"}));
  bench->add_option("--states", states, "Random age states");
  bench->add_option("--seed", seed, "Seed for the random states");

  std::string layout_kind = "two-ap";
  std::string gen_out = "instance.json";
  double eta = 0.0;
  int per_ap = 5;
  int num_aps = 9;
  auto* gen = app.add_subcommand("gen", "Write a generated instance");
  gen->add_option("layout", layout_kind, "two-ap or hex")
      ->check(CLI::IsMember({"two-ap", "hex"}));
  gen->add_option("--eta", eta, "Cross-AP overlap (two-ap)");
  gen->add_option("--users-per-ap", per_ap, "Users per AP");
  gen->add_option("--num-aps", num_aps, "AP count (hex)");
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--out", gen_out, "Output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return RunSpec(aoi::ScenarioFromJson(aoi::ReadJsonFile(scenario_path)),
                     run_flags);
    }
    if (sweep_eta->parsed()) return RunSpec(aoi::EtaSweepScenario(), eta_flags);
    if (sweep_k->parsed()) {
      aoi::ScenarioSpec spec = aoi::KSweepScenario();
      RunSpec(spec, k_flags);
      std::ofstream out(std::string(k_flags.out) + "/decision_times.csv");
      out << "K,N,policy,samples,mean_us,median_us,max_us\n";
      const uint64_t first_seed = k_flags.seeds.empty() ? spec.seeds.front()
                                                        : k_flags.seeds.front();
      for (const auto& point : spec.Points()) {
        aoi::NetworkInstance inst = spec.Instantiate(point, first_seed);
        std::vector<std::unique_ptr<aoi::Scheduler>> policies;
        policies.push_back(std::make_unique<aoi::MaxWeightScheduler>(inst));
        policies.push_back(
            std::make_unique<aoi::ApproxMaxWeightScheduler>(inst, spec.epsilon));
        for (const auto& p : policies) {
          int n = p->name() == "mw" && inst.num_aps() > aoi::kMaxWeightApLimit
                      ? std::max(1, bench_states / 20)
                      : bench_states;
          aoi::DecisionTiming t = aoi::BenchDecisionTime(inst, *p, n, first_seed);
          out << inst.num_aps() << ',' << inst.num_users() << ',' << p->name()
              << ',' << t.samples << ',' << t.mean_us << ',' << t.median_us
              << ',' << t.max_us << '\n';
          std::printf("(%d,%d) %-4s mean %.2f us  median %.2f us  max %.2f us\n",
                      inst.num_users(), inst.num_aps(), p->name().c_str(),
                      t.mean_us, t.median_us, t.max_us);
        }
      }
      return 0;
    }
    if (solve->parsed()) {
      auto inst = aoi::InstanceFromJson(aoi::ReadJsonFile(instance_path));
      auto [dist, report] = aoi::SolveSrp(aoi::BuildProgram(inst), tolerance);
      PrintReport("srp", report);
      std::printf("closed-form weighted AoI: %.9g slots\n",
                  aoi::SrpExpectedAoi(inst, dist));
      if (!dist_out.empty()) {
        aoi::WriteJsonFile(dist_out, aoi::DistributionToJson(dist));
      }
      return 0;
    }
    if (lower->parsed()) {
      auto inst = aoi::InstanceFromJson(aoi::ReadJsonFile(instance_path));
      aoi::LowerBoundSolution lb = aoi::SolveLowerBound(inst, tolerance);
      PrintReport("lower_bound", lb.report);
      std::printf("lower bound: %.9g slots\n", lb.value);
      return 0;
    }
    if (bench->parsed()) {
      auto inst = aoi::InstanceFromJson(aoi::ReadJsonFile(instance_path));
      std::unique_ptr<aoi::Scheduler> p;
      if (policy_name == "mw") {
        p = std::make_unique<aoi::MaxWeightScheduler>(inst);
      } else {
        p = std::make_unique<aoi::ApproxMaxWeightScheduler>(inst);
      }
      aoi::DecisionTiming t = aoi::BenchDecisionTime(inst, *p, states, seed);
      std::printf("%s: samples=%d mean=%.3f us median=%.3f us max=%.3f us\n",
                  policy_name.c_str(), t.samples, t.mean_us, t.median_us,
                  t.max_us);
      return 0;
    }
    if (gen->parsed()) {
      aoi::PhysicsParams phy;
      if (layout_kind == "two-ap") {
        aoi::TwoApLayout l;
        l.eta = eta;
        l.users_per_ap = per_ap;
        phy.pathloss_exponent = l.pathloss_exponent;
        aoi::WriteJsonFile(gen_out, aoi::InstanceToJson(aoi::GenTwoAp(l, seed, phy)));
      } else {
        aoi::HexLayout l;
        l.num_aps = num_aps;
        l.users_per_cell = per_ap;
        phy.pathloss_exponent = l.pathloss_exponent;
        aoi::WriteJsonFile(gen_out, aoi::InstanceToJson(aoi::GenHex(l, seed, phy)));
      }
      std::printf("wrote %s\n", gen_out.c_str());
      return 0;
    }
  } catch (const aoi::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
