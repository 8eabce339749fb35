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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aoi/analysis.h"
#include "aoi/experiment.h"
#include "aoi/optimizer.h"
#include "aoi/scenario.h"
#include "aoi/simulator.h"
#include "test_util.h"

namespace aoi {
namespace {

constexpr int kSeeds = 10;
constexpr int64_t kHorizon = 10000;

struct Stat {
  double mean = 0.0;
  double se = 0.0;
};

Stat Summarize(const std::vector<double>& v) {
  Stat s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - s.mean) * (x - s.mean);
  if (v.size() > 1) var /= static_cast<double>(v.size() - 1);
  s.se = std::sqrt(var / static_cast<double>(v.size()));
  return s;
}

class Reporter {
 public:
  void Line(bool pass, const std::string& name, const std::string& detail) {
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    all_pass_ &= pass;
  }
  bool all_pass() const { return all_pass_; }

 private:
  bool all_pass_ = true;
};

std::string Fmt(const char* fmt, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, a, b, c, d);
  return buf;
}

// Exact sample-path checks run on every trace produced below.
struct IdentityTally {
  int64_t traces = 0;
  int64_t user_checks = 0;
  int64_t violations = 0;

  void Check(const SimTrace& trace) {
    ++traces;
    for (int i = 0; i < trace.num_users(); ++i) {
      ++user_checks;
      int64_t total = trace.residuals[i];
      for (const auto& d : trace.deliveries[i]) total += d.wait + d.service;
      if (total != trace.horizon) ++violations;
      if (SamplePathAgeSum(trace, i) != trace.age_sums[i]) ++violations;
    }
  }
};

struct SeedRun {
  std::map<std::string, double> aoi;  // policy -> simulated J
  std::optional<double> lower_bound;
  std::optional<double> srp_closed_form;
  std::optional<RatioReport> report;
};

struct PointRun {
  std::string label;
  std::vector<SeedRun> seeds;

  std::vector<double> Values(const std::string& policy) const {
    std::vector<double> v;
    for (const auto& s : seeds) {
      auto it = s.aoi.find(policy);
      if (it != s.aoi.end()) v.push_back(it->second);
    }
    return v;
  }
};

PointRun RunPoint(const std::string& label, const ScenarioSpec& spec,
                  const ScenarioPoint& point, const std::vector<std::string>& policies,
                  IdentityTally& tally) {
  PointRun out;
  out.label = label;
  for (uint64_t seed = 1; seed <= kSeeds; ++seed) {
    NetworkInstance inst = spec.Instantiate(point, seed);
    SeedRun run;
    std::optional<LowerBoundSolution> lb;
    std::optional<ScheduleDistribution> srp;
    if (CountFeasibleSets(inst) <= kDefaultColumnBudget) {
      ConvexProgramData program = BuildProgram(inst);
      lb = SolveLowerBound(program);
      srp = SolveSrp(program).first;
      run.lower_bound = lb->value;
      run.srp_closed_form = SrpExpectedAoi(inst, *srp);
    }
    SimConfig cfg;
    cfg.horizon_slots = kHorizon;
    cfg.seed = seed;
    std::map<std::string, SimTrace> traces;
    for (const auto& p : policies) {
      if (p == "baseline") {
        traces.emplace(p, RunAsynchronousBaseline(inst, cfg));
      } else if (p == "mw") {
        traces.emplace(p, RunFrameSynchronous(inst, MaxWeightScheduler(inst), cfg));
      } else if (p == "amw") {
        traces.emplace(p, RunFrameSynchronous(inst, ApproxMaxWeightScheduler(inst), cfg));
      } else if (p == "srp" && srp) {
        traces.emplace(p, RunFrameSynchronous(inst, RandomizedScheduler(inst, *srp), cfg));
      }
    }
    std::map<std::string, const SimTrace*> views;
    for (const auto& [name, trace] : traces) {
      tally.Check(trace);
      run.aoi[name] = WeightedAverageAoi(trace);
      views[name] = &trace;
    }
    if (lb && srp) run.report = BuildRatioReport(inst, *lb, *srp, views);
    out.seeds.push_back(std::move(run));
  }
  return out;
}

ScenarioPoint TwoApPoint(int users_per_ap, double eta) {
  TwoApLayout t;
  t.users_per_ap = users_per_ap;
  t.eta = eta;
  return {"two-ap", t, eta};
}

ScenarioPoint HexPoint(int num_aps) {
  HexLayout h;
  h.num_aps = num_aps;
  return {"hex", h, 0.0};
}

void CheckPhysicsAnchor(Reporter& r) {
  PhysicsParams p;
  const double signal = p.tx_power_watts * std::pow(5.0, -p.pathloss_exponent);
  const double noise = 1e-3 * std::pow(10.0, -174.0 / 10.0) * p.bandwidth_hz;
  const double seconds =
      p.update_size_bits / (p.bandwidth_hz * std::log2(1.0 + signal / noise));
  const double library = TransmissionSeconds(p, signal / noise);
  const bool ok = std::abs(seconds - 1.2e-3) <= 0.05 * 1.2e-3 &&
                  std::abs(library - seconds) <= 1e-12;
  r.Line(ok, "physics-anchor",
         Fmt("5 m transmission %.4f ms (target 1.2 ms +/- 5%%), library %.4f ms",
             seconds * 1e3, library * 1e3));
}

void CheckSrpClosedForm(Reporter& r, const std::map<std::string, PointRun>& runs) {
  bool ok = true;
  std::string detail;
  for (double eta : {0.0, 0.25, 0.5}) {
    const PointRun& pr = runs.at(Fmt("two-ap N=10 eta=%g", eta));
    std::vector<double> closed;
    for (const auto& s : pr.seeds) closed.push_back(*s.srp_closed_form);
    const double cf = Summarize(closed).mean;
    const double sim = Summarize(pr.Values("srp")).mean;
    const double gap = std::abs(cf - sim) / cf;
    ok &= gap <= 0.05;
    detail += Fmt("eta=%g closed %.2f sim %.2f gap %.2f%%; ", eta, cf, sim, 100 * gap);
  }
  r.Line(ok, "srp-closed-form-vs-simulation", detail);
}

void CheckDecoupling(Reporter& r, const std::map<std::string, PointRun>& runs) {
  bool ok = true;
  std::string detail;
  for (int n : {10, 20}) {
    const PointRun& pr = runs.at(Fmt("two-ap N=%g eta=0", n));
    Stat mw = Summarize(pr.Values("mw"));
    Stat base = Summarize(pr.Values("baseline"));
    const double se = std::sqrt(mw.se * mw.se + base.se * base.se);
    const double z = std::abs(mw.mean - base.mean) / se;
    ok &= z <= 2.0;
    detail += Fmt("N=%g mw %.2f base %.2f |diff|/SE %.2f; ", n, mw.mean, base.mean, z);
  }
  r.Line(ok, "eta0-mw-matches-baseline", detail + "limit 2 SE");
}

void CheckGain(Reporter& r, const std::string& name, const PointRun& pr,
               const std::string& policy, double required) {
  const double ours = Summarize(pr.Values(policy)).mean;
  const double base = Summarize(pr.Values("baseline")).mean;
  const double gain = 1.0 - ours / base;
  r.Line(gain >= required, name,
         pr.label + Fmt(": %.2f vs baseline %.2f, reduction %.1f%% (need >= %.0f%%)",
                        ours, base, 100 * gain, 100 * required));
}

void CheckAmwVsMw(Reporter& r, const std::map<std::string, PointRun>& runs) {
  bool ok = true;
  std::string detail;
  for (int k : {3, 6}) {
    const PointRun& pr = runs.at(Fmt("hex K=%g", k));
    const double amw = Summarize(pr.Values("amw")).mean;
    const double mw = Summarize(pr.Values("mw")).mean;
    const double gap = std::abs(amw - mw) / mw;
    ok &= gap <= 0.10;
    detail += Fmt("K=%g amw %.2f mw %.2f gap %.2f%%; ", k, amw, mw, 100 * gap);
  }
  r.Line(ok, "amw-close-to-mw", detail + "limit 10%");
}

void CheckBounds(Reporter& r, const std::map<std::string, PointRun>& runs) {
  int points = 0;
  int seeds = 0;
  int lb_fail = 0;
  int thm_fail = 0;
  double worst_sr = 0.0;
  for (const auto& [label, pr] : runs) {
    if (!pr.seeds.front().lower_bound) continue;
    ++points;
    std::vector<double> lbs;
    for (const auto& s : pr.seeds) {
      lbs.push_back(*s.lower_bound);
      ++seeds;
      const RatioReport& rep = *s.report;
      if (!rep.AllHold()) ++thm_fail;
      if (rep.srp_bound) worst_sr = std::max(worst_sr, rep.srp_bound->lhs / rep.srp_bound->rhs);
    }
    const double lb = Summarize(lbs).mean;
    for (const auto& policy : {"baseline", "srp", "mw", "amw"}) {
      auto v = pr.Values(policy);
      if (v.empty()) continue;
      Stat s = Summarize(v);
      if (lb > s.mean + 3.0 * s.se) ++lb_fail;
    }
  }
  r.Line(points > 0 && lb_fail == 0 && thm_fail == 0, "bound-suite",
         Fmt("%g scenario points, %g seeds: lower-bound violations %g, ratio-bound "
             "violations %g",
             points, seeds, lb_fail, thm_fail) +
             Fmt(", max rho_sr/bound %.3f", worst_sr));
}

double LbObjective(const NetworkInstance& inst, const ScheduleDistribution& d) {
  double d1 = d.idle_mass();
  std::vector<double> hit(inst.num_users(), 0.0);
  for (const auto& e : d.entries()) {
    d1 += FrameLength(inst, e.set) * e.prob;
    for (int i : e.set.members()) hit[i] += e.prob;
  }
  double total = 0.0;
  for (int i = 0; i < inst.num_users(); ++i) {
    if (hit[i] <= 0.0) return std::numeric_limits<double>::infinity();
    total += inst.weight(i) * (d1 / (2.0 * hit[i]) - 0.5);
  }
  return total / inst.num_users();
}

// Nearest point of the step-grid on the simplex (idle mass included), by
// largest remainder.
ScheduleDistribution RoundToGrid(const ScheduleDistribution& d, double step) {
  const int levels = static_cast<int>(std::lround(1.0 / step));
  std::vector<double> x;
  for (const auto& e : d.entries()) x.push_back(e.prob * levels);
  x.push_back(d.idle_mass() * levels);
  std::vector<int> units(x.size());
  int used = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    units[j] = static_cast<int>(std::floor(x[j]));
    used += units[j];
  }
  std::vector<std::size_t> order(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x[a] - units[a] > x[b] - units[b];
  });
  for (std::size_t k = 0; used < levels; ++k, ++used) ++units[order[k % order.size()]];
  std::vector<ScheduleDistribution::Entry> out;
  for (std::size_t j = 0; j + 1 < x.size(); ++j) {
    if (units[j] > 0) {
      out.push_back({d.entries()[j].set, static_cast<double>(units[j]) / levels});
    }
  }
  return ScheduleDistribution(std::move(out));
}

void CheckOracles(Reporter& r, const IdentityTally& tally) {
  using testing::MakeInstance;
  using testing::RandomLineInstance;
  const double step = 0.05;

  // (a) Convex solver against the simplex grid.
  std::vector<NetworkInstance> small;
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    for (int users = 1; users <= 5; ++users) {
      small.push_back(RandomLineInstance(1, users, 0.0, seed));
    }
    for (double eta : {0.0, 0.5, 1.0}) {
      small.push_back(RandomLineInstance(2, 1, eta, seed, 12.0));
    }
    RngStream rng(seed, "acceptance-small");
    small.push_back(MakeInstance(
        {{0, 0}, {12, 0}},
        {{2 + 4 * rng.Uniform(), 3 * rng.Uniform()},
         {-2 - 4 * rng.Uniform(), 3 * rng.Uniform()},
         {14 + 4 * rng.Uniform(), 3 * rng.Uniform()}},
        0.25 * static_cast<double>(seed)));
  }
  int a_pass = 0;
  double a_worst = 0.0;
  for (const auto& inst : small) {
    ConvexProgramData program = BuildProgram(inst);
    auto [dist, report] = SolveSrp(program, 1e-9);
    const double grid = SrpOracle(inst, step).second;
    const double slack_srp = SrpExpectedAoi(inst, RoundToGrid(dist, step)) - report.objective;
    const double gap_srp = grid - report.objective;
    LowerBoundSolution lb = SolveLowerBound(program, 1e-9);
    const double lb_grid = LowerBoundOracle(inst, step);
    const double slack_lb = LbObjective(inst, RoundToGrid(lb.distribution, step)) - lb.value;
    const double gap_lb = lb_grid - lb.value;
    const double ulp_srp = 1e-9 * report.objective;
    const double ulp_lb = 1e-9 * std::max(1.0, lb.value);
    const bool ok = gap_srp >= -ulp_srp && gap_srp <= std::max(1e-2, slack_srp) + ulp_srp &&
                    gap_lb >= -ulp_lb && gap_lb <= std::max(1e-2, slack_lb) + ulp_lb;
    a_pass += ok ? 1 : 0;
    a_worst = std::max({a_worst, gap_srp, gap_lb});
  }
  const bool a_ok = a_pass == static_cast<int>(small.size());

  // (b) Exhaustive Max-Weight against an independent enumeration.
  int b_agree = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RngStream rng(1000 + trial, "acceptance-mw");
    const int k = 1 + static_cast<int>(rng.Below(4));
    const int per = 1 + static_cast<int>(rng.Below(3));
    NetworkInstance inst = RandomLineInstance(k, per, rng.Uniform(), 1000 + trial, 14.0);
    AgeState ages = testing::RandomAges(inst, rng);
    PolicyDecision d = MwSelect(inst, ages);
    b_agree += testing::Members(d.set) == testing::RefMwArgmax(inst, ages) ? 1 : 0;
  }
  const bool b_ok = b_agree == 100;

  // (c) Drift-ratio argmin against the index argmax.
  int c_agree = 0;
  NetworkInstance ratio_inst = RandomLineInstance(3, 3, 0.6, 77, 12.0);
  for (int trial = 0; trial < 1000; ++trial) {
    RngStream rng(trial, "acceptance-ratio");
    AgeState ages = testing::RandomAges(ratio_inst, rng);
    double best = 0.0;
    bool first = true;
    for (const ActivationSet& s : FeasibleSets(ratio_inst)) {
      double v = DriftRatio(ratio_inst, ages, s);
      if (first || v < best) best = v;
      first = false;
    }
    PolicyDecision d = MwSelect(ratio_inst, ages);
    double chosen = DriftRatio(ratio_inst, ages, d.set);
    c_agree += chosen <= best + 1e-9 * std::max(1.0, std::abs(best)) ? 1 : 0;
  }
  const bool c_ok = c_agree == 1000;

  // (d) Sample-path identities on every simulated trace.
  const bool d_ok = tally.traces > 0 && tally.violations == 0;

  r.Line(a_ok && b_ok && c_ok && d_ok, "oracle-suite",
         Fmt("(a) solver vs grid %g/%g, worst gap %.4f; ", a_pass,
             static_cast<double>(small.size()), a_worst) +
             Fmt("(b) mw vs enumeration %g/100; (c) ratio argmin %g/1000; ", b_agree,
                 c_agree) +
             Fmt("(d) %g traces, %g user checks, %g violations", tally.traces,
                 tally.user_checks, tally.violations));
}

void CheckTiming(Reporter& r) {
  struct Size {
    int k;
    int mw_states;
  };
  const Size sizes[] = {{3, 1000}, {9, 3}};
  double mw_us[2];
  double amw_us[2];
  for (int s = 0; s < 2; ++s) {
    HexLayout h;
    h.num_aps = sizes[s].k;
    PhysicsParams phy;
    phy.pathloss_exponent = h.pathloss_exponent;
    NetworkInstance inst = GenHex(h, 1, phy);
    mw_us[s] = BenchDecisionTime(inst, MaxWeightScheduler(inst), sizes[s].mw_states, 1).mean_us;
    amw_us[s] = BenchDecisionTime(inst, ApproxMaxWeightScheduler(inst), 1000, 1).mean_us;
  }
  const double mw_growth = mw_us[1] / mw_us[0];
  const double amw_growth = amw_us[1] / amw_us[0];
  r.Line(mw_growth >= 100.0 && amw_growth <= 3.0, "timing-shape",
         Fmt("mw %.1f us -> %.0f us (x%.0f, need >= 100); ", mw_us[0], mw_us[1], mw_growth) +
             Fmt("amw %.1f us -> %.1f us (x%.2f, need <= 3)", amw_us[0], amw_us[1],
                 amw_growth));
}

int Main() {
  Reporter r;
  IdentityTally tally;
  const auto start = std::chrono::steady_clock::now();

  ScenarioSpec two_ap;
  two_ap.layout = TwoApLayout{};
  ScenarioSpec hex;
  hex.layout = HexLayout{};
  const std::vector<std::string> all = {"baseline", "srp", "mw", "amw"};

  std::map<std::string, PointRun> runs;
  for (int per_ap : {5, 10}) {
    for (double eta : {0.0, 0.25, 0.5}) {
      std::string label = Fmt("two-ap N=%g eta=%g", 2 * per_ap, eta);
      runs.emplace(label, RunPoint(label, two_ap, TwoApPoint(per_ap, eta), all, tally));
    }
  }
  for (int k : {3, 6}) {
    std::string label = Fmt("hex K=%g", k);
    runs.emplace(label, RunPoint(label, hex, HexPoint(k), all, tally));
  }
  PointRun k9 = RunPoint("hex K=9", hex, HexPoint(9), {"baseline", "amw"}, tally);

  CheckPhysicsAnchor(r);
  CheckSrpClosedForm(r, runs);
  CheckDecoupling(r, runs);
  CheckGain(r, "eta0.5-mw-gain", runs.at("two-ap N=20 eta=0.5"), "mw", 0.35);
  CheckGain(r, "k9-amw-gain", k9, "amw", 0.30);
  CheckAmwVsMw(r, runs);
  CheckBounds(r, runs);
  CheckOracles(r, tally);
  CheckTiming(r);

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s (%.1f s)\n", r.all_pass() ? "ALL PASS" : "SOME FAILED", secs);
  return r.all_pass() ? 0 : 1;
}

}  // namespace
}  // namespace aoi

int main() {
  try {
    return aoi::Main();
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance-run: %s\n", e.what());
    return 1;
  }
}
