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

#include "aoi/optimizer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "aoi/error.h"

namespace aoi {

ConvexProgramData BuildProgram(const NetworkInstance& instance,
                               uint64_t max_columns) {
  const uint64_t count = CountFeasibleSets(instance);
  if (count > max_columns) {
    throw Error(ErrorCode::kBudgetExceeded,
                "program has " + std::to_string(count) +
                    " columns, budget is " + std::to_string(max_columns));
  }
  instance.CheckGeometry();
  FrameTable table = FrameTable::Build(instance, max_columns);
  ConvexProgramData p;
  const int n = instance.num_users();
  p.weights.resize(n);
  for (int i = 0; i < n; ++i) p.weights[i] = instance.weight(i);
  p.columns_of_user.resize(n);
  p.a.reserve(table.size());
  p.b.reserve(table.size());
  p.set_order.reserve(table.size());
  for (std::size_t s = 0; s < table.size(); ++s) {
    double d = table.frame_length(s);
    p.b.push_back(d);
    p.a.push_back(d * d);
    p.set_order.push_back(table.set(s));
    for (int i : table.members(s)) p.columns_of_user[i].push_back(static_cast<int>(s));
  }
  return p;
}

namespace {

// Euclidean projection onto {y >= 0, sum y = 1}.
void ProjectToSimplex(std::vector<double>& v, std::vector<double>& scratch) {
  scratch = v;
  std::sort(scratch.begin(), scratch.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < scratch.size(); ++k) {
    cumulative += scratch[k];
    double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (scratch[k] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
}

// F(y) = alpha sum_S b_S y_S + sum_i beta_i / q_i + constant.
class SimplexProblem {
 public:
  SimplexProblem(const ConvexProgramData& p, double alpha,
                 std::vector<double> beta, double constant)
      : p_(p), alpha_(alpha), beta_(std::move(beta)), constant_(constant),
        q_(p.num_users()) {}

  double Value(const std::vector<double>& y) {
    double linear = 0.0;
    for (std::size_t s = 0; s < y.size(); ++s) linear += p_.b[s] * y[s];
    double value = alpha_ * linear + constant_;
    for (int i = 0; i < p_.num_users(); ++i) {
      double q = 0.0;
      for (int s : p_.columns_of_user[i]) q += y[s] / p_.b[s];
      q_[i] = q;
      if (!(q > 0.0)) return std::numeric_limits<double>::infinity();
      value += beta_[i] / q;
    }
    return value;
  }

  // Uses the q values cached by the last Value() call on the same y.
  void Gradient(std::vector<double>& g) const {
    g.resize(p_.num_sets());
    for (std::size_t s = 0; s < g.size(); ++s) g[s] = alpha_ * p_.b[s];
    for (int i = 0; i < p_.num_users(); ++i) {
      double c = beta_[i] / (q_[i] * q_[i]);
      for (int s : p_.columns_of_user[i]) g[s] -= c / p_.b[s];
    }
  }

 private:
  const ConvexProgramData& p_;
  double alpha_;
  std::vector<double> beta_;
  double constant_;
  std::vector<double> q_;
};

struct SimplexSolution {
  std::vector<double> y;
  SolveReport report;
};

SimplexSolution MinimizeOnSimplex(SimplexProblem& problem, std::size_t dim,
                                  double tolerance,
                                  std::vector<double>* trace) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> y(dim, 1.0 / static_cast<double>(dim));
  std::vector<double> g, g_new, z, scratch, step_y(dim), step_g(dim);
  double f = problem.Value(y);
  problem.Gradient(g);
  double step = 1.0;
  {
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::abs(v));
    if (gmax > 0.0) step = 1.0 / gmax;
  }
  if (trace != nullptr) trace->assign(1, f);

  SolveReport report;
  bool converged = false;
  int iter = 0;
  for (; iter < kMaxSolverIterations; ++iter) {
    double f_new = f;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 80; ++backtrack) {
      z.resize(dim);
      for (std::size_t s = 0; s < dim; ++s) z[s] = y[s] - step * g[s];
      ProjectToSimplex(z, scratch);
      double decrease = 0.0;
      for (std::size_t s = 0; s < dim; ++s) decrease += g[s] * (z[s] - y[s]);
      f_new = problem.Value(z);
      if (f_new <= f + 1e-4 * decrease) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No descent along the projected arc: y is stationary to precision.
      problem.Value(y);
      converged = true;
      break;
    }
    problem.Gradient(g_new);
    double ss = 0.0;
    double sy = 0.0;
    for (std::size_t s = 0; s < dim; ++s) {
      step_y[s] = z[s] - y[s];
      step_g[s] = g_new[s] - g[s];
      ss += step_y[s] * step_y[s];
      sy += step_y[s] * step_g[s];
    }
    const bool stalled =
        ss == 0.0 || std::abs(f - f_new) <=
                         4.0 * std::numeric_limits<double>::epsilon() * std::abs(f);
    y.swap(z);
    g.swap(g_new);
    f = f_new;
    if (trace != nullptr) trace->push_back(f);
    step = (sy > 0.0) ? std::clamp(ss / sy, 1e-12, 1e12) : step * 2.0;
    // Duality gap g.y - min_s g_s bounds f - f* from above.
    double gy = 0.0;
    double gmin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < dim; ++s) {
      gy += g[s] * y[s];
      gmin = std::min(gmin, g[s]);
    }
    if (stalled || (gy - gmin) / std::max(1.0, std::abs(f)) < tolerance) {
      converged = true;
      ++iter;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorCode::kNotConverged,
                "projected gradient hit " +
                    std::to_string(kMaxSolverIterations) + " iterations");
  }

  // Projected-gradient residual with unit step.
  z.resize(dim);
  for (std::size_t s = 0; s < dim; ++s) z[s] = y[s] - g[s];
  ProjectToSimplex(z, scratch);
  double residual = 0.0;
  for (std::size_t s = 0; s < dim; ++s) {
    residual = std::max(residual, std::abs(z[s] - y[s]));
  }

  report.objective = f;
  report.iterations = iter;
  report.kkt_residual = residual;
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return {std::move(y), report};
}

void CheckProgram(const ConvexProgramData& p, double tolerance) {
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  }
  if (p.num_sets() == 0 || p.num_users() == 0 ||
      p.a.size() != p.num_sets() || p.set_order.size() != p.num_sets() ||
      p.columns_of_user.size() != static_cast<std::size_t>(p.num_users())) {
    throw Error(ErrorCode::kInvalidArgument, "malformed program");
  }
  for (int i = 0; i < p.num_users(); ++i) {
    if (p.columns_of_user[i].empty()) {
      throw Error(ErrorCode::kStarvedUser,
                  "user " + std::to_string(i) + " belongs to no set");
    }
  }
}

ScheduleDistribution TimeSharesToDistribution(const ConvexProgramData& p,
                                              const std::vector<double>& y) {
  double total = 0.0;
  for (std::size_t s = 0; s < y.size(); ++s) total += y[s] / p.b[s];
  std::vector<ScheduleDistribution::Entry> entries;
  double mass = 0.0;
  for (std::size_t s = 0; s < y.size(); ++s) {
    if (y[s] <= 0.0 || p.set_order[s].empty()) continue;
    double prob = (y[s] / p.b[s]) / total;
    entries.push_back({p.set_order[s], prob});
    mass += prob;
  }
  // Guard against the sum creeping past 1 by rounding.
  if (mass > 1.0) {
    for (auto& e : entries) e.prob /= mass;
  }
  return ScheduleDistribution(std::move(entries));
}

double TotalWeight(const ConvexProgramData& p) {
  return std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
}

}  // namespace

std::pair<ScheduleDistribution, SolveReport> SolveSrp(
    const ConvexProgramData& program, double tolerance,
    std::vector<double>* trace) {
  CheckProgram(program, tolerance);
  const double n = program.num_users();
  const double w = TotalWeight(program);
  std::vector<double> beta(program.weights);
  for (double& v : beta) v /= n;
  SimplexProblem problem(program, w / (2.0 * n), std::move(beta),
                         -w / (2.0 * n));
  SimplexSolution sol =
      MinimizeOnSimplex(problem, program.num_sets(), tolerance, trace);
  return {TimeSharesToDistribution(program, sol.y), sol.report};
}

LowerBoundSolution SolveLowerBound(const ConvexProgramData& program,
                                   double tolerance,
                                   std::vector<double>* trace) {
  CheckProgram(program, tolerance);
  const double n = program.num_users();
  const double w = TotalWeight(program);
  std::vector<double> beta(program.weights);
  for (double& v : beta) v /= 2.0 * n;
  SimplexProblem problem(program, 0.0, std::move(beta), -w / (2.0 * n));
  SimplexSolution sol =
      MinimizeOnSimplex(problem, program.num_sets(), tolerance, trace);
  LowerBoundSolution out;
  out.value = std::max(0.0, sol.report.objective);
  out.distribution = TimeSharesToDistribution(program, sol.y);
  out.report = sol.report;
  return out;
}

LowerBoundSolution SolveLowerBound(const NetworkInstance& instance,
                                   double tolerance) {
  return SolveLowerBound(BuildProgram(instance), tolerance);
}

namespace {

struct OracleSet {
  ActivationSet set;
  double frame = 1.0;
};

std::vector<OracleSet> OracleSets(const NetworkInstance& instance) {
  if (CountFeasibleSets(instance) > 6) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "grid oracle supports at most 6 feasible sets");
  }
  std::vector<OracleSet> sets;
  for (const ActivationSet& s : FeasibleSets(instance)) {
    if (s.empty()) continue;
    sets.push_back({s, static_cast<double>(FrameLength(instance, s))});
  }
  return sets;
}

// Visits every grid point mu = k * step with sum k <= 1/step.
void ForEachGridPoint(std::size_t dims, double grid_step,
                      const std::function<void(const std::vector<double>&)>& f) {
  if (!(grid_step > 0.0 && grid_step <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "grid step must be in (0, 1]");
  }
  const int levels = static_cast<int>(std::lround(1.0 / grid_step));
  std::vector<int> k(dims, 0);
  std::vector<double> mu(dims, 0.0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t d, int left) {
    if (d == dims) {
      for (std::size_t j = 0; j < dims; ++j) mu[j] = k[j] / double(levels);
      f(mu);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[d] = v;
      rec(d + 1, left - v);
    }
    k[d] = 0;
  };
  rec(0, levels);
}

// Returns (frame second moment, frame mean, per-user hit mass) with the idle
// mass counted as one-slot frames.
struct GridMoments {
  double d2 = 0.0;
  double d1 = 0.0;
  std::vector<double> hit;
};

GridMoments Moments(const NetworkInstance& instance,
                    const std::vector<OracleSet>& sets,
                    const std::vector<double>& mu) {
  GridMoments m;
  m.hit.assign(instance.num_users(), 0.0);
  double mass = 0.0;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    m.d2 += sets[j].frame * sets[j].frame * mu[j];
    m.d1 += sets[j].frame * mu[j];
    mass += mu[j];
    for (int i : sets[j].set.members()) m.hit[i] += mu[j];
  }
  double idle = std::max(0.0, 1.0 - mass);
  m.d2 += idle;
  m.d1 += idle;
  return m;
}

}  // namespace

std::pair<ScheduleDistribution, double> SrpOracle(
    const NetworkInstance& instance, double grid_step) {
  const std::vector<OracleSet> sets = OracleSets(instance);
  const int n = instance.num_users();
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_mu;
  ForEachGridPoint(sets.size(), grid_step, [&](const std::vector<double>& mu) {
    GridMoments m = Moments(instance, sets, mu);
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      if (m.hit[i] <= 0.0) return;
      value += instance.weight(i) *
               (m.d2 / (2.0 * m.d1) + m.d1 / m.hit[i] - 0.5);
    }
    value /= n;
    if (value < best) {
      best = value;
      best_mu = mu;
    }
  });
  if (best_mu.empty()) {
    throw Error(ErrorCode::kStarvedUser, "no grid point serves every user");
  }
  std::vector<ScheduleDistribution::Entry> entries;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    if (best_mu[j] > 0.0) entries.push_back({sets[j].set, best_mu[j]});
  }
  return {ScheduleDistribution(std::move(entries)), best};
}

double LowerBoundOracle(const NetworkInstance& instance, double grid_step) {
  const std::vector<OracleSet> sets = OracleSets(instance);
  const int n = instance.num_users();
  double best = std::numeric_limits<double>::infinity();
  ForEachGridPoint(sets.size(), grid_step, [&](const std::vector<double>& mu) {
    GridMoments m = Moments(instance, sets, mu);
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      if (m.hit[i] <= 0.0) return;
      double q = m.hit[i] / m.d1;
      value += instance.weight(i) * (1.0 / (2.0 * q) - 0.5);
    }
    best = std::min(best, value / n);
  });
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::kStarvedUser, "no grid point serves every user");
  }
  return best;
}

}  // namespace aoi
