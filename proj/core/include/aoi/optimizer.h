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

// Optimal stationary randomized policy and the throughput lower bound.
//
// For a distribution mu over feasible sets (idle mass = one-slot empty frames)
// define the time shares y_S = D(S) mu_S / sum_T D(T) mu_T. Then
//
//   sum D^2 mu / sum D mu = sum_S D(S) y_S,
//   q_i = sum_{S ni i} mu_S / sum D mu = sum_{S ni i} y_S / D(S),
//
// and the closed-form SRP age becomes
//
//   J(y) = (1/N) sum_i w_i ( sum_S D(S) y_S / 2 + 1 / q_i - 1/2 ),
//
// convex on the probability simplex in y. The lower bound is
//
//   LB = min_y (1/N) sum_i w_i ( 1 / (2 q_i) - 1/2 ).
//
// Both are solved by projected gradient with Barzilai-Borwein trial steps and
// monotone Armijo backtracking; mu is recovered as (y_S / D(S)) normalised.

#ifndef AOI_OPTIMIZER_H_
#define AOI_OPTIMIZER_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "aoi/model.h"
#include "aoi/policies.h"

namespace aoi {

inline constexpr uint64_t kDefaultColumnBudget = 100000;
inline constexpr double kDefaultSolverTolerance = 1e-6;
inline constexpr int kMaxSolverIterations = 100000;

struct ConvexProgramData {
  std::vector<double> a;        // D(S)^2
  std::vector<double> b;        // D(S)
  std::vector<double> weights;  // w_i
  std::vector<ActivationSet> set_order;
  // Sparse columns of the membership matrix M (N x |I|).
  std::vector<std::vector<int>> columns_of_user;

  std::size_t num_sets() const { return b.size(); }
  int num_users() const { return static_cast<int>(weights.size()); }
  bool member(int user, std::size_t set) const {
    return set_order[set].contains(user);
  }
};

struct SolveReport {
  double objective = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  double wall_time_seconds = 0.0;
};

// Throws kBudgetExceeded (message carries |I|) when |I| > max_columns.
ConvexProgramData BuildProgram(const NetworkInstance& instance,
                               uint64_t max_columns = kDefaultColumnBudget);

// Stops once the duality gap g.y - min_s g_s, relative to max(1, |F|), falls
// below `tolerance`, or when a step no longer changes the iterate. Throws
// kStarvedUser if some user appears in no column, kInvalidArgument for a bad
// tolerance and kNotConverged after kMaxSolverIterations.
// `trace`, when given, receives the objective after every iteration.
std::pair<ScheduleDistribution, SolveReport> SolveSrp(
    const ConvexProgramData& program,
    double tolerance = kDefaultSolverTolerance,
    std::vector<double>* trace = nullptr);

struct LowerBoundSolution {
  double value = 0.0;
  ScheduleDistribution distribution;  // the minimising mu
  SolveReport report;
};

LowerBoundSolution SolveLowerBound(const ConvexProgramData& program,
                                   double tolerance = kDefaultSolverTolerance,
                                   std::vector<double>* trace = nullptr);
LowerBoundSolution SolveLowerBound(const NetworkInstance& instance,
                                   double tolerance = kDefaultSolverTolerance);

// Grid search over mu on the non-empty feasible sets (mass left over idles),
// evaluating the closed form directly. Throws kInstanceTooLarge if |I| > 6.
std::pair<ScheduleDistribution, double> SrpOracle(
    const NetworkInstance& instance, double grid_step);

// Same grid, minimising the lower-bound objective instead.
double LowerBoundOracle(const NetworkInstance& instance, double grid_step);

}  // namespace aoi

#endif  // AOI_OPTIMIZER_H_
