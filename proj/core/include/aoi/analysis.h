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

#ifndef AOI_ANALYSIS_H_
#define AOI_ANALYSIS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "aoi/model.h"
#include "aoi/optimizer.h"
#include "aoi/policies.h"
#include "aoi/simulator.h"

namespace aoi {

// Closed-form long-run weighted AoI of a stationary randomized policy:
//
//   (1/N) sum_i w_i ( sum D^2 mu / (2 sum D mu) + sum D mu / sum_{S ni i} mu
//                     - 1/2 ),
//
// where the idle mass 1 - sum mu enters the frame sums as one-slot frames.
// Throws kStarvedUser when some user is never scheduled.
double SrpExpectedAoi(const NetworkInstance& instance,
                      const ScheduleDistribution& dist);

// Mean frame length sum D(S) mu_S (idle mass counted as D = 1).
double MeanFrameLength(const NetworkInstance& instance,
                       const ScheduleDistribution& dist);

struct UserMoments {
  int64_t deliveries = 0;
  double mean_wait = 0.0;
  double mean_service = 0.0;
  double mean_wait_sq = 0.0;
  double mean_service_sq = 0.0;
  double mean_interval = 0.0;     // M[W + S]
  double mean_interval_sq = 0.0;  // M[(W + S)^2]
  double mean_cross = 0.0;        // M[S[m-1] (W[m] + S[m])], S[0] := S[1]
};

struct MomentSummary {
  std::vector<UserMoments> users;
  int64_t complete_frames = 0;
  double mean_frame = 0.0;
  double mean_frame_sq = 0.0;
};

MomentSummary ComputeMoments(const SimTrace& trace);

// Finite-sample renewal estimate
//   (1/N) sum_i w_i ( M[(W+S)^2] / (2 M[W+S]) + M[S[m-1](W+S)] / M[W+S] - 1/2 ).
// Throws kInsufficientData if some user has fewer than two deliveries.
double RenewalAoiEstimate(const SimTrace& trace, std::span<const double> weights);

// Exact sum_{t=1}^{T} A_i(t) rebuilt from the delivery samples, the residual
// and the initial age alone. Equals trace.age_sums[user] for every trace.
int64_t SamplePathAgeSum(const SimTrace& trace, int user);

// (1/2N) sum_i w_i ( sum D^2 mu / sum D mu + 1 ) for the lower-bound policy.
double PsiLowerBound(const NetworkInstance& instance,
                     const ScheduleDistribution& lb_dist);

// (sum_i w_i / 2N) ( M[D^2] / M[D] - 1 ) over the complete frames of a trace.
double PsiMaxWeight(const SimTrace& trace);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct RatioReport {
  double lower_bound = 0.0;
  double srp_closed_form = 0.0;
  std::map<std::string, double> simulated;  // policy -> J
  double psi_lb = 0.0;
  std::optional<double> psi_mw;
  std::optional<double> psi_amw;
  double delta_bar_sr = 1.0;
  double epsilon = kDefaultAmwEpsilon;
  bool applicable = false;  // false when L_B == 0
  std::optional<BoundCheck> srp_bound;
  std::optional<BoundCheck> mw_bound;
  std::optional<BoundCheck> amw_bound;

  bool AllHold() const;
};

// `traces` maps policy names to traces; "mw" and "amw" feed their bounds.
RatioReport BuildRatioReport(const NetworkInstance& instance,
                             const LowerBoundSolution& lb,
                             const ScheduleDistribution& srp,
                             const std::map<std::string, const SimTrace*>& traces,
                             double epsilon = kDefaultAmwEpsilon);

// Ratio fields become the string "n/a" when the report is not applicable.
nlohmann::json RatioReportToJson(const RatioReport& report);

}  // namespace aoi

#endif  // AOI_ANALYSIS_H_
