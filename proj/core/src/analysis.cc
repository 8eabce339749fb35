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

#include "aoi/analysis.h"

#include <cmath>
#include <string>

#include "aoi/error.h"

namespace aoi {

namespace {

struct FrameSums {
  double d1 = 0.0;
  double d2 = 0.0;
  std::vector<double> hit;
};

FrameSums SumFrames(const NetworkInstance& instance,
                    const ScheduleDistribution& dist) {
  FrameSums f;
  f.hit.assign(instance.num_users(), 0.0);
  for (const auto& e : dist.entries()) {
    double d = FrameLength(instance, e.set);
    f.d1 += d * e.prob;
    f.d2 += d * d * e.prob;
    for (int i : e.set.members()) f.hit[i] += e.prob;
  }
  f.d1 += dist.idle_mass();
  f.d2 += dist.idle_mass();
  return f;
}

}  // namespace

double SrpExpectedAoi(const NetworkInstance& instance,
                      const ScheduleDistribution& dist) {
  dist.CheckFeasible(instance);
  FrameSums f = SumFrames(instance, dist);
  double total = 0.0;
  for (int i = 0; i < instance.num_users(); ++i) {
    if (!(f.hit[i] > 0.0)) {
      throw Error(ErrorCode::kStarvedUser,
                  "user " + std::to_string(i) + " is never scheduled");
    }
    total += instance.weight(i) * (f.d2 / (2.0 * f.d1) + f.d1 / f.hit[i] - 0.5);
  }
  return total / instance.num_users();
}

double MeanFrameLength(const NetworkInstance& instance,
                       const ScheduleDistribution& dist) {
  return SumFrames(instance, dist).d1;
}

MomentSummary ComputeMoments(const SimTrace& trace) {
  MomentSummary out;
  out.users.resize(trace.deliveries.size());
  for (std::size_t i = 0; i < trace.deliveries.size(); ++i) {
    const auto& ds = trace.deliveries[i];
    UserMoments& m = out.users[i];
    m.deliveries = static_cast<int64_t>(ds.size());
    if (ds.empty()) continue;
    for (std::size_t k = 0; k < ds.size(); ++k) {
      double w = ds[k].wait;
      double s = ds[k].service;
      double x = w + s;
      double prev = (k == 0) ? ds[0].service : ds[k - 1].service;
      m.mean_wait += w;
      m.mean_service += s;
      m.mean_wait_sq += w * w;
      m.mean_service_sq += s * s;
      m.mean_interval += x;
      m.mean_interval_sq += x * x;
      m.mean_cross += prev * x;
    }
    double n = static_cast<double>(ds.size());
    m.mean_wait /= n;
    m.mean_service /= n;
    m.mean_wait_sq /= n;
    m.mean_service_sq /= n;
    m.mean_interval /= n;
    m.mean_interval_sq /= n;
    m.mean_cross /= n;
  }
  for (const auto& f : trace.frames) {
    if (!f.complete) continue;
    ++out.complete_frames;
    out.mean_frame += f.frame_len;
    out.mean_frame_sq += static_cast<double>(f.frame_len) * f.frame_len;
  }
  if (out.complete_frames > 0) {
    out.mean_frame /= static_cast<double>(out.complete_frames);
    out.mean_frame_sq /= static_cast<double>(out.complete_frames);
  }
  return out;
}

double RenewalAoiEstimate(const SimTrace& trace, std::span<const double> weights) {
  if (weights.size() != trace.deliveries.size()) {
    throw Error(ErrorCode::kInvalidArgument, "weight vector length mismatch");
  }
  MomentSummary ms = ComputeMoments(trace);
  double total = 0.0;
  for (std::size_t i = 0; i < ms.users.size(); ++i) {
    const UserMoments& m = ms.users[i];
    if (m.deliveries < 2) {
      throw Error(ErrorCode::kInsufficientData,
                  "user " + std::to_string(i) + " has " +
                      std::to_string(m.deliveries) + " deliveries");
    }
    total += weights[i] * (m.mean_interval_sq / (2.0 * m.mean_interval) +
                           m.mean_cross / m.mean_interval - 0.5);
  }
  return total / static_cast<double>(weights.size());
}

int64_t SamplePathAgeSum(const SimTrace& trace, int user) {
  const auto& ds = trace.deliveries.at(user);
  const int64_t a0 = trace.initial_ages.at(user);
  int64_t sum = 0;
  int64_t prev_service = a0;
  for (const Delivery& d : ds) {
    const int64_t x = d.wait + d.service;
    sum += x * (x - 1) / 2 + prev_service * x;
    prev_service = d.service;
  }
  const int64_t r = trace.residuals.at(user);
  sum += (r + 1) * prev_service + r * (r + 1) / 2;
  return sum - a0;
}

double PsiLowerBound(const NetworkInstance& instance,
                     const ScheduleDistribution& lb_dist) {
  FrameSums f = SumFrames(instance, lb_dist);
  return instance.total_weight() * (f.d2 / f.d1 + 1.0) /
         (2.0 * instance.num_users());
}

double PsiMaxWeight(const SimTrace& trace) {
  MomentSummary ms = ComputeMoments(trace);
  if (ms.complete_frames == 0) {
    throw Error(ErrorCode::kInsufficientData, "trace has no complete frame");
  }
  double w = 0.0;
  for (double x : trace.weights) w += x;
  return w / (2.0 * trace.num_users()) *
         (ms.mean_frame_sq / ms.mean_frame - 1.0);
}

bool RatioReport::AllHold() const {
  for (const auto* c : {&srp_bound, &mw_bound, &amw_bound}) {
    if (c->has_value() && !(*c)->holds) return false;
  }
  return true;
}

RatioReport BuildRatioReport(
    const NetworkInstance& instance, const LowerBoundSolution& lb,
    const ScheduleDistribution& srp,
    const std::map<std::string, const SimTrace*>& traces, double epsilon) {
  RatioReport r;
  r.lower_bound = lb.value;
  r.srp_closed_form = SrpExpectedAoi(instance, srp);
  r.psi_lb = PsiLowerBound(instance, lb.distribution);
  r.delta_bar_sr = MeanFrameLength(instance, srp);
  r.epsilon = epsilon;
  for (const auto& [name, trace] : traces) {
    r.simulated[name] = WeightedAverageAoi(*trace);
  }
  if (auto it = traces.find("mw"); it != traces.end()) {
    r.psi_mw = PsiMaxWeight(*it->second);
  }
  if (auto it = traces.find("amw"); it != traces.end()) {
    r.psi_amw = PsiMaxWeight(*it->second);
  }
  r.applicable = r.lower_bound > 0.0;
  if (!r.applicable) return r;

  const double lb_value = r.lower_bound;
  const double srp_factor = 2.0 + r.psi_lb / lb_value;
  const double root = std::sqrt(2.0 * r.delta_bar_sr);
  r.srp_bound = BoundCheck{r.srp_closed_form / lb_value, srp_factor, false};
  if (r.psi_mw && r.simulated.count("mw")) {
    r.mw_bound = BoundCheck{r.simulated["mw"] / lb_value,
                            srp_factor * (root + *r.psi_mw / lb_value), false};
  }
  if (r.psi_amw && r.simulated.count("amw")) {
    r.amw_bound =
        BoundCheck{r.simulated["amw"] / lb_value,
                   srp_factor * ((4.0 + epsilon) * root + *r.psi_amw / lb_value),
                   false};
  }
  for (auto* c : {&r.srp_bound, &r.mw_bound, &r.amw_bound}) {
    if (c->has_value()) (*c)->holds = (*c)->lhs <= (*c)->rhs;
  }
  return r;
}

nlohmann::json RatioReportToJson(const RatioReport& r) {
  using nlohmann::json;
  auto check = [&](const std::optional<BoundCheck>& c) -> json {
    if (!r.applicable) return "n/a";
    if (!c) return nullptr;
    return {{"ratio", c->lhs}, {"bound", c->rhs}, {"holds", c->holds}};
  };
  auto opt = [](const std::optional<double>& v) -> json {
    return v ? json(*v) : json(nullptr);
  };
  json simulated = json::object();
  for (const auto& [name, value] : r.simulated) simulated[name] = value;
  return {{"lower_bound", r.lower_bound},
          {"srp_closed_form", r.srp_closed_form},
          {"simulated", simulated},
          {"psi_lb", r.psi_lb},
          {"psi_mw", opt(r.psi_mw)},
          {"psi_amw", opt(r.psi_amw)},
          {"delta_bar_sr", r.delta_bar_sr},
          {"epsilon", r.epsilon},
          {"rho_sr", check(r.srp_bound)},
          {"rho_mw", check(r.mw_bound)},
          {"rho_amw", check(r.amw_bound)}};
}

}  // namespace aoi
