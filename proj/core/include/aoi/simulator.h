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

// Slotted simulation.
//
// Slot t covers (t-1, t]; A_i(t) is the age at the end of slot t and A_i(0)
// is the initial age. In frame-synchronous mode a decision taken at t_b with
// frame length D occupies slots t_b+1 .. t_b+D. During slot t_b+s every age
// grows by one, except that a member with tau_i = s resets to tau_i.
//
// The baseline runs every AP on its own clock: an idle AP starts its next
// transmission in the very next slot, and each active user drains
// T_s B log2(1 + SINR_i(S(t))) bits per slot given the set S(t) active in that
// slot. A user whose transmission started in slot t0 and finishes in slot t
// resets to t - t0 + 1.

#ifndef AOI_SIMULATOR_H_
#define AOI_SIMULATOR_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "aoi/model.h"
#include "aoi/policies.h"

namespace aoi {

enum class ResetMode {
  kAtCompletion,  // each member resets when its own transmission ends
  kAtFrameEnd,    // all members reset to D at the end of the frame
};

struct SimConfig {
  int64_t horizon_slots = 10000;
  uint64_t seed = 1;
  ResetMode reset = ResetMode::kAtCompletion;
  // Empty means all zeros.
  std::vector<int64_t> initial_ages;
  // Called after every slot with (t, A(t)).
  std::function<void(int64_t, std::span<const int64_t>)> observer;
};

struct Delivery {
  int64_t slot = 0;     // completion slot c_m
  int64_t reset = 0;    // age right after delivery; equals the service time
  int64_t wait = 0;     // W[m] = c_m - c_{m-1} - S[m], with c_0 = 0
  int64_t service = 0;  // S[m]
};

struct FrameRecord {
  int64_t start = 0;  // t_b
  ActivationSet set;
  int frame_len = 1;
  double decision_seconds = 0.0;
  bool complete = true;  // ended within the horizon
};

struct SimTrace {
  int64_t horizon = 0;
  std::vector<double> weights;
  std::vector<int64_t> initial_ages;
  std::vector<int64_t> final_ages;
  // sum_{t=1}^{T} A_i(t), exact.
  std::vector<int64_t> age_sums;
  // sum_i w_i A_i(t) for t = 1..T.
  std::vector<double> slot_weighted_sums;
  std::vector<std::vector<Delivery>> deliveries;
  // Frames (frame-synchronous) or individual transmissions (baseline).
  std::vector<FrameRecord> frames;
  // R_i = T - (last completion slot).
  std::vector<int64_t> residuals;

  int num_users() const { return static_cast<int>(weights.size()); }
  int64_t CompleteFrames() const;
  int64_t TotalDeliveries() const;
  double MeanDecisionSeconds() const;
};

// Throws kInvalidArgument for a non-positive horizon or bad initial ages.
SimTrace RunFrameSynchronous(const NetworkInstance& instance,
                             const Scheduler& policy, const SimConfig& config);

SimTrace RunAsynchronousBaseline(const NetworkInstance& instance,
                                 const SimConfig& config);

// (1 / (N T)) sum_t sum_i w_i A_i(t), evaluated from the exact per-user sums.
double WeightedAverageAoi(const SimTrace& trace,
                          std::span<const double> weights);
double WeightedAverageAoi(const SimTrace& trace);

// One JSON object per frame record per line.
void WriteTraceJsonl(const SimTrace& trace, const std::filesystem::path& path);

}  // namespace aoi

#endif  // AOI_SIMULATOR_H_
