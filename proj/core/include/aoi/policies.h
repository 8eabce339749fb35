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

// Frame schedulers.
//
// With L(t) = sum_i w_i A_i(t)^2 and a frame of length D = Delta(S) after
// which members reset to D and everybody else has aged by D, the per-slot
// drift ratio is
//
//   phi(S, A) = (L(t_b + D) - L(t_b)) / D
//             = sum_i w_i D + 2 sum_i w_i A_i - sum_{i in S} w_i (2 A_i + A_i^2 / D)
//
// Max-Weight minimises phi, i.e. maximises the drift index
//
//   index(S, A) = sum_{i in S} w_i (2 A_i + A_i^2 / D) - D sum_i w_i,
//
// which differs from -phi only by the state constant 2 sum_i w_i A_i.

#ifndef AOI_POLICIES_H_
#define AOI_POLICIES_H_

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aoi/model.h"
#include "aoi/rng.h"

namespace aoi {

struct AgeState {
  std::vector<int64_t> ages;  // slots, indexed by user id
  int64_t now = 0;
};

// Throws kInvalidArgument if the state does not match the instance.
void ValidateAges(const NetworkInstance& instance, const AgeState& ages);

struct PolicyDecision {
  ActivationSet set;
  int frame_len = 1;
  std::vector<int> taus;  // aligned with set.members()
};

// Attaches transmission times and frame length to a feasible set.
PolicyDecision MakeDecision(const NetworkInstance& instance,
                            ActivationSet set);

class ScheduleDistribution {
 public:
  struct Entry {
    ActivationSet set;
    double prob = 0.0;
  };

  ScheduleDistribution() = default;
  // Throws kInvalidArgument on negative/non-finite probabilities, total mass
  // above 1 + 1e-9, or a repeated set.
  explicit ScheduleDistribution(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  double total_mass() const { return total_mass_; }
  // Probability of the implicit one-slot idle frame.
  double idle_mass() const { return std::max(0.0, 1.0 - total_mass_); }

  // Throws kInvalidArgument if any set is infeasible for `instance`.
  void CheckFeasible(const NetworkInstance& instance) const;

 private:
  std::vector<Entry> entries_;
  double total_mass_ = 0.0;
};

double DriftIndex(const NetworkInstance& instance, const AgeState& ages,
                  const ActivationSet& set);

double DriftRatio(const NetworkInstance& instance, const AgeState& ages,
                  const ActivationSet& set);

// Exhaustive argmax of DriftIndex over every feasible set (including the
// empty one). Ties go to the lexicographically smallest member list.
PolicyDecision MwSelect(const NetworkInstance& instance, const AgeState& ages);

struct LocalSearchStats {
  int accepted_moves[2] = {0, 0};
  int64_t evaluations = 0;
  // -phi of the seed and after every accepted move, per pass.
  std::vector<double> pass_values[2];
};

// Two-pass Delete/Add/Exchange local search over the partition matroid,
// maximising -phi. A move from S to S' is accepted when
//   -phi(S') > -phi(S) + (epsilon / N^4) |-phi(S)|,
// which is the multiplicative (1 + epsilon/N^4) rule for positive values and
// still a strict improvement when -phi(S) <= 0. Returns the better pass.
PolicyDecision AmwSelect(const NetworkInstance& instance, const AgeState& ages,
                         double epsilon, LocalSearchStats* stats = nullptr);

inline constexpr double kDefaultAmwEpsilon = 0.1;

// Draws a set with probability mu_S; the residual mass idles for one slot.
PolicyDecision SrpSample(const NetworkInstance& instance,
                         const ScheduleDistribution& dist, RngStream& rng);

// Per-AP Max-Weight used by the uncoordinated baseline: argmax over users of
// `ap` of w_i (2 A_i + A_i^2 / tau_i({i})), lowest id on ties. Returns
// nullopt for an AP without users; throws kUnknownAp for a bad id.
std::optional<int> BaselineSingleApSelect(const NetworkInstance& instance,
                                          const AgeState& ages, int ap);

// Frame-synchronous policy consumed by the simulator.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string name() const = 0;
  virtual PolicyDecision Select(const AgeState& ages,
                                RngStream& rng) const = 0;
};

class MaxWeightScheduler : public Scheduler {
 public:
  // Frame lengths are tabulated once when |I| <= table_limit; larger
  // instances enumerate on the fly. Both paths give identical decisions.
  explicit MaxWeightScheduler(const NetworkInstance& instance,
                              uint64_t table_limit = uint64_t{1} << 20);
  std::string name() const override { return "mw"; }
  PolicyDecision Select(const AgeState& ages, RngStream& rng) const override;
  bool uses_table() const { return table_.has_value(); }

 private:
  const NetworkInstance& instance_;
  std::optional<FrameTable> table_;
};

class ApproxMaxWeightScheduler : public Scheduler {
 public:
  ApproxMaxWeightScheduler(const NetworkInstance& instance,
                           double epsilon = kDefaultAmwEpsilon);
  std::string name() const override { return "amw"; }
  PolicyDecision Select(const AgeState& ages, RngStream& rng) const override;

 private:
  const NetworkInstance& instance_;
  double epsilon_;
};

class RandomizedScheduler : public Scheduler {
 public:
  RandomizedScheduler(const NetworkInstance& instance,
                      ScheduleDistribution dist);
  std::string name() const override { return "srp"; }
  PolicyDecision Select(const AgeState& ages, RngStream& rng) const override;
  const ScheduleDistribution& distribution() const { return dist_; }

 private:
  const NetworkInstance& instance_;
  ScheduleDistribution dist_;
  std::vector<PolicyDecision> decisions_;
};

}  // namespace aoi

#endif  // AOI_POLICIES_H_
