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

// Physical network model: APs, users, the SINR-driven transmission time of a
// user inside an activation set, and the partition-matroid family of feasible
// activation sets (at most one transmitting user per AP).

#ifndef AOI_MODEL_H_
#define AOI_MODEL_H_

#include <compare>
#include <cstdint>
#include <iterator>
#include <span>
#include <variant>
#include <vector>

namespace aoi {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double Distance(Point a, Point b);

// Converts a noise density given in dBm/Hz to W/Hz.
double DbmPerHzToWattsPerHz(double dbm_per_hz);

// Bits in one "100 KB" update (binary kilobytes).
inline constexpr int64_t kDefaultUpdateBits = 100 * 1024 * 8;

struct PhysicsParams {
  double tx_power_watts = 0.010;
  double pathloss_exponent = 2.5;
  double bandwidth_hz = 22.0e6;
  double noise_density_w_per_hz = DbmPerHzToWattsPerHz(-174.0);
  int64_t update_size_bits = kDefaultUpdateBits;
  double slot_seconds = 1.0e-4;

  // Throws kInvalidArgument unless every field is finite and positive.
  void Validate() const;
  double NoisePower() const { return noise_density_w_per_hz * bandwidth_hz; }
};

struct AccessPoint {
  int id = 0;
  Point position;
  int channel = 1;
};

struct UserNode {
  int id = 0;
  Point position;
  int ap_id = 0;
  double weight = 1.0;
};

// Index of the AP closest to `position`; ties go to the lowest id.
int NearestAp(std::span<const AccessPoint> aps, Point position);

// A set of concurrently transmitting users, stored as a sorted id list.
// Ordering is lexicographic on that list, so the empty set sorts first.
class ActivationSet {
 public:
  ActivationSet() = default;
  // Sorts `members`; throws kInvalidArgument on duplicates or negative ids.
  explicit ActivationSet(std::vector<int> members);
  ActivationSet(std::initializer_list<int> members)
      : ActivationSet(std::vector<int>(members)) {}

  std::span<const int> members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::size_t size() const { return members_.size(); }
  bool contains(int user) const;

  ActivationSet With(int user) const;
  ActivationSet Without(int user) const;

  auto operator<=>(const ActivationSet&) const = default;
  bool operator==(const ActivationSet&) const = default;

 private:
  std::vector<int> members_;
};

// Immutable network description. Construction validates every invariant and
// caches received powers so that SINR evaluation is a handful of flops.
class NetworkInstance {
 public:
  // `overlap` is N x N; only cross-AP entries are consulted and same-AP
  // entries are stored as 0.
  NetworkInstance(std::vector<AccessPoint> aps, std::vector<UserNode> users,
                  PhysicsParams physics,
                  std::vector<std::vector<double>> overlap);

  const std::vector<AccessPoint>& aps() const { return aps_; }
  const std::vector<UserNode>& users() const { return users_; }
  const PhysicsParams& physics() const { return physics_; }
  int num_users() const { return static_cast<int>(users_.size()); }
  int num_aps() const { return static_cast<int>(aps_.size()); }

  double overlap(int i, int j) const { return overlap_[Index(i, j)]; }
  std::vector<std::vector<double>> OverlapMatrix() const;

  // Users associated with AP `ap`, ascending.
  std::span<const int> users_of_ap(int ap) const { return partition_[ap]; }
  int ap_of(int user) const { return users_[user].ap_id; }
  double weight(int user) const { return users_[user].weight; }
  double total_weight() const { return total_weight_; }

  // P0 d_ik^-a for user i to its own AP.
  double signal_power(int user) const { return signal_[user]; }
  // eta_ij P0 d_jk^-a: what interferer j delivers at victim i's AP.
  double interference_power(int victim, int interferer) const {
    return interference_[Index(victim, interferer)];
  }
  double noise_power() const { return noise_power_; }

  // Continuous slots needed at unit spectral efficiency: L / (T_s B).
  double slots_at_unit_rate() const { return slots_at_unit_rate_; }

  bool IsFeasible(const ActivationSet& set) const;

  // Throws kDegenerateGeometry if any user sits on its own AP or on the AP
  // of a user it can interfere with. Hot paths call this once up front.
  void CheckGeometry() const;

 private:
  std::size_t Index(int i, int j) const {
    return static_cast<std::size_t>(i) * users_.size() + j;
  }

  std::vector<AccessPoint> aps_;
  std::vector<UserNode> users_;
  PhysicsParams physics_;
  std::vector<double> overlap_;
  std::vector<std::vector<int>> partition_;
  std::vector<double> signal_;
  std::vector<double> interference_;
  double noise_power_ = 0.0;
  double slots_at_unit_rate_ = 0.0;
  double total_weight_ = 0.0;
};

// Linear SINR of `user` while `active` transmits. Throws kContractViolation
// if the user is not in the set and kDegenerateGeometry on zero distances.
double Sinr(const NetworkInstance& instance, int user,
            const ActivationSet& active);

// Ceil of (L/T_s) / (B log2(1 + sinr)), in slots.
int SlotsForSinr(const NetworkInstance& instance, double sinr);

// Un-rounded transmission duration in seconds: L / (B log2(1 + sinr)).
double TransmissionSeconds(const PhysicsParams& physics, double sinr);

int TransmissionTime(const NetworkInstance& instance, int user,
                     const ActivationSet& active);

// Per-member transmission times, aligned with active.members().
std::vector<int> TransmissionTimes(const NetworkInstance& instance,
                                   const ActivationSet& active);

// Slowest member's transmission time; the empty frame lasts one slot.
int FrameLength(const NetworkInstance& instance, const ActivationSet& active);

// Allocation-free transmission-time kernel for hot loops. `members` must be
// feasible and sorted; writes one entry per member into `taus` and returns
// the frame length (1 for an empty span). No validation is performed.
int FrameLengthInto(const NetworkInstance& instance,
                    std::span<const int> members, std::span<int> taus);

// |I| = prod_k (|N_k| + 1), saturating at UINT64_MAX.
uint64_t CountFeasibleSets(const NetworkInstance& instance);

// Lazy odometer over every feasible activation set, starting from the empty
// set. Each AP contributes a digit ranging over "idle" and its users.
class FeasibleSets {
 public:
  class Iterator {
   public:
    using value_type = ActivationSet;
    using difference_type = std::ptrdiff_t;
    using reference = const ActivationSet&;
    using pointer = const ActivationSet*;
    using iterator_category = std::input_iterator_tag;

    Iterator() = default;
    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    Iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return done_; }

   private:
    friend class FeasibleSets;
    explicit Iterator(const NetworkInstance* instance);
    void Rebuild();

    const NetworkInstance* instance_ = nullptr;
    std::vector<int> digits_;
    ActivationSet current_;
    bool done_ = true;
  };

  explicit FeasibleSets(const NetworkInstance& instance)
      : instance_(&instance) {}
  Iterator begin() const { return Iterator(instance_); }
  std::default_sentinel_t end() const { return {}; }

 private:
  const NetworkInstance* instance_;
};

// Every feasible set with its frame length, in FeasibleSets order. Members are
// stored flat so that a 10^5-set table is a few contiguous arrays.
class FrameTable {
 public:
  // Throws kBudgetExceeded (message carries |I|) if |I| > max_sets.
  static FrameTable Build(const NetworkInstance& instance, uint64_t max_sets);

  std::size_t size() const { return frame_len_.size(); }
  std::span<const int> members(std::size_t s) const {
    return std::span<const int>(members_).subspan(
        offsets_[s], offsets_[s + 1] - offsets_[s]);
  }
  ActivationSet set(std::size_t s) const;
  int frame_length(std::size_t s) const { return frame_len_[s]; }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<int> members_;
  std::vector<int> frame_len_;
};

// Users on the same channel fully overlap, distinct channels are orthogonal.
struct ChannelReuseOverlap {};
// Every cross-AP pair gets the same overlap factor.
struct UniformCrossApOverlap {
  double eta = 0.0;
};
using OverlapModel = std::variant<ChannelReuseOverlap, UniformCrossApOverlap>;

// Builds the N x N overlap matrix for `users` attached to `aps`. Same-AP
// pairs and the diagonal are 0. Throws kInvalidArgument for an eta outside
// [0, 1] or a user attached to an unknown AP.
std::vector<std::vector<double>> OverlapFromChannels(
    std::span<const AccessPoint> aps, std::span<const UserNode> users,
    const OverlapModel& model);

}  // namespace aoi

#endif  // AOI_MODEL_H_
