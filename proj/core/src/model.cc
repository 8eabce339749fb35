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

#include "aoi/model.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aoi/error.h"

namespace aoi {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid argument";
    case ErrorCode::kContractViolation:
      return "contract violation";
    case ErrorCode::kDegenerateGeometry:
      return "degenerate geometry";
    case ErrorCode::kBudgetExceeded:
      return "budget exceeded";
    case ErrorCode::kNotConverged:
      return "not converged";
    case ErrorCode::kStarvedUser:
      return "starved user";
    case ErrorCode::kInstanceTooLarge:
      return "instance too large";
    case ErrorCode::kInsufficientData:
      return "insufficient data";
    case ErrorCode::kUnknownAp:
      return "unknown ap";
    case ErrorCode::kParse:
      return "parse error";
  }
  return "error";
}

double Distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double DbmPerHzToWattsPerHz(double dbm_per_hz) {
  return std::pow(10.0, dbm_per_hz / 10.0) * 1.0e-3;
}

void PhysicsParams::Validate() const {
  auto check = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(name) + " must be finite and positive");
    }
  };
  check(tx_power_watts, "tx_power_watts");
  check(pathloss_exponent, "pathloss_exponent");
  check(bandwidth_hz, "bandwidth_hz");
  check(noise_density_w_per_hz, "noise_density_w_per_hz");
  check(slot_seconds, "slot_seconds");
  if (update_size_bits <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "update_size_bits must be > 0");
  }
  check(NoisePower(), "noise power");
}

int NearestAp(std::span<const AccessPoint> aps, Point position) {
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const AccessPoint& ap : aps) {
    double d = Distance(ap.position, position);
    if (d < best_dist || (d == best_dist && ap.id < best)) {
      best = ap.id;
      best_dist = d;
    }
  }
  return best;
}

ActivationSet::ActivationSet(std::vector<int> members)
    : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate member in set");
  }
  if (!members_.empty() && members_.front() < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative user id");
  }
}

bool ActivationSet::contains(int user) const {
  return std::binary_search(members_.begin(), members_.end(), user);
}

ActivationSet ActivationSet::With(int user) const {
  ActivationSet out = *this;
  auto it = std::lower_bound(out.members_.begin(), out.members_.end(), user);
  if (it != out.members_.end() && *it == user) return out;
  out.members_.insert(it, user);
  return out;
}

ActivationSet ActivationSet::Without(int user) const {
  ActivationSet out = *this;
  auto it = std::lower_bound(out.members_.begin(), out.members_.end(), user);
  if (it != out.members_.end() && *it == user) out.members_.erase(it);
  return out;
}

namespace {

double ReceivedPower(const PhysicsParams& physics, double distance) {
  if (distance <= 0.0) return std::numeric_limits<double>::infinity();
  return physics.tx_power_watts *
         std::pow(distance, -physics.pathloss_exponent);
}

bool IsFinitePoint(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

}  // namespace

NetworkInstance::NetworkInstance(std::vector<AccessPoint> aps,
                                 std::vector<UserNode> users,
                                 PhysicsParams physics,
                                 std::vector<std::vector<double>> overlap)
    : aps_(std::move(aps)), users_(std::move(users)), physics_(physics) {
  physics_.Validate();
  if (aps_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "instance needs at least one AP");
  }
  if (users_.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "instance needs at least one user");
  }
  for (std::size_t k = 0; k < aps_.size(); ++k) {
    if (aps_[k].id != static_cast<int>(k)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "AP ids must be contiguous from 0");
    }
    if (!IsFinitePoint(aps_[k].position)) {
      throw Error(ErrorCode::kInvalidArgument, "AP position not finite");
    }
  }
  const std::size_t n = users_.size();
  partition_.assign(aps_.size(), {});
  for (std::size_t i = 0; i < n; ++i) {
    const UserNode& u = users_[i];
    if (u.id != static_cast<int>(i)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "user ids must be contiguous from 0");
    }
    if (u.ap_id < 0 || u.ap_id >= num_aps()) {
      throw Error(ErrorCode::kUnknownAp,
                  "user " + std::to_string(i) + " references unknown AP");
    }
    if (!(std::isfinite(u.weight) && u.weight > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "user weight must be > 0");
    }
    if (!IsFinitePoint(u.position)) {
      throw Error(ErrorCode::kInvalidArgument, "user position not finite");
    }
    if (NearestAp(aps_, u.position) != u.ap_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "user " + std::to_string(i) +
                      " is not associated with its nearest AP");
    }
    partition_[u.ap_id].push_back(u.id);
    total_weight_ += u.weight;
  }

  if (overlap.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "overlap matrix must be N x N");
  }
  overlap_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (overlap[i].size() != n) {
      throw Error(ErrorCode::kInvalidArgument, "overlap matrix must be N x N");
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || users_[i].ap_id == users_[j].ap_id) continue;
      double v = overlap[i][j];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, "overlap outside [0, 1]");
      }
      if (v != overlap[j][i]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "overlap matrix must be symmetric");
      }
      overlap_[Index(i, j)] = v;
    }
  }

  signal_.resize(n);
  interference_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Point ap_pos = aps_[users_[i].ap_id].position;
    signal_[i] = ReceivedPower(physics_, Distance(users_[i].position, ap_pos));
    for (std::size_t j = 0; j < n; ++j) {
      double eta = overlap_[Index(i, j)];
      if (eta == 0.0) continue;
      interference_[Index(i, j)] =
          eta * ReceivedPower(physics_, Distance(users_[j].position, ap_pos));
    }
  }
  noise_power_ = physics_.NoisePower();
  slots_at_unit_rate_ = static_cast<double>(physics_.update_size_bits) /
                        (physics_.slot_seconds * physics_.bandwidth_hz);
}

std::vector<std::vector<double>> NetworkInstance::OverlapMatrix() const {
  const std::size_t n = users_.size();
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = overlap_[Index(i, j)];
  }
  return out;
}

bool NetworkInstance::IsFeasible(const ActivationSet& set) const {
  std::vector<char> used(aps_.size(), 0);
  for (int u : set.members()) {
    if (u < 0 || u >= num_users()) return false;
    int ap = users_[u].ap_id;
    if (used[ap]) return false;
    used[ap] = 1;
  }
  return true;
}

void NetworkInstance::CheckGeometry() const {
  for (std::size_t i = 0; i < users_.size(); ++i) {
    if (!std::isfinite(signal_[i])) {
      throw Error(ErrorCode::kDegenerateGeometry,
                  "user " + std::to_string(i) + " sits on its AP");
    }
    for (std::size_t j = 0; j < users_.size(); ++j) {
      if (!std::isfinite(interference_[Index(i, j)])) {
        throw Error(ErrorCode::kDegenerateGeometry,
                    "user " + std::to_string(j) + " sits on the AP of user " +
                        std::to_string(i));
      }
    }
  }
}

double Sinr(const NetworkInstance& instance, int user,
            const ActivationSet& active) {
  if (!active.contains(user)) {
    throw Error(ErrorCode::kContractViolation,
                "user " + std::to_string(user) + " is not in the active set");
  }
  double signal = instance.signal_power(user);
  if (!std::isfinite(signal)) {
    throw Error(ErrorCode::kDegenerateGeometry,
                "user " + std::to_string(user) + " sits on its AP");
  }
  double denom = instance.noise_power();
  for (int j : active.members()) {
    if (j == user) continue;
    double p = instance.interference_power(user, j);
    if (!std::isfinite(p)) {
      throw Error(ErrorCode::kDegenerateGeometry,
                  "interferer " + std::to_string(j) + " sits on the AP of " +
                      std::to_string(user));
    }
    denom += p;
  }
  return signal / denom;
}

int SlotsForSinr(const NetworkInstance& instance, double sinr) {
  double slots = instance.slots_at_unit_rate() / std::log2(1.0 + sinr);
  return std::max(1, static_cast<int>(std::ceil(slots)));
}

double TransmissionSeconds(const PhysicsParams& physics, double sinr) {
  return static_cast<double>(physics.update_size_bits) /
         (physics.bandwidth_hz * std::log2(1.0 + sinr));
}

int TransmissionTime(const NetworkInstance& instance, int user,
                     const ActivationSet& active) {
  return SlotsForSinr(instance, Sinr(instance, user, active));
}

std::vector<int> TransmissionTimes(const NetworkInstance& instance,
                                   const ActivationSet& active) {
  std::vector<int> out;
  out.reserve(active.size());
  for (int u : active.members()) {
    out.push_back(TransmissionTime(instance, u, active));
  }
  return out;
}

int FrameLength(const NetworkInstance& instance, const ActivationSet& active) {
  int frame = 1;
  if (active.empty()) return frame;
  frame = 0;
  for (int u : active.members()) {
    frame = std::max(frame, TransmissionTime(instance, u, active));
  }
  return frame;
}

int FrameLengthInto(const NetworkInstance& instance,
                    std::span<const int> members, std::span<int> taus) {
  if (members.empty()) return 1;
  const double noise = instance.noise_power();
  const double unit = instance.slots_at_unit_rate();
  int frame = 0;
  for (std::size_t a = 0; a < members.size(); ++a) {
    const int i = members[a];
    double denom = noise;
    for (std::size_t b = 0; b < members.size(); ++b) {
      if (b != a) denom += instance.interference_power(i, members[b]);
    }
    double sinr = instance.signal_power(i) / denom;
    int tau = std::max(1, static_cast<int>(std::ceil(unit / std::log2(1.0 + sinr))));
    taus[a] = tau;
    frame = std::max(frame, tau);
  }
  return frame;
}

uint64_t CountFeasibleSets(const NetworkInstance& instance) {
  uint64_t count = 1;
  for (int k = 0; k < instance.num_aps(); ++k) {
    uint64_t factor = instance.users_of_ap(k).size() + 1;
    if (count > std::numeric_limits<uint64_t>::max() / factor) {
      return std::numeric_limits<uint64_t>::max();
    }
    count *= factor;
  }
  return count;
}

FeasibleSets::Iterator::Iterator(const NetworkInstance* instance)
    : instance_(instance), digits_(instance->num_aps(), 0), done_(false) {
  Rebuild();
}

FeasibleSets::Iterator& FeasibleSets::Iterator::operator++() {
  for (std::size_t k = 0; k < digits_.size(); ++k) {
    int limit = static_cast<int>(instance_->users_of_ap(static_cast<int>(k)).size());
    if (digits_[k] < limit) {
      ++digits_[k];
      Rebuild();
      return *this;
    }
    digits_[k] = 0;
  }
  done_ = true;
  return *this;
}

void FeasibleSets::Iterator::Rebuild() {
  std::vector<int> members;
  for (std::size_t k = 0; k < digits_.size(); ++k) {
    if (digits_[k] > 0) {
      members.push_back(instance_->users_of_ap(static_cast<int>(k))[digits_[k] - 1]);
    }
  }
  current_ = ActivationSet(std::move(members));
}

FrameTable FrameTable::Build(const NetworkInstance& instance,
                             uint64_t max_sets) {
  uint64_t count = CountFeasibleSets(instance);
  if (count > max_sets) {
    throw Error(ErrorCode::kBudgetExceeded,
                "|I| = " + std::to_string(count) + " exceeds budget " +
                    std::to_string(max_sets));
  }
  FrameTable table;
  table.frame_len_.reserve(count);
  table.offsets_.reserve(count + 1);
  std::vector<int> taus(instance.num_aps());
  for (const ActivationSet& set : FeasibleSets(instance)) {
    auto m = set.members();
    table.members_.insert(table.members_.end(), m.begin(), m.end());
    table.offsets_.push_back(table.members_.size());
    table.frame_len_.push_back(FrameLengthInto(instance, m, taus));
  }
  return table;
}

ActivationSet FrameTable::set(std::size_t s) const {
  auto m = members(s);
  return ActivationSet(std::vector<int>(m.begin(), m.end()));
}

std::vector<std::vector<double>> OverlapFromChannels(
    std::span<const AccessPoint> aps, std::span<const UserNode> users,
    const OverlapModel& model) {
  const std::size_t n = users.size();
  for (const UserNode& u : users) {
    if (u.ap_id < 0 || u.ap_id >= static_cast<int>(aps.size())) {
      throw Error(ErrorCode::kUnknownAp, "user attached to unknown AP");
    }
  }
  if (const auto* u = std::get_if<UniformCrossApOverlap>(&model)) {
    if (!(u->eta >= 0.0 && u->eta <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "eta outside [0, 1]");
    }
  }
  std::vector<std::vector<double>> out(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      int ai = users[i].ap_id;
      int aj = users[j].ap_id;
      if (i == j || ai == aj) continue;
      if (std::holds_alternative<ChannelReuseOverlap>(model)) {
        out[i][j] = aps[ai].channel == aps[aj].channel ? 1.0 : 0.0;
      } else {
        out[i][j] = std::get<UniformCrossApOverlap>(model).eta;
      }
    }
  }
  return out;
}

}  // namespace aoi
