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

#include "aoi/policies.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "aoi/error.h"

namespace aoi {

void ValidateAges(const NetworkInstance& instance, const AgeState& ages) {
  if (static_cast<int>(ages.ages.size()) != instance.num_users()) {
    throw Error(ErrorCode::kInvalidArgument,
                "age vector length does not match the number of users");
  }
  for (int64_t a : ages.ages) {
    if (a < 0) throw Error(ErrorCode::kInvalidArgument, "negative age");
  }
}

PolicyDecision MakeDecision(const NetworkInstance& instance,
                            ActivationSet set) {
  if (!instance.IsFeasible(set)) {
    throw Error(ErrorCode::kInvalidArgument, "infeasible activation set");
  }
  PolicyDecision d;
  d.taus.resize(set.size());
  d.frame_len = FrameLengthInto(instance, set.members(), d.taus);
  d.set = std::move(set);
  return d;
}

ScheduleDistribution::ScheduleDistribution(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  std::vector<const ActivationSet*> seen;
  for (const Entry& e : entries_) {
    if (!(std::isfinite(e.prob) && e.prob >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "probabilities must be finite and non-negative");
    }
    total_mass_ += e.prob;
    seen.push_back(&e.set);
  }
  if (total_mass_ > 1.0 + 1e-9) {
    throw Error(ErrorCode::kInvalidArgument,
                "probabilities sum to more than one");
  }
  std::sort(seen.begin(), seen.end(),
            [](const ActivationSet* a, const ActivationSet* b) { return *a < *b; });
  for (std::size_t i = 1; i < seen.size(); ++i) {
    if (*seen[i] == *seen[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument, "repeated set in distribution");
    }
  }
}

void ScheduleDistribution::CheckFeasible(
    const NetworkInstance& instance) const {
  for (const Entry& e : entries_) {
    if (!instance.IsFeasible(e.set)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "distribution contains an infeasible set");
    }
  }
}

namespace {

// Per-state coefficients of the drift index: w_i * 2 A_i and w_i * A_i^2.
struct IndexTerms {
  std::vector<double> linear;
  std::vector<double> quadratic;
  double total_weight = 0.0;
  double age_constant = 0.0;  // 2 sum_i w_i A_i
};

IndexTerms MakeTerms(const NetworkInstance& instance, const AgeState& ages) {
  ValidateAges(instance, ages);
  IndexTerms t;
  const int n = instance.num_users();
  t.linear.resize(n);
  t.quadratic.resize(n);
  for (int i = 0; i < n; ++i) {
    double a = static_cast<double>(ages.ages[i]);
    double w = instance.weight(i);
    t.linear[i] = w * 2.0 * a;
    t.quadratic[i] = w * a * a;
    t.age_constant += w * 2.0 * a;
  }
  t.total_weight = instance.total_weight();
  return t;
}

double IndexValue(const IndexTerms& t, std::span<const int> members,
                  int frame_len) {
  const double d = frame_len;
  double sum = 0.0;
  for (int i : members) sum += t.linear[i] + t.quadratic[i] / d;
  return sum - t.total_weight * d;
}

bool LexLess(std::span<const int> a, std::span<const int> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Keeps the running argmax with the lexicographic tie rule.
struct BestSet {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<int> members;
  bool found = false;

  void Offer(double v, std::span<const int> m) {
    if (!found || v > value || (v == value && LexLess(m, members))) {
      value = v;
      members.assign(m.begin(), m.end());
      found = true;
    }
  }
};

void InsertSorted(std::vector<int>& v, int x) {
  v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

}  // namespace

double DriftIndex(const NetworkInstance& instance, const AgeState& ages,
                  const ActivationSet& set) {
  IndexTerms t = MakeTerms(instance, ages);
  return IndexValue(t, set.members(), FrameLength(instance, set));
}

double DriftRatio(const NetworkInstance& instance, const AgeState& ages,
                  const ActivationSet& set) {
  ValidateAges(instance, ages);
  const int d = FrameLength(instance, set);
  double before = 0.0;
  double after = 0.0;
  for (int i = 0; i < instance.num_users(); ++i) {
    double a = static_cast<double>(ages.ages[i]);
    double w = instance.weight(i);
    before += w * a * a;
    double next = set.contains(i) ? d : a + d;
    after += w * next * next;
  }
  return (after - before) / d;
}

namespace {

// Visits every feasible set as a sorted member span without allocating.
template <typename Visit>
void ForEachFeasible(const NetworkInstance& instance, Visit&& visit) {
  const int k = instance.num_aps();
  std::vector<int> digits(k, 0);
  std::vector<int> members;
  members.reserve(k);
  while (true) {
    members.clear();
    for (int ap = 0; ap < k; ++ap) {
      if (digits[ap] > 0) {
        members.push_back(instance.users_of_ap(ap)[digits[ap] - 1]);
      }
    }
    // Users of one AP need not precede the next AP's users in id order.
    for (std::size_t a = 1; a < members.size(); ++a) {
      int x = members[a];
      std::size_t b = a;
      for (; b > 0 && members[b - 1] > x; --b) members[b] = members[b - 1];
      members[b] = x;
    }
    visit(std::span<const int>(members));
    int ap = 0;
    for (; ap < k; ++ap) {
      if (digits[ap] < static_cast<int>(instance.users_of_ap(ap).size())) {
        ++digits[ap];
        break;
      }
      digits[ap] = 0;
    }
    if (ap == k) return;
  }
}

PolicyDecision MwSelectImpl(const NetworkInstance& instance,
                            const AgeState& ages, const FrameTable* table) {
  IndexTerms t = MakeTerms(instance, ages);
  BestSet best;
  if (table != nullptr) {
    for (std::size_t s = 0; s < table->size(); ++s) {
      auto m = table->members(s);
      best.Offer(IndexValue(t, m, table->frame_length(s)), m);
    }
  } else {
    std::vector<int> taus(instance.num_aps());
    ForEachFeasible(instance, [&](std::span<const int> m) {
      int frame = FrameLengthInto(instance, m, taus);
      best.Offer(IndexValue(t, m, frame), m);
    });
  }
  return MakeDecision(instance, ActivationSet(std::move(best.members)));
}

}  // namespace

PolicyDecision MwSelect(const NetworkInstance& instance, const AgeState& ages) {
  return MwSelectImpl(instance, ages, nullptr);
}

PolicyDecision AmwSelect(const NetworkInstance& instance, const AgeState& ages,
                         double epsilon, LocalSearchStats* stats) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  const IndexTerms t = MakeTerms(instance, ages);
  const int n = instance.num_users();
  const double n2 = static_cast<double>(n) * n;
  const double margin = epsilon / (n2 * n2);
  LocalSearchStats local;
  std::vector<int> taus(instance.num_aps());

  auto objective = [&](std::span<const int> m) {
    ++local.evaluations;
    int frame = FrameLengthInto(instance, m, taus);
    return IndexValue(t, m, frame) - t.age_constant;
  };
  auto improves = [&](double candidate, double current) {
    return candidate > current + margin * std::abs(current);
  };

  std::vector<char> in_ground(n, 1);
  std::vector<int> occupant(instance.num_aps(), -1);
  BestSet overall;
  std::vector<int> current;
  std::vector<int> candidate;
  current.reserve(instance.num_aps());
  candidate.reserve(instance.num_aps() + 1);

  for (int pass = 0; pass < 2; ++pass) {
    int seed = -1;
    double seed_value = 0.0;
    for (int u = 0; u < n; ++u) {
      if (!in_ground[u]) continue;
      int single[1] = {u};
      double v = objective(single);
      if (seed < 0 || v > seed_value) {
        seed = u;
        seed_value = v;
      }
    }
    if (seed < 0) break;

    current.assign(1, seed);
    double value = seed_value;
    if (stats != nullptr) local.pass_values[pass].push_back(value);
    std::fill(occupant.begin(), occupant.end(), -1);
    occupant[instance.ap_of(seed)] = seed;

    auto accept = [&](double v) {
      for (int m : current) occupant[instance.ap_of(m)] = -1;
      current.swap(candidate);
      for (int m : current) occupant[instance.ap_of(m)] = m;
      value = v;
      ++local.accepted_moves[pass];
      if (stats != nullptr) local.pass_values[pass].push_back(v);
    };

    bool moved = true;
    while (moved) {
      moved = false;
      // Delete.
      for (std::size_t idx = 0; idx < current.size() && !moved; ++idx) {
        candidate = current;
        candidate.erase(candidate.begin() + idx);
        double v = objective(candidate);
        if (improves(v, value)) {
          accept(v);
          moved = true;
        }
      }
      // Exchange (i = none is the Add move).
      for (int j = 0; j < n && !moved; ++j) {
        if (!in_ground[j] || occupant[instance.ap_of(j)] == j) continue;
        const int blocker = occupant[instance.ap_of(j)];
        if (blocker >= 0) {
          candidate = current;
          candidate.erase(std::find(candidate.begin(), candidate.end(), blocker));
          InsertSorted(candidate, j);
          double v = objective(candidate);
          if (improves(v, value)) {
            accept(v);
            moved = true;
          }
          continue;
        }
        candidate = current;
        InsertSorted(candidate, j);
        double v = objective(candidate);
        if (improves(v, value)) {
          accept(v);
          moved = true;
          break;
        }
        for (std::size_t idx = 0; idx < current.size(); ++idx) {
          candidate = current;
          candidate.erase(candidate.begin() + idx);
          InsertSorted(candidate, j);
          double w = objective(candidate);
          if (improves(w, value)) {
            accept(w);
            moved = true;
            break;
          }
        }
      }
    }

    overall.Offer(value, current);
    for (int m : current) in_ground[m] = 0;
  }

  if (stats != nullptr) *stats = local;
  return MakeDecision(instance, ActivationSet(std::move(overall.members)));
}

PolicyDecision SrpSample(const NetworkInstance& instance,
                         const ScheduleDistribution& dist, RngStream& rng) {
  double u = rng.Uniform();
  double cumulative = 0.0;
  for (const auto& e : dist.entries()) {
    cumulative += e.prob;
    if (u < cumulative) return MakeDecision(instance, e.set);
  }
  return MakeDecision(instance, ActivationSet());
}

std::optional<int> BaselineSingleApSelect(const NetworkInstance& instance,
                                          const AgeState& ages, int ap) {
  if (ap < 0 || ap >= instance.num_aps()) {
    throw Error(ErrorCode::kUnknownAp, "AP " + std::to_string(ap));
  }
  ValidateAges(instance, ages);
  std::optional<int> best;
  double best_value = 0.0;
  for (int i : instance.users_of_ap(ap)) {
    double a = static_cast<double>(ages.ages[i]);
    int tau = TransmissionTime(instance, i, ActivationSet{i});
    double v = instance.weight(i) * (2.0 * a + a * a / tau);
    if (!best || v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return best;
}

MaxWeightScheduler::MaxWeightScheduler(const NetworkInstance& instance,
                                       uint64_t table_limit)
    : instance_(instance) {
  instance_.CheckGeometry();
  if (CountFeasibleSets(instance_) <= table_limit) {
    table_ = FrameTable::Build(instance_, table_limit);
  }
}

PolicyDecision MaxWeightScheduler::Select(const AgeState& ages,
                                          RngStream& /*rng*/) const {
  return MwSelectImpl(instance_, ages, table_ ? &*table_ : nullptr);
}

ApproxMaxWeightScheduler::ApproxMaxWeightScheduler(
    const NetworkInstance& instance, double epsilon)
    : instance_(instance), epsilon_(epsilon) {
  instance_.CheckGeometry();
  if (!(epsilon_ > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
}

PolicyDecision ApproxMaxWeightScheduler::Select(const AgeState& ages,
                                                RngStream& /*rng*/) const {
  return AmwSelect(instance_, ages, epsilon_);
}

RandomizedScheduler::RandomizedScheduler(const NetworkInstance& instance,
                                         ScheduleDistribution dist)
    : instance_(instance), dist_(std::move(dist)) {
  instance_.CheckGeometry();
  dist_.CheckFeasible(instance_);
  decisions_.reserve(dist_.entries().size() + 1);
  for (const auto& e : dist_.entries()) {
    decisions_.push_back(MakeDecision(instance_, e.set));
  }
  decisions_.push_back(MakeDecision(instance_, ActivationSet()));
}

PolicyDecision RandomizedScheduler::Select(const AgeState& /*ages*/,
                                           RngStream& rng) const {
  double u = rng.Uniform();
  double cumulative = 0.0;
  const auto& entries = dist_.entries();
  for (std::size_t s = 0; s < entries.size(); ++s) {
    cumulative += entries[s].prob;
    if (u < cumulative) return decisions_[s];
  }
  return decisions_.back();
}

}  // namespace aoi
