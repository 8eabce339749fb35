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

#include "aoi/simulator.h"

#include <chrono>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "aoi/error.h"

namespace aoi {

int64_t SimTrace::CompleteFrames() const {
  int64_t n = 0;
  for (const auto& f : frames) n += f.complete ? 1 : 0;
  return n;
}

int64_t SimTrace::TotalDeliveries() const {
  int64_t n = 0;
  for (const auto& d : deliveries) n += static_cast<int64_t>(d.size());
  return n;
}

double SimTrace::MeanDecisionSeconds() const {
  if (frames.empty()) return 0.0;
  double total = 0.0;
  for (const auto& f : frames) total += f.decision_seconds;
  return total / static_cast<double>(frames.size());
}

namespace {

using Clock = std::chrono::steady_clock;

// Owns A(t) and everything the trace accumulates slot by slot.
class AgeBook {
 public:
  AgeBook(const NetworkInstance& instance, const SimConfig& config)
      : config_(config) {
    if (config.horizon_slots < 1) {
      throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 1");
    }
    const int n = instance.num_users();
    state_.ages.assign(n, 0);
    if (!config.initial_ages.empty()) {
      if (static_cast<int>(config.initial_ages.size()) != n) {
        throw Error(ErrorCode::kInvalidArgument,
                    "initial ages must have one entry per user");
      }
      state_.ages = config.initial_ages;
    }
    ValidateAges(instance, state_);
    trace_.horizon = config.horizon_slots;
    trace_.weights.resize(n);
    for (int i = 0; i < n; ++i) trace_.weights[i] = instance.weight(i);
    trace_.initial_ages = state_.ages;
    trace_.age_sums.assign(n, 0);
    trace_.slot_weighted_sums.reserve(config.horizon_slots);
    trace_.deliveries.resize(n);
    last_completion_.assign(n, 0);
  }

  const AgeState& state() const { return state_; }
  int64_t now() const { return state_.now; }
  bool done() const { return state_.now >= trace_.horizon; }
  SimTrace& trace() { return trace_; }

  // Ages everybody by one slot; Reset() may then overwrite individual users.
  void BeginSlot() {
    ++state_.now;
    for (auto& a : state_.ages) ++a;
  }

  void Reset(int user, int64_t value) {
    state_.ages[user] = value;
    Delivery d;
    d.slot = state_.now;
    d.reset = value;
    d.service = value;
    d.wait = state_.now - last_completion_[user] - value;
    trace_.deliveries[user].push_back(d);
    last_completion_[user] = state_.now;
  }

  void EndSlot() {
    double weighted = 0.0;
    for (std::size_t i = 0; i < state_.ages.size(); ++i) {
      trace_.age_sums[i] += state_.ages[i];
      weighted += trace_.weights[i] * static_cast<double>(state_.ages[i]);
    }
    trace_.slot_weighted_sums.push_back(weighted);
    if (config_.observer) config_.observer(state_.now, state_.ages);
  }

  SimTrace Finish() {
    trace_.final_ages = state_.ages;
    trace_.residuals.resize(last_completion_.size());
    for (std::size_t i = 0; i < last_completion_.size(); ++i) {
      trace_.residuals[i] = trace_.horizon - last_completion_[i];
    }
    return std::move(trace_);
  }

 private:
  const SimConfig& config_;
  AgeState state_;
  SimTrace trace_;
  std::vector<int64_t> last_completion_;
};

}  // namespace

SimTrace RunFrameSynchronous(const NetworkInstance& instance,
                             const Scheduler& policy,
                             const SimConfig& config) {
  instance.CheckGeometry();
  AgeBook book(instance, config);
  RngStream rng(config.seed, "policy");
  while (!book.done()) {
    const auto t0 = Clock::now();
    PolicyDecision decision = policy.Select(book.state(), rng);
    const auto t1 = Clock::now();

    FrameRecord frame;
    frame.start = book.now();
    frame.frame_len = decision.frame_len;
    frame.decision_seconds = std::chrono::duration<double>(t1 - t0).count();
    frame.complete = book.now() + decision.frame_len <= config.horizon_slots;
    auto members = decision.set.members();
    for (int s = 1; s <= decision.frame_len && !book.done(); ++s) {
      book.BeginSlot();
      if (config.reset == ResetMode::kAtCompletion) {
        for (std::size_t m = 0; m < members.size(); ++m) {
          if (decision.taus[m] == s) book.Reset(members[m], s);
        }
      } else if (s == decision.frame_len) {
        for (int i : members) book.Reset(i, decision.frame_len);
      }
      book.EndSlot();
    }
    frame.set = std::move(decision.set);
    book.trace().frames.push_back(std::move(frame));
  }
  return book.Finish();
}

SimTrace RunAsynchronousBaseline(const NetworkInstance& instance,
                                 const SimConfig& config) {
  instance.CheckGeometry();
  AgeBook book(instance, config);
  const int k = instance.num_aps();
  const PhysicsParams& phy = instance.physics();
  const double bits_needed =
      static_cast<double>(phy.update_size_bits) * (1.0 - 1e-12);
  const double bits_per_slot_per_bit_hz = phy.slot_seconds * phy.bandwidth_hz;

  struct ApState {
    int user = -1;
    int64_t start = 0;  // first slot of the transmission
    double delivered = 0.0;
    double decision_seconds = 0.0;
  };
  std::vector<ApState> aps(k);
  std::vector<int> active;
  active.reserve(k);

  while (!book.done()) {
    // Idle APs pick their next user from A(t-1).
    for (int ap = 0; ap < k; ++ap) {
      if (aps[ap].user >= 0) continue;
      const auto t0 = Clock::now();
      std::optional<int> next = BaselineSingleApSelect(instance, book.state(), ap);
      const auto t1 = Clock::now();
      if (!next) continue;
      aps[ap].user = *next;
      aps[ap].start = book.now() + 1;
      aps[ap].delivered = 0.0;
      aps[ap].decision_seconds = std::chrono::duration<double>(t1 - t0).count();
    }
    active.clear();
    for (const auto& a : aps) {
      if (a.user >= 0) active.push_back(a.user);
    }
    book.BeginSlot();
    for (int ap = 0; ap < k; ++ap) {
      ApState& a = aps[ap];
      if (a.user < 0) continue;
      double interference = 0.0;
      for (int j : active) {
        if (j != a.user) interference += instance.interference_power(a.user, j);
      }
      double sinr = instance.signal_power(a.user) /
                    (instance.noise_power() + interference);
      a.delivered += bits_per_slot_per_bit_hz * std::log2(1.0 + sinr);
      if (a.delivered >= bits_needed) {
        const int64_t elapsed = book.now() - a.start + 1;
        book.Reset(a.user, elapsed);
        FrameRecord rec;
        rec.start = a.start - 1;
        rec.set = ActivationSet{a.user};
        rec.frame_len = static_cast<int>(elapsed);
        rec.decision_seconds = a.decision_seconds;
        book.trace().frames.push_back(std::move(rec));
        a.user = -1;
      }
    }
    book.EndSlot();
  }
  // Transmissions cut off by the horizon.
  for (const auto& a : aps) {
    if (a.user < 0) continue;
    FrameRecord rec;
    rec.start = a.start - 1;
    rec.set = ActivationSet{a.user};
    rec.frame_len = static_cast<int>(config.horizon_slots - a.start + 1);
    rec.decision_seconds = a.decision_seconds;
    rec.complete = false;
    book.trace().frames.push_back(std::move(rec));
  }
  return book.Finish();
}

double WeightedAverageAoi(const SimTrace& trace,
                          std::span<const double> weights) {
  if (trace.horizon < 1 || trace.age_sums.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty trace");
  }
  if (weights.size() != trace.age_sums.size()) {
    throw Error(ErrorCode::kInvalidArgument, "weight vector length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    total += weights[i] * static_cast<double>(trace.age_sums[i]);
  }
  return total / (static_cast<double>(weights.size()) *
                  static_cast<double>(trace.horizon));
}

double WeightedAverageAoi(const SimTrace& trace) {
  return WeightedAverageAoi(trace, trace.weights);
}

void WriteTraceJsonl(const SimTrace& trace, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParse, "cannot write " + path.string());
  for (const auto& f : trace.frames) {
    std::vector<int> members(f.set.members().begin(), f.set.members().end());
    nlohmann::json line = {{"t_b", f.start},
                           {"set", members},
                           {"frame_len", f.frame_len},
                           {"decision_us", f.decision_seconds * 1e6},
                           {"complete", f.complete}};
    out << line.dump() << '\n';
  }
}

}  // namespace aoi
