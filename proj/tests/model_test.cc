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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "aoi/error.h"
#include "aoi/model.h"
#include "test_util.h"

namespace aoi {
namespace {

using testing::MakeInstance;
using testing::Members;
using testing::RandomLineInstance;
using testing::RefFeasibleSets;
using testing::RefFrame;
using testing::RefSinr;
using testing::RefTau;

template <typename F>
ErrorCode CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::kParse;
}

TEST(PhysicsTest, NoiseDensityConversion) {
  // -174 dBm/Hz = 10^(-17.4) mW/Hz.
  EXPECT_NEAR(DbmPerHzToWattsPerHz(-174.0), std::pow(10.0, -20.4), 1e-33);
  PhysicsParams p;
  EXPECT_EQ(p.update_size_bits, 819200);
  EXPECT_DOUBLE_EQ(p.NoisePower(), p.noise_density_w_per_hz * 22e6);
}

TEST(PhysicsTest, ValidateRejectsNonPositive) {
  PhysicsParams p;
  p.bandwidth_hz = 0.0;
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
  p = {};
  p.slot_seconds = -1.0;
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
  p = {};
  p.noise_density_w_per_hz = NAN;
  EXPECT_EQ(CodeOf([&] { p.Validate(); }), ErrorCode::kInvalidArgument);
}

TEST(PhysicsTest, FiveMetreTransmissionIsAboutOnePointTwoMilliseconds) {
  NetworkInstance inst = MakeInstance({{0, 0}}, {{5, 0}});
  double sinr = Sinr(inst, 0, ActivationSet{0});
  double seconds = TransmissionSeconds(inst.physics(), sinr);
  EXPECT_NEAR(seconds, 1.2e-3, 0.05 * 1.2e-3);
  EXPECT_NEAR(seconds, 1.2040e-3, 1e-6);
  EXPECT_EQ(TransmissionTime(inst, 0, ActivationSet{0}), 13);
}

TEST(SinrTest, SoloHasNoInterferenceTerm) {
  NetworkInstance inst = MakeInstance({{0, 0}}, {{5, 0}});
  const auto& p = inst.physics();
  double expected = p.tx_power_watts * std::pow(5.0, -2.5) /
                    (p.noise_density_w_per_hz * p.bandwidth_hz);
  EXPECT_NEAR(Sinr(inst, 0, ActivationSet{0}) / expected, 1.0, 1e-12);
}

TEST(SinrTest, ZeroOverlapGivesSoloSinr) {
  NetworkInstance inst = MakeInstance({{0, 0}, {20, 0}}, {{3, 1}, {17, -2}}, 0.0);
  EXPECT_DOUBLE_EQ(Sinr(inst, 0, ActivationSet{0, 1}), Sinr(inst, 0, ActivationSet{0}));
  EXPECT_DOUBLE_EQ(Sinr(inst, 1, ActivationSet{0, 1}), Sinr(inst, 1, ActivationSet{1}));
}

TEST(SinrTest, SymmetricPairMatchesReference) {
  NetworkInstance inst = MakeInstance({{0, 0}, {20, 0}}, {{4, 0}, {16, 0}}, 0.3);
  for (int u : {0, 1}) {
    double got = Sinr(inst, u, ActivationSet{0, 1});
    double want = RefSinr(inst, u, {0, 1});
    EXPECT_NEAR(got / want, 1.0, 1e-12);
  }
  EXPECT_NEAR(Sinr(inst, 0, ActivationSet{0, 1}), Sinr(inst, 1, ActivationSet{0, 1}),
              1e-9 * Sinr(inst, 0, ActivationSet{0, 1}));
}

TEST(SinrTest, InterfererDistanceIsMeasuredToVictimAp) {
  // User 1 is 8 m from its own AP and 12 m from AP 0.
  NetworkInstance inst = MakeInstance({{0, 0}, {20, 0}}, {{5, 0}, {12, 0}}, 1.0);
  const auto& p = inst.physics();
  double signal = p.tx_power_watts * std::pow(5.0, -2.5);
  double interference = p.tx_power_watts * std::pow(12.0, -2.5);
  double expected = signal / (p.NoisePower() + interference);
  EXPECT_NEAR(Sinr(inst, 0, ActivationSet{0, 1}) / expected, 1.0, 1e-12);
}

TEST(SinrTest, Errors) {
  NetworkInstance inst = MakeInstance({{0, 0}, {20, 0}}, {{3, 0}, {17, 0}}, 0.5);
  EXPECT_EQ(CodeOf([&] { Sinr(inst, 0, ActivationSet{1}); }),
            ErrorCode::kContractViolation);
  NetworkInstance on_ap = MakeInstance({{0, 0}}, {{0, 0}});
  EXPECT_EQ(CodeOf([&] { Sinr(on_ap, 0, ActivationSet{0}); }),
            ErrorCode::kDegenerateGeometry);
  EXPECT_EQ(CodeOf([&] { on_ap.CheckGeometry(); }), ErrorCode::kDegenerateGeometry);
}

TEST(TransmissionTimeTest, UnitSinrUnitRateIsOneSlot) {
  // Choose L / T_s = B so that one slot carries L bits at log2(2) = 1.
  PhysicsParams p;
  p.bandwidth_hz = 1000.0;
  p.slot_seconds = 1.0;
  p.update_size_bits = 1000;
  NetworkInstance inst = MakeInstance({{0, 0}}, {{5, 0}}, 0.0, p);
  EXPECT_EQ(SlotsForSinr(inst, 1.0), 1);
}

TEST(TransmissionTimeTest, SoloTimesMatchReference) {
  NetworkInstance inst = RandomLineInstance(4, 5, 0.4, 3);
  for (int u = 0; u < inst.num_users(); ++u) {
    EXPECT_EQ(TransmissionTime(inst, u, ActivationSet{u}), RefTau(inst, u, {u}))
        << "user " << u;
  }
}

TEST(TransmissionTimeTest, AddingInterferersNeverShortensTransmission) {
  NetworkInstance inst = RandomLineInstance(3, 3, 0.7, 11, 12.0);
  for (const ActivationSet& s : FeasibleSets(inst)) {
    for (int i : s.members()) {
      for (int j = 0; j < inst.num_users(); ++j) {
        ActivationSet bigger;
        if (s.contains(j) || !inst.IsFeasible(bigger = s.With(j))) continue;
        EXPECT_GE(TransmissionTime(inst, i, bigger), TransmissionTime(inst, i, s));
      }
    }
  }
}

TEST(TransmissionTimeTest, ZeroOverlapDecouples) {
  NetworkInstance inst = RandomLineInstance(3, 3, 0.0, 5, 10.0);
  for (const ActivationSet& s : FeasibleSets(inst)) {
    for (int i : s.members()) {
      EXPECT_EQ(TransmissionTime(inst, i, s), TransmissionTime(inst, i, ActivationSet{i}));
    }
  }
}

TEST(FrameLengthTest, EmptyFrameIsOneSlot) {
  NetworkInstance inst = MakeInstance({{0, 0}}, {{5, 0}});
  EXPECT_EQ(FrameLength(inst, ActivationSet{}), 1);
  EXPECT_EQ(FrameLength(inst, ActivationSet{0}), TransmissionTime(inst, 0, ActivationSet{0}));
}

TEST(FrameLengthTest, PairIsSlowestMember) {
  NetworkInstance inst = MakeInstance({{0, 0}, {15, 0}}, {{6, 0}, {13, 3}}, 0.5);
  ActivationSet both{0, 1};
  EXPECT_EQ(FrameLength(inst, both), std::max(RefTau(inst, 0, {0, 1}), RefTau(inst, 1, {0, 1})));
}

TEST(FrameLengthTest, KernelMatchesCheckedPathBitForBit) {
  NetworkInstance inst = RandomLineInstance(3, 4, 0.6, 9, 14.0);
  std::vector<int> taus(3);
  for (const ActivationSet& s : FeasibleSets(inst)) {
    int frame = FrameLengthInto(inst, s.members(), taus);
    EXPECT_EQ(frame, FrameLength(inst, s));
    auto checked = TransmissionTimes(inst, s);
    for (std::size_t m = 0; m < checked.size(); ++m) EXPECT_EQ(taus[m], checked[m]);
    EXPECT_EQ(frame, RefFrame(inst, Members(s)));
  }
}

TEST(FeasibleSetsTest, TwoSingletonAps) {
  NetworkInstance inst = MakeInstance({{0, 0}, {20, 0}}, {{3, 0}, {17, 0}});
  std::vector<ActivationSet> got;
  for (const ActivationSet& s : FeasibleSets(inst)) got.push_back(s);
  ASSERT_EQ(got.size(), 4u);
  EXPECT_TRUE(got[0].empty());
  std::set<ActivationSet> unique(got.begin(), got.end());
  EXPECT_EQ(unique, (std::set<ActivationSet>{{}, {0}, {1}, {0, 1}}));
}

TEST(FeasibleSetsTest, ProductCount) {
  NetworkInstance inst = RandomLineInstance(3, 5, 0.0, 1);
  EXPECT_EQ(CountFeasibleSets(inst), 216u);
  std::size_t n = 0;
  for (const ActivationSet& s : FeasibleSets(inst)) {
    EXPECT_TRUE(inst.IsFeasible(s));
    ++n;
  }
  EXPECT_EQ(n, 216u);
}

TEST(FeasibleSetsTest, MatchesPowersetFilter) {
  NetworkInstance inst = MakeInstance({{0, 0}, {20, 0}},
                                      {{2, 0}, {0, 3}, {-2, 1}, {18, 0}, {20, 2}});
  std::set<std::vector<int>> got;
  for (const ActivationSet& s : FeasibleSets(inst)) {
    EXPECT_TRUE(got.insert(Members(s)).second) << "duplicate";
  }
  auto ref = RefFeasibleSets(inst);
  EXPECT_EQ(got.size(), 12u);
  EXPECT_EQ(got, std::set<std::vector<int>>(ref.begin(), ref.end()));
}

TEST(FeasibleSetsTest, ExhaustiveMatroidCheckUpToThreeAps) {
  for (int k = 1; k <= 3; ++k) {
    NetworkInstance inst = RandomLineInstance(k, 3, 0.2, 40 + k);
    auto ref = RefFeasibleSets(inst);
    std::size_t n = 0;
    for (const ActivationSet& s : FeasibleSets(inst)) {
      std::vector<int> per_ap(k, 0);
      for (int i : s.members()) EXPECT_LE(++per_ap[inst.ap_of(i)], 1);
      ++n;
    }
    EXPECT_EQ(n, ref.size());
    EXPECT_EQ(n, CountFeasibleSets(inst));
  }
}

TEST(FrameTableTest, BudgetAndContents) {
  NetworkInstance inst = RandomLineInstance(3, 5, 0.3, 2, 15.0);
  EXPECT_EQ(CodeOf([&] { FrameTable::Build(inst, 100); }), ErrorCode::kBudgetExceeded);
  FrameTable t = FrameTable::Build(inst, 1000);
  ASSERT_EQ(t.size(), 216u);
  std::size_t s = 0;
  for (const ActivationSet& set : FeasibleSets(inst)) {
    EXPECT_EQ(t.set(s), set);
    EXPECT_EQ(t.frame_length(s), FrameLength(inst, set));
    ++s;
  }
}

TEST(ActivationSetTest, SortsAndRejectsDuplicates) {
  ActivationSet s{3, 1, 2};
  EXPECT_EQ(Members(s), (std::vector<int>{1, 2, 3}));
  EXPECT_TRUE(s.contains(2));
  EXPECT_FALSE(s.contains(0));
  EXPECT_EQ(Members(s.Without(2)), (std::vector<int>{1, 3}));
  EXPECT_EQ(Members(s.With(0)), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(CodeOf([] { ActivationSet{1, 1}; }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { ActivationSet{-1}; }), ErrorCode::kInvalidArgument);
  EXPECT_LT(ActivationSet{}, ActivationSet{0});
  EXPECT_LT((ActivationSet{0, 5}), (ActivationSet{1}));
}

TEST(NetworkInstanceTest, Validation) {
  std::vector<AccessPoint> aps = {{0, {0, 0}, 1}, {1, {20, 0}, 1}};
  std::vector<UserNode> users = {{0, {3, 0}, 0, 1.0}, {1, {17, 0}, 1, 1.0}};
  std::vector<std::vector<double>> eta = {{0, 0.2}, {0.2, 0}};
  EXPECT_NO_THROW(NetworkInstance(aps, users, {}, eta));

  auto far = users;
  far[0].ap_id = 1;  // not the nearest AP
  EXPECT_EQ(CodeOf([&] { NetworkInstance(aps, far, {}, eta); }),
            ErrorCode::kInvalidArgument);
  auto unknown = users;
  unknown[1].ap_id = 7;
  EXPECT_EQ(CodeOf([&] { NetworkInstance(aps, unknown, {}, eta); }),
            ErrorCode::kUnknownAp);
  auto asym = eta;
  asym[0][1] = 0.3;
  EXPECT_EQ(CodeOf([&] { NetworkInstance(aps, users, {}, asym); }),
            ErrorCode::kInvalidArgument);
  auto big = eta;
  big[0][1] = big[1][0] = 1.5;
  EXPECT_EQ(CodeOf([&] { NetworkInstance(aps, users, {}, big); }),
            ErrorCode::kInvalidArgument);
  auto heavy = users;
  heavy[0].weight = 0.0;
  EXPECT_EQ(CodeOf([&] { NetworkInstance(aps, heavy, {}, eta); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { NetworkInstance(aps, {}, {}, {}); }),
            ErrorCode::kInvalidArgument);
}

TEST(NetworkInstanceTest, EquidistantUserGoesToLowestAp) {
  std::vector<AccessPoint> aps = {{0, {0, 0}, 1}, {1, {10, 0}, 1}};
  EXPECT_EQ(NearestAp(aps, {5, 3}), 0);
}

TEST(OverlapTest, ChannelReuse) {
  std::vector<AccessPoint> aps = {{0, {0, 0}, 1}, {1, {20, 0}, 6}, {2, {40, 0}, 1}};
  std::vector<UserNode> users = {{0, {1, 0}, 0, 1}, {1, {21, 0}, 1, 1},
                                 {2, {41, 0}, 2, 1}, {3, {2, 0}, 0, 1}};
  auto eta = OverlapFromChannels(aps, users, ChannelReuseOverlap{});
  EXPECT_EQ(eta[0][1], 0.0);  // channels 1 and 6
  EXPECT_EQ(eta[0][2], 1.0);  // both on channel 1
  EXPECT_EQ(eta[0][3], 0.0);  // same AP
  EXPECT_EQ(eta[2][0], 1.0);
}

TEST(OverlapTest, UniformCrossAp) {
  NetworkInstance inst = MakeInstance({{0, 0}, {20, 0}}, {{1, 0}, {2, 0}, {19, 0}}, 0.35);
  EXPECT_EQ(inst.overlap(0, 2), 0.35);
  EXPECT_EQ(inst.overlap(1, 2), 0.35);
  EXPECT_EQ(inst.overlap(0, 1), 0.0);
  std::vector<AccessPoint> aps = {{0, {0, 0}, 1}};
  std::vector<UserNode> users = {{0, {1, 0}, 0, 1}};
  EXPECT_EQ(CodeOf([&] { OverlapFromChannels(aps, users, UniformCrossApOverlap{1.2}); }),
            ErrorCode::kInvalidArgument);
}

TEST(DeterminismTest, IdenticalInputsIdenticalOutputs) {
  NetworkInstance a = RandomLineInstance(3, 4, 0.5, 77, 12.0);
  NetworkInstance b = RandomLineInstance(3, 4, 0.5, 77, 12.0);
  for (const ActivationSet& s : FeasibleSets(a)) {
    EXPECT_EQ(TransmissionTimes(a, s), TransmissionTimes(b, s));
    EXPECT_EQ(FrameLength(a, s), FrameLength(b, s));
  }
}

}  // namespace
}  // namespace aoi
