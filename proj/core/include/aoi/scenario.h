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

// Network layouts and scenario files.

#ifndef AOI_SCENARIO_H_
#define AOI_SCENARIO_H_

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "aoi/model.h"

namespace aoi {

// Two APs on the x axis; each AP's users are drawn uniformly from the disc of
// radius user_radius_m around it, keeping only draws that are closer to their
// own AP, so the split stays equal and association stays nearest-AP.
struct TwoApLayout {
  double separation_m = 15.0;
  double user_radius_m = 15.0;
  int users_per_ap = 5;
  double eta = 0.0;
  double pathloss_exponent = 3.5;
};

// Pointy-top hexagonal cells in axial coordinates (q, r) with centres
// R (sqrt(3) (q + r/2), 3r/2). Three APs form a mutually adjacent triangle;
// 3m APs (m >= 2) are m offset rows of three. Channels follow the colouring
// (q - r) mod 3, so neighbouring cells never share a channel.
struct HexLayout {
  double cell_radius_m = 7.0;
  int num_aps = 9;
  int users_per_cell = 5;
  std::vector<int> channels = {1, 6, 11};
  double pathloss_exponent = 2.5;
};

using LayoutSpec = std::variant<TwoApLayout, HexLayout>;

// Positions depend only on (layout geometry, seed), never on eta.
NetworkInstance GenTwoAp(const TwoApLayout& layout, uint64_t seed,
                         PhysicsParams physics);
NetworkInstance GenHex(const HexLayout& layout, uint64_t seed,
                       PhysicsParams physics);

// Axial coordinates of the cells used for `num_aps`; throws kInvalidArgument
// unless num_aps is a positive multiple of 3.
std::vector<std::pair<int, int>> HexCells(int num_aps);

// A scenario point: a fully resolved layout plus its identifier.
struct ScenarioPoint {
  std::string id;
  LayoutSpec layout;
  double eta = 0.0;  // reported in the results; 0 for hex layouts
};

struct ScenarioSpec {
  std::string name = "scenario";
  LayoutSpec layout;
  nlohmann::json physics = nlohmann::json::object();  // overrides
  std::vector<std::string> policies;
  std::vector<uint64_t> seeds;
  int64_t horizon_slots = 10000;
  double epsilon = 0.1;
  uint64_t column_budget = 100000;
  // Layout field -> values; the cartesian product is swept.
  std::map<std::string, std::vector<double>> sweep;

  std::vector<ScenarioPoint> Points() const;
  // Physics for a point: defaults, then the layout's path-loss exponent,
  // then the overrides.
  PhysicsParams PhysicsFor(const ScenarioPoint& point) const;
  NetworkInstance Instantiate(const ScenarioPoint& point, uint64_t seed) const;
};

// Recognised policy names.
inline const std::vector<std::string>& KnownPolicies() {
  static const std::vector<std::string> kNames = {"baseline", "srp", "mw",
                                                  "amw"};
  return kNames;
}

// Throws kParse naming the offending field.
ScenarioSpec ScenarioFromJson(const nlohmann::json& doc);
nlohmann::json ScenarioToJson(const ScenarioSpec& spec);
nlohmann::json LayoutToJson(const LayoutSpec& layout);
LayoutSpec LayoutFromJson(const nlohmann::json& doc);

}  // namespace aoi

#endif  // AOI_SCENARIO_H_
