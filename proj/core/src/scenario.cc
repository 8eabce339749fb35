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

#include "aoi/scenario.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "aoi/error.h"
#include "aoi/io.h"
#include "aoi/rng.h"

namespace aoi {

using nlohmann::json;

NetworkInstance GenTwoAp(const TwoApLayout& layout, uint64_t seed,
                         PhysicsParams physics) {
  if (!(layout.separation_m > 0.0 && layout.user_radius_m > 0.0) ||
      layout.users_per_ap < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad two-AP layout");
  }
  if (!(layout.eta >= 0.0 && layout.eta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eta must lie in [0, 1]");
  }
  std::vector<AccessPoint> aps = {{0, {0.0, 0.0}, 1},
                                  {1, {layout.separation_m, 0.0}, 1}};
  RngStream rng(seed, "two-ap-positions");
  std::vector<UserNode> users;
  for (int k = 0; k < 2; ++k) {
    for (int u = 0; u < layout.users_per_ap; ++u) {
      Point p;
      do {
        double r = layout.user_radius_m * std::sqrt(rng.Uniform());
        double theta = 2.0 * std::numbers::pi * rng.Uniform();
        p = {aps[k].position.x + r * std::cos(theta),
             aps[k].position.y + r * std::sin(theta)};
      } while (NearestAp(aps, p) != k || Distance(p, aps[k].position) == 0.0);
      users.push_back({static_cast<int>(users.size()), p, k, 1.0});
    }
  }
  auto overlap = OverlapFromChannels(aps, users, UniformCrossApOverlap{layout.eta});
  return NetworkInstance(std::move(aps), std::move(users), physics,
                         std::move(overlap));
}

std::vector<std::pair<int, int>> HexCells(int num_aps) {
  if (num_aps < 3 || num_aps % 3 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "hex layouts need a positive multiple of 3 APs, got " +
                    std::to_string(num_aps));
  }
  if (num_aps == 3) return {{0, 0}, {1, 0}, {0, 1}};
  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < num_aps / 3; ++r) {
    for (int c = 0; c < 3; ++c) cells.push_back({c - r / 2, r});
  }
  return cells;
}

NetworkInstance GenHex(const HexLayout& layout, uint64_t seed,
                       PhysicsParams physics) {
  if (!(layout.cell_radius_m > 0.0) || layout.users_per_cell < 1 ||
      layout.channels.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "bad hex layout");
  }
  const double radius = layout.cell_radius_m;
  std::vector<AccessPoint> aps;
  for (auto [q, r] : HexCells(layout.num_aps)) {
    Point centre{radius * std::sqrt(3.0) * (q + r / 2.0), radius * 1.5 * r};
    int colour = (((q - r) % 3) + 3) % 3;
    aps.push_back({static_cast<int>(aps.size()), centre, layout.channels[colour]});
  }
  RngStream rng(seed, "hex-positions");
  std::vector<UserNode> users;
  for (const AccessPoint& ap : aps) {
    for (int u = 0; u < layout.users_per_cell; ++u) {
      // Uniform over one of the six equilateral triangles of the hexagon.
      int tri = static_cast<int>(rng.Below(6));
      double a0 = std::numbers::pi / 180.0 * (60.0 * tri - 30.0);
      double a1 = a0 + std::numbers::pi / 3.0;
      double s = rng.Uniform();
      double t = rng.Uniform();
      if (s + t > 1.0) {
        s = 1.0 - s;
        t = 1.0 - t;
      }
      Point p{ap.position.x + radius * (s * std::cos(a0) + t * std::cos(a1)),
              ap.position.y + radius * (s * std::sin(a0) + t * std::sin(a1))};
      users.push_back({static_cast<int>(users.size()), p, NearestAp(aps, p), 1.0});
    }
  }
  auto overlap = OverlapFromChannels(aps, users, ChannelReuseOverlap{});
  return NetworkInstance(std::move(aps), std::move(users), physics,
                         std::move(overlap));
}

namespace {

std::string FormatValue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

int AsCount(double v, const std::string& key) {
  if (v != std::floor(v) || v < 1.0) {
    throw Error(ErrorCode::kParse, "sweep '" + key + "' needs positive integers");
  }
  return static_cast<int>(v);
}

void ApplySweep(LayoutSpec& layout, const std::string& key, double v) {
  if (auto* t = std::get_if<TwoApLayout>(&layout)) {
    if (key == "eta") t->eta = v;
    else if (key == "users_per_ap") t->users_per_ap = AsCount(v, key);
    else if (key == "separation_m") t->separation_m = v;
    else if (key == "user_radius_m") t->user_radius_m = v;
    else if (key == "pathloss_exponent") t->pathloss_exponent = v;
    else throw Error(ErrorCode::kParse, "cannot sweep two-ap field '" + key + "'");
  } else {
    auto& h = std::get<HexLayout>(layout);
    if (key == "num_aps") h.num_aps = AsCount(v, key);
    else if (key == "users_per_cell") h.users_per_cell = AsCount(v, key);
    else if (key == "cell_radius_m") h.cell_radius_m = v;
    else if (key == "pathloss_exponent") h.pathloss_exponent = v;
    else throw Error(ErrorCode::kParse, "cannot sweep hex field '" + key + "'");
  }
}

template <typename T>
T Field(const json& doc, const char* key, const std::string& where) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, where + "." + key + ": " + e.what());
  }
}

template <typename T>
void Optional(const json& doc, const char* key, const std::string& where,
              T& out) {
  if (doc.contains(key)) out = Field<T>(doc, key, where);
}

}  // namespace

std::vector<ScenarioPoint> ScenarioSpec::Points() const {
  std::vector<ScenarioPoint> points(1);
  points[0].id = name;
  points[0].layout = layout;
  for (const auto& [key, values] : sweep) {
    std::vector<ScenarioPoint> next;
    for (const ScenarioPoint& p : points) {
      for (double v : values) {
        ScenarioPoint q = p;
        ApplySweep(q.layout, key, v);
        q.id += "_" + key + "=" + FormatValue(v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  for (ScenarioPoint& p : points) {
    if (const auto* t = std::get_if<TwoApLayout>(&p.layout)) p.eta = t->eta;
  }
  return points;
}

PhysicsParams ScenarioSpec::PhysicsFor(const ScenarioPoint& point) const {
  PhysicsParams base;
  std::visit([&](const auto& l) { base.pathloss_exponent = l.pathloss_exponent; },
             point.layout);
  return PhysicsFromJson(physics, base);
}

NetworkInstance ScenarioSpec::Instantiate(const ScenarioPoint& point,
                                          uint64_t seed) const {
  PhysicsParams phy = PhysicsFor(point);
  if (const auto* t = std::get_if<TwoApLayout>(&point.layout)) {
    return GenTwoAp(*t, seed, phy);
  }
  return GenHex(std::get<HexLayout>(point.layout), seed, phy);
}

json LayoutToJson(const LayoutSpec& layout) {
  if (const auto* t = std::get_if<TwoApLayout>(&layout)) {
    return {{"kind", "two-ap"},
            {"separation_m", t->separation_m},
            {"user_radius_m", t->user_radius_m},
            {"users_per_ap", t->users_per_ap},
            {"eta", t->eta},
            {"pathloss_exponent", t->pathloss_exponent}};
  }
  const auto& h = std::get<HexLayout>(layout);
  return {{"kind", "hex"},
          {"cell_radius_m", h.cell_radius_m},
          {"num_aps", h.num_aps},
          {"users_per_cell", h.users_per_cell},
          {"channels", h.channels},
          {"pathloss_exponent", h.pathloss_exponent}};
}

LayoutSpec LayoutFromJson(const json& doc) {
  const std::string where = "layout";
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "layout must be an object");
  const std::string kind = Field<std::string>(doc, "kind", where);
  if (kind == "two-ap") {
    TwoApLayout t;
    Optional(doc, "separation_m", where, t.separation_m);
    Optional(doc, "user_radius_m", where, t.user_radius_m);
    Optional(doc, "users_per_ap", where, t.users_per_ap);
    Optional(doc, "eta", where, t.eta);
    Optional(doc, "pathloss_exponent", where, t.pathloss_exponent);
    if (!(t.eta >= 0.0 && t.eta <= 1.0)) {
      throw Error(ErrorCode::kParse, "layout.eta must lie in [0, 1]");
    }
    return t;
  }
  if (kind == "hex") {
    HexLayout h;
    Optional(doc, "cell_radius_m", where, h.cell_radius_m);
    Optional(doc, "num_aps", where, h.num_aps);
    Optional(doc, "users_per_cell", where, h.users_per_cell);
    Optional(doc, "channels", where, h.channels);
    Optional(doc, "pathloss_exponent", where, h.pathloss_exponent);
    if (h.channels.size() != 3) {
      throw Error(ErrorCode::kParse, "layout.channels must list 3 channels");
    }
    if (h.num_aps < 3 || h.num_aps % 3 != 0) {
      throw Error(ErrorCode::kParse, "layout.num_aps must be a positive multiple of 3");
    }
    return h;
  }
  throw Error(ErrorCode::kParse, "layout.kind must be 'two-ap' or 'hex'");
}

ScenarioSpec ScenarioFromJson(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "scenario must be an object");
  const std::string where = "scenario";
  ScenarioSpec s;
  Optional(doc, "name", where, s.name);
  if (!doc.contains("layout")) throw Error(ErrorCode::kParse, "missing 'layout'");
  s.layout = LayoutFromJson(doc["layout"]);
  if (doc.contains("physics")) {
    s.physics = doc["physics"];
    PhysicsFromJson(s.physics);
  }
  if (doc.contains("policies")) {
    s.policies = Field<std::vector<std::string>>(doc, "policies", where);
    if (s.policies.empty()) {
      throw Error(ErrorCode::kParse, "scenario.policies must not be empty");
    }
  } else {
    s.policies = KnownPolicies();
  }
  for (const auto& p : s.policies) {
    const auto& known = KnownPolicies();
    if (std::find(known.begin(), known.end(), p) == known.end()) {
      throw Error(ErrorCode::kParse, "unknown policy '" + p + "'");
    }
  }
  if (doc.contains("seeds")) {
    s.seeds = Field<std::vector<uint64_t>>(doc, "seeds", where);
    if (s.seeds.empty()) throw Error(ErrorCode::kParse, "scenario.seeds must not be empty");
  } else {
    for (uint64_t k = 1; k <= 10; ++k) s.seeds.push_back(k);
  }
  Optional(doc, "horizon_slots", where, s.horizon_slots);
  if (s.horizon_slots < 1) throw Error(ErrorCode::kParse, "horizon_slots must be >= 1");
  Optional(doc, "epsilon", where, s.epsilon);
  if (!(s.epsilon > 0.0)) throw Error(ErrorCode::kParse, "epsilon must be positive");
  Optional(doc, "column_budget", where, s.column_budget);
  if (doc.contains("sweep")) {
    s.sweep = Field<std::map<std::string, std::vector<double>>>(doc, "sweep", where);
    for (const auto& [key, values] : s.sweep) {
      if (values.empty()) {
        throw Error(ErrorCode::kParse, "sweep '" + key + "' has no values");
      }
    }
  }
  s.Points();  // validates sweep keys
  return s;
}

json ScenarioToJson(const ScenarioSpec& s) {
  return {{"name", s.name},
          {"layout", LayoutToJson(s.layout)},
          {"physics", s.physics},
          {"policies", s.policies},
          {"seeds", s.seeds},
          {"horizon_slots", s.horizon_slots},
          {"epsilon", s.epsilon},
          {"column_budget", s.column_budget},
          {"sweep", s.sweep}};
}

}  // namespace aoi
