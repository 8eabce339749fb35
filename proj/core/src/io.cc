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

#include "aoi/io.h"

#include <fstream>
#include <sstream>

#include "aoi/error.h"

namespace aoi {

using nlohmann::json;

namespace {

json PointToJson(Point p) { return json::array({p.x, p.y}); }

Point PointFromJson(const json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw Error(ErrorCode::kParse, "position must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
T Required(const json& doc, const char* key) {
  if (!doc.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'");
  }
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse,
                std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

json PhysicsToJson(const PhysicsParams& p) {
  return {{"tx_power_watts", p.tx_power_watts},
          {"pathloss_exponent", p.pathloss_exponent},
          {"bandwidth_hz", p.bandwidth_hz},
          {"noise_density_w_per_hz", p.noise_density_w_per_hz},
          {"update_size_bits", p.update_size_bits},
          {"slot_seconds", p.slot_seconds}};
}

PhysicsParams PhysicsFromJson(const json& doc, PhysicsParams base) {
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "physics must be an object");
  auto read = [&](const char* key, auto& field) {
    if (doc.contains(key)) {
      field = Required<std::decay_t<decltype(field)>>(doc, key);
    }
  };
  read("tx_power_watts", base.tx_power_watts);
  read("pathloss_exponent", base.pathloss_exponent);
  read("bandwidth_hz", base.bandwidth_hz);
  read("noise_density_w_per_hz", base.noise_density_w_per_hz);
  read("update_size_bits", base.update_size_bits);
  read("slot_seconds", base.slot_seconds);
  if (doc.contains("noise_density_dbm_per_hz")) {
    base.noise_density_w_per_hz = DbmPerHzToWattsPerHz(
        Required<double>(doc, "noise_density_dbm_per_hz"));
  }
  base.Validate();
  return base;
}

json InstanceToJson(const NetworkInstance& instance) {
  json aps = json::array();
  for (const auto& ap : instance.aps()) {
    aps.push_back({{"id", ap.id},
                   {"position", PointToJson(ap.position)},
                   {"channel", ap.channel}});
  }
  json users = json::array();
  for (const auto& u : instance.users()) {
    users.push_back({{"id", u.id},
                     {"position", PointToJson(u.position)},
                     {"ap_id", u.ap_id},
                     {"weight", u.weight}});
  }
  return {{"aps", aps},
          {"users", users},
          {"physics", PhysicsToJson(instance.physics())},
          {"overlap", instance.OverlapMatrix()}};
}

NetworkInstance InstanceFromJson(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "instance must be an object");
  std::vector<AccessPoint> aps;
  for (const auto& a : Required<json>(doc, "aps")) {
    AccessPoint ap;
    ap.id = Required<int>(a, "id");
    ap.position = PointFromJson(Required<json>(a, "position"));
    ap.channel = a.value("channel", 1);
    aps.push_back(ap);
  }
  std::vector<UserNode> users;
  for (const auto& u : Required<json>(doc, "users")) {
    UserNode user;
    user.id = Required<int>(u, "id");
    user.position = PointFromJson(Required<json>(u, "position"));
    user.ap_id = Required<int>(u, "ap_id");
    user.weight = u.value("weight", 1.0);
    users.push_back(user);
  }
  PhysicsParams physics;
  if (doc.contains("physics")) physics = PhysicsFromJson(doc["physics"]);
  auto overlap = Required<std::vector<std::vector<double>>>(doc, "overlap");
  return NetworkInstance(std::move(aps), std::move(users), physics,
                         std::move(overlap));
}

json DistributionToJson(const ScheduleDistribution& dist) {
  json out = json::array();
  for (const auto& e : dist.entries()) {
    std::vector<int> members(e.set.members().begin(), e.set.members().end());
    out.push_back({{"members", members}, {"prob", e.prob}});
  }
  return out;
}

ScheduleDistribution DistributionFromJson(const json& doc) {
  if (!doc.is_array()) throw Error(ErrorCode::kParse, "distribution must be an array");
  std::vector<ScheduleDistribution::Entry> entries;
  for (const auto& e : doc) {
    entries.push_back({ActivationSet(Required<std::vector<int>>(e, "members")),
                       Required<double>(e, "prob")});
  }
  return ScheduleDistribution(std::move(entries));
}

json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const json& doc) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParse, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace aoi
