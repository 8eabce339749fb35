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

#ifndef AOI_IO_H_
#define AOI_IO_H_

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "aoi/model.h"
#include "aoi/policies.h"

namespace aoi {

// Instance document:
//   {"aps":   [{"id", "position": [x, y], "channel"}],
//    "users": [{"id", "position": [x, y], "ap_id", "weight"}],
//    "physics": {"tx_power_watts", "pathloss_exponent", "bandwidth_hz",
//                "noise_density_w_per_hz", "update_size_bits",
//                "slot_seconds"},
//    "overlap": [[...], ...]}
nlohmann::json InstanceToJson(const NetworkInstance& instance);
NetworkInstance InstanceFromJson(const nlohmann::json& doc);

nlohmann::json PhysicsToJson(const PhysicsParams& physics);
// Missing keys keep the values already in `base`.
PhysicsParams PhysicsFromJson(const nlohmann::json& doc,
                              PhysicsParams base = {});

// Distribution document: [{"members": [ids], "prob": p}, ...]
nlohmann::json DistributionToJson(const ScheduleDistribution& dist);
ScheduleDistribution DistributionFromJson(const nlohmann::json& doc);

// Throws kParse with the path in the message on I/O or syntax errors.
nlohmann::json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path,
                   const nlohmann::json& doc);

}  // namespace aoi

#endif  // AOI_IO_H_
