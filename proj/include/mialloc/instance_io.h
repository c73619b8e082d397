// Copyright 2026 The mialloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIALLOC_INSTANCE_IO_H_
#define MIALLOC_INSTANCE_IO_H_

#include <string>

#include "json.hpp"
#include "mialloc/instance.h"

namespace mialloc {

// Instance documents look like
//
//   {"T": 2, "N": 1, "class": "gradient_bounded", "p_min": 1.0, "p_max": 2.0,
//    "C": [1.0], "A": [1.0, 1.0],
//    "slots": [[{"kind": "linear", "params": {"slope": 1.0}, "delta": 1.0}],
//              [...]]}
//
// Doubles are written in shortest round-trip form, so
// ToJson(FromJson(ToJson(x))) reproduces the same text.
nlohmann::ordered_json RevenueToJson(const RevenueFunction& g);
RevenueFunction RevenueFromJson(const nlohmann::json& j);

nlohmann::ordered_json InstanceToJson(const Instance& instance);
Instance InstanceFromJson(const nlohmann::json& j);

std::string SerializeInstance(const Instance& instance);
Instance ParseInstance(const std::string& text);

Instance ReadInstanceFile(const std::string& path);
void WriteInstanceFile(const Instance& instance, const std::string& path);

// FNV-1a hash of the serialized form, as 16 hex digits.
std::string InstanceId(const Instance& instance);

}  // namespace mialloc

#endif  // MIALLOC_INSTANCE_IO_H_
